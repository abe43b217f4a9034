#include "obrb/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "obrb/checkpoint.hpp"
#include "obrb/errors.hpp"
#include "obrb/initial.hpp"

namespace obrb {

const char *const kDiagnosticsCsvHeader =
    "t,KE,thermal_E,theta_min,theta_max,ut1_bound,div_max,w7_res,w15_res,rel_energy,mean_theta";

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_row(std::ofstream &os, const DiagnosticsLog &log, std::size_t k) {
    os << fmt(log.times[k]) << ',' << fmt(log.kinetic[k]) << ',' << fmt(log.thermal[k]) << ','
       << fmt(log.theta_min[k]) << ',' << fmt(log.theta_max[k]) << ',' << fmt(log.ut1) << ','
       << fmt(log.div_max[k]) << ',' << fmt(log.w7_res[k]) << ',' << fmt(log.w15_res[k]) << ','
       << fmt(log.rel_energy[k]) << ',' << fmt(log.mean_theta[k]) << '\n';
}

} // namespace

RunResult run(const RunConfig &config, const std::string &out_dir_override,
              const EquilibriumSolution *eq, bool write_outputs) {
    config.params.validate();
    Grid grid = build_grid(config.nx, config.ny, config.lx, config.ly);
    RunResult result;
    result.problem = make_problem(grid, config.params);
    const Problem &problem = result.problem;

    result.out_dir = out_dir_override.empty() ? config.out_dir : out_dir_override;
    std::ofstream csv;
    if (write_outputs) {
        std::filesystem::create_directories(result.out_dir);
        csv.open(result.out_dir + "/diagnostics.csv", std::ios::trunc);
        if (!csv)
            throw io_error("run: cannot write to " + result.out_dir);
        csv << "# obrb diagnostics v1\n";
        csv << "# prng = mt19937_64, seed = " << config.params.seed << "\n";
        csv << kDiagnosticsCsvHeader << '\n';
    }

    SimState state = build_initial_state(config, problem);
    DiagnosticsLog &log = result.log;
    if (write_outputs)
        log.snapshot_dir = result.out_dir;
    if (eq)
        log.register_equilibrium(*eq);
    log.register_initial(state, problem.closure, config.params.lin_tol);
    if (write_outputs)
        write_row(csv, log, 0);

    StepWorkspace ws;
    long long n_out = 0;
    long long n_ckpt = 0;
    std::size_t last_row = 0;

    while (state.t < config.t_end - 1e-12) {
        const double dt_cap = config.t_end - state.t;
        try {
            StepReport rep = full_step(state, problem, ws, dt_cap);
            log.record(state, problem.closure, rep);
        } catch (const solver_error &e) {
            result.solver_failed = true;
            result.failure = e.what();
            if (write_outputs)
                checkpoint_write(state, result.out_dir + "/final.obrb");
            break;
        }
        const std::size_t k = log.times.size() - 1;
        const long long crossed = static_cast<long long>((state.t + 1e-12) / config.output_every);
        if (write_outputs && crossed > n_out) {
            write_row(csv, log, k);
            last_row = k;
            n_out = crossed;
        }
        if (write_outputs && config.checkpoint_every > 0) {
            const long long c =
                static_cast<long long>((state.t + 1e-12) / config.checkpoint_every);
            if (c > n_ckpt) {
                checkpoint_write(state, result.out_dir + "/checkpoint_" + std::to_string(c) +
                                            ".obrb");
                n_ckpt = c;
            }
        }
    }

    if (write_outputs) {
        const std::size_t k = log.times.size() - 1;
        if (k != last_row && k > 0)
            write_row(csv, log, k);
        csv.close();
        if (!result.solver_failed)
            checkpoint_write(state, result.out_dir + "/final.obrb");

        std::ofstream vio(result.out_dir + "/violations.csv", std::ios::trunc);
        vio << "# obrb violations v1\n";
        vio << "t,step,kind,value,bound,snapshot\n";
        for (const ViolationEvent &ev : log.violations)
            vio << fmt(ev.t) << ',' << ev.step << ',' << to_string(ev.kind) << ',' << fmt(ev.value)
                << ',' << fmt(ev.bound) << ',' << ev.snapshot << '\n';
    }

    result.final_state = std::move(state);
    return result;
}

} // namespace obrb

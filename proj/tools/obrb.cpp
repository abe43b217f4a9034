// obrb: 2D incompressible convection solver with a mean-coupled temperature
// boundary condition, plus its named verification suites.
//
// Exit codes: 0 success/pass, 1 assertion failure, 2 usage or config error,
// 3 solver failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "obrb/checkpoint.hpp"
#include "obrb/equilibrium.hpp"
#include "obrb/errors.hpp"
#include "obrb/initial.hpp"
#include "obrb/run.hpp"
#include "obrb/verify.hpp"

namespace {

int cmd_run(const std::string &config_path, const std::string &out_dir) {
    obrb::RunConfig cfg = obrb::load_config(config_path);
    obrb::RunResult res = obrb::run(cfg, out_dir);
    if (res.solver_failed) {
        std::cerr << "solver failure: " << res.failure << "\n";
        std::cerr << "final checkpoint written to " << res.out_dir << "/final.obrb\n";
        return 3;
    }
    std::cout << "run complete: t = " << res.final_state.t << ", steps = " << res.final_state.step
              << ", violations = " << res.log.violations.size() << "\n";
    std::cout << "diagnostics: " << res.out_dir << "/diagnostics.csv\n";
    return res.log.violations.empty() ? 0 : 1;
}

int cmd_verify(const std::string &suite, const std::string &config_path,
               const std::string &out_dir) {
    std::optional<obrb::RunConfig> base;
    if (!config_path.empty())
        base = obrb::load_config(config_path);
    std::string dir = out_dir.empty() ? ("verify_" + suite) : out_dir;
    obrb::SuiteReport rep = obrb::verify(suite, base, dir);
    for (const obrb::SuiteCheck &c : rep.checks)
        std::printf("[%s] %s: measured %.6g vs bound %.6g %s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.measured, c.bound, c.detail.c_str());
    std::printf("suite %s: %s (report: %s/report.json)\n", rep.suite.c_str(),
                rep.pass ? "PASS" : "FAIL", dir.c_str());
    if (!rep.pass && !rep.first_counterexample.empty())
        std::printf("first counterexample checkpoint: %s\n", rep.first_counterexample.c_str());
    return rep.pass ? 0 : 1;
}

int cmd_equilibrium(const std::string &config_path) {
    obrb::RunConfig cfg = obrb::load_config(config_path);
    obrb::Grid grid = obrb::build_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    obrb::Problem problem = obrb::make_problem(grid, cfg.params);
    obrb::EquilibriumSolution eq;
    try {
        eq = obrb::aligned_equilibrium(problem);
        std::cout << "aligned equilibrium (closed form)\n";
    } catch (const obrb::invalid_argument_error &) {
        std::cout << "data not aligned; marching to steady state...\n";
        obrb::SimState init = obrb::build_initial_state(cfg, problem);
        eq = obrb::steady_solve(problem, init, 1e-7, cfg.t_end);
    }
    std::cout << "mean(theta_s) = " << obrb::mean(eq.thetas) << "\n";
    std::cout << "residual = " << eq.residual << ", bc defect = " << eq.bc_defect << "\n";
    obrb::SimState s(grid);
    s.theta = eq.thetas;
    s.u = eq.us;
    obrb::checkpoint_write(s, cfg.out_dir + std::string("/equilibrium.obrb"));
    std::cout << "written to " << cfg.out_dir << "/equilibrium.obrb\n";
    return 0;
}

int cmd_stability(const std::string &config_path) {
    obrb::RunConfig cfg = obrb::load_config(config_path);
    obrb::Grid grid = obrb::build_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    obrb::Problem problem = obrb::make_problem(grid, cfg.params);
    obrb::StabilityReport st = obrb::stability_check(problem);
    std::printf("C_p                      = %.10g\n", st.cp);
    std::printf("|grad G| * |grad thetaB| = %.10g\n", st.lhs);
    std::printf("C_p^2 * mu * kappa       = %.10g\n", st.rhs);
    std::printf("aligned                  = %s\n", st.aligned ? "yes" : "no");
    std::printf("condition satisfied      = %s (margin %.10g)\n", st.satisfied ? "yes" : "no",
                st.margin);
    std::printf("optimal balance Z        = %.10g\n", st.optimal_Z);
    std::printf("quadratic form: min %.10g vs threshold %.10g (%s)\n", st.quad_min, st.quad_rhs,
                st.quad_satisfied ? "satisfied" : "not satisfied");
    if (st.aligned) {
        obrb::EquilibriumSolution eq = obrb::aligned_equilibrium(problem);
        const double margin = obrb::smallness_margin(eq, problem);
        std::printf("relative-energy margin   = %.10g (decay rate >= %.10g)\n", margin,
                    2.0 * margin);
    }
    return 0;
}

int cmd_poincare(int nx, int ny, double lx, double ly, double tol) {
    obrb::Grid g = obrb::build_grid(nx, ny, lx, ly);
    const double cp = obrb::poincare_constant(g, tol);
    std::printf("C_p = %.12g  (lambda_1 = %.12g)\n", cp, cp * cp);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"2D Oberbeck-Boussinesq solver with a non-local temperature boundary condition"};
    app.require_subcommand(1);

    std::string config_path, out_dir, suite;
    int nx = 64, ny = 64;
    double lx = 1.0, ly = 1.0, tol = 1e-8;

    CLI::App *c_run = app.add_subcommand("run", "run a simulation from a config file");
    c_run->add_option("--config", config_path, "config file")->required();
    c_run->add_option("--out", out_dir, "output directory (overrides config)");

    CLI::App *c_verify = app.add_subcommand("verify", "run a named verification suite");
    c_verify->add_option("--suite", suite, "suite name")->required();
    c_verify->add_option("--config", config_path, "base config overriding the defaults");
    c_verify->add_option("--out", out_dir, "output directory");

    CLI::App *c_eq = app.add_subcommand("equilibrium", "compute the stationary solution");
    c_eq->add_option("--config", config_path, "config file")->required();

    CLI::App *c_st = app.add_subcommand("stability", "evaluate the stability conditions");
    c_st->add_option("--config", config_path, "config file")->required();

    CLI::App *c_pc = app.add_subcommand("poincare", "Poincare constant of a rectangle");
    c_pc->add_option("--nx", nx, "cells in x");
    c_pc->add_option("--ny", ny, "cells in y");
    c_pc->add_option("--lx", lx, "length in x");
    c_pc->add_option("--ly", ly, "length in y");
    c_pc->add_option("--tol", tol, "eigenvalue tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (c_run->parsed())
            return cmd_run(config_path, out_dir);
        if (c_verify->parsed())
            return cmd_verify(suite, config_path, out_dir);
        if (c_eq->parsed())
            return cmd_equilibrium(config_path);
        if (c_st->parsed())
            return cmd_stability(config_path);
        if (c_pc->parsed())
            return cmd_poincare(nx, ny, lx, ly, tol);
    } catch (const obrb::config_error &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const obrb::invalid_argument_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const obrb::solver_error &e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

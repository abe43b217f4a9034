#include "obrb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "obrb/checkpoint.hpp"
#include "obrb/errors.hpp"
#include "obrb/initial.hpp"
#include "obrb/run.hpp"

namespace obrb {

namespace {

using nlohmann::json;

RunConfig default_base() {
    RunConfig cfg;
    cfg.nx = 64;
    cfg.ny = 64;
    cfg.lx = 1.0;
    cfg.ly = 1.0;
    cfg.params.mu = 1.0;
    cfg.params.kappa = 1.0;
    cfg.params.alpha = 0.5;
    cfg.params.g_spec = FuncSpec::parse("linear_y(-1)");
    cfg.params.thetaB_spec = FuncSpec::parse("constant(0.5) + linear_y(-1)"); // 1 - y
    cfg.params.dt_cfl = 0.4;
    cfg.params.dt_max = 0.05;
    cfg.params.lin_tol = 1e-10;
    cfg.params.seed = 1;
    cfg.t_end = 2.0;
    cfg.output_every = 0.05;
    return cfg;
}

struct SuiteBuilder {
    SuiteReport report;
    std::string out_dir;

    explicit SuiteBuilder(std::string suite, std::string dir) {
        report.suite = std::move(suite);
        report.pass = true;
        out_dir = std::move(dir);
        std::filesystem::create_directories(out_dir);
    }

    void check(const std::string &name, bool pass, double measured, double bound,
               const std::string &detail = "", const std::string &counterexample = "") {
        SuiteCheck c;
        c.name = name;
        c.pass = pass;
        c.measured = measured;
        c.bound = bound;
        c.detail = detail;
        report.checks.push_back(std::move(c));
        if (!pass) {
            report.pass = false;
            if (report.first_counterexample.empty() && !counterexample.empty())
                report.first_counterexample = counterexample;
        }
    }
};

std::string member_dir(const std::string &out_dir, int idx) {
    std::ostringstream os;
    os << out_dir << "/member_" << idx;
    return os.str();
}

// Runs ensemble members concurrently; each writes into its own directory.
std::vector<RunResult> run_ensemble(const std::vector<RunConfig> &members,
                                    const std::string &out_dir,
                                    const EquilibriumSolution *eq = nullptr) {
    std::vector<std::future<RunResult>> futs;
    futs.reserve(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) {
        const RunConfig &cfg = members[k];
        std::string dir = member_dir(out_dir, static_cast<int>(k));
        futs.push_back(std::async(std::launch::async,
                                  [cfg, dir, eq]() { return run(cfg, dir, eq); }));
    }
    std::vector<RunResult> results;
    results.reserve(members.size());
    for (auto &f : futs)
        results.push_back(f.get());
    return results;
}

std::string violation_counterexample(const RunResult &r, ViolationKind kind) {
    for (const ViolationEvent &ev : r.log.violations)
        if (ev.kind == kind && !ev.snapshot.empty())
            return ev.snapshot;
    return r.out_dir + "/final.obrb";
}

// Checks shared by every suite member: no solver failure, no envelope, UT1,
// truncation, divergence or energy-identity events.
void standard_member_checks(SuiteBuilder &sb, const std::string &tag, const RunResult &r) {
    sb.check(tag + ".completed", !r.solver_failed, r.solver_failed ? 1 : 0, 0, r.failure,
             r.out_dir + "/final.obrb");
    const struct {
        ViolationKind kind;
        const char *name;
    } kinds[] = {
        {ViolationKind::max_principle, "max_principle"},
        {ViolationKind::ut1_bound, "ut1"},
        {ViolationKind::w22_truncation, "w22"},
        {ViolationKind::divergence, "divergence"},
        {ViolationKind::w7_energy, "w7"},
        {ViolationKind::w15_energy, "w15"},
    };
    for (const auto &k : kinds) {
        const std::size_t n = r.log.violation_count(k.kind);
        sb.check(tag + ".zero_" + k.name + "_events", n == 0, static_cast<double>(n), 0, "",
                 violation_counterexample(r, k.kind));
    }
}

double series_sup_abs_theta(const DiagnosticsLog &log) {
    double m = 0;
    for (std::size_t k = 0; k < log.times.size(); ++k)
        m = std::max({m, std::fabs(log.theta_min[k]), std::fabs(log.theta_max[k])});
    return m;
}

// ---------------------------------------------------------------- bounds ---

SuiteReport suite_bounds(const RunConfig &base, const std::string &out_dir) {
    SuiteBuilder sb("bounds", out_dir);
    const double alphas[] = {0.1, 0.5, 0.9};
    const int grids[] = {32, 64};
    const std::uint64_t seeds[] = {1, 2, 3};

    std::vector<RunConfig> members;
    std::vector<std::string> tags;
    for (double a : alphas)
        for (int n : grids)
            for (std::uint64_t s : seeds) {
                RunConfig cfg = base;
                cfg.nx = cfg.ny = n;
                cfg.params.alpha = a;
                cfg.params.mu = 0.2;
                cfg.params.kappa = 0.2;
                cfg.params.seed = s;
                cfg.t_end = 50.0;
                cfg.output_every = 0.5;
                cfg.theta0 = Theta0Spec{}; // zero
                cfg.u0 = U0Spec::parse("random_divfree(1)");
                members.push_back(cfg);
                std::ostringstream tag;
                tag << "alpha" << a << "_n" << n << "_s" << s;
                tags.push_back(tag.str());
            }

    std::vector<RunResult> results = run_ensemble(members, out_dir);
    for (std::size_t k = 0; k < results.size(); ++k) {
        const RunResult &r = results[k];
        sb.report.member_dirs.push_back(r.out_dir);
        standard_member_checks(sb, tags[k], r);
        const double sup = series_sup_abs_theta(r.log);
        const double bound = r.log.ut1 + 10.0 * r.log.lin_tol;
        sb.check(tags[k] + ".ut1_sup", sup <= bound, sup, bound, "",
                 violation_counterexample(r, ViolationKind::ut1_bound));
    }
    // Theta0 = 0, max|thetaB| = 1, alpha = 0.5: the bound evaluates to 8/3.
    for (std::size_t k = 0; k < members.size(); ++k)
        if (members[k].params.alpha == 0.5) {
            const double want = 8.0 / 3.0;
            sb.check("ut1_constant_is_8_3", std::fabs(results[k].log.ut1 - want) <= 1e-12,
                     results[k].log.ut1, want);
            break;
        }
    return sb.report;
}

// --------------------------------------------------------- maxprinciple ---

SuiteReport suite_maxprinciple(const RunConfig &base, const std::string &out_dir) {
    SuiteBuilder sb("maxprinciple", out_dir);
    const double alphas[] = {0.1, 0.5, 0.9};
    const int grids[] = {32, 64};

    std::vector<RunConfig> members;
    std::vector<std::string> tags;
    for (double a : alphas)
        for (int n : grids) {
            RunConfig cfg = base;
            cfg.nx = cfg.ny = n;
            cfg.params.alpha = a;
            cfg.params.mu = 0.1;
            cfg.params.kappa = 0.1;
            cfg.params.seed = 5;
            cfg.t_end = 5.0;
            cfg.output_every = 0.1;
            cfg.theta0 = Theta0Spec::parse("random(1)");
            cfg.u0 = U0Spec::parse("random_divfree(2)");
            members.push_back(cfg);
            std::ostringstream tag;
            tag << "alpha" << a << "_n" << n;
            tags.push_back(tag.str());
        }

    std::vector<RunResult> results = run_ensemble(members, out_dir);
    for (std::size_t k = 0; k < results.size(); ++k) {
        sb.report.member_dirs.push_back(results[k].out_dir);
        standard_member_checks(sb, tags[k], results[k]);
    }
    return sb.report;
}

// -------------------------------------------------------- dissipativity ---

SuiteReport suite_dissipativity(const RunConfig &base, const std::string &out_dir) {
    SuiteBuilder sb("dissipativity", out_dir);
    const double amps[] = {1.0, 10.0, 100.0};
    const double discard_T = 20.0;

    std::vector<RunConfig> members;
    std::vector<std::string> tags;
    for (double amp : amps) {
        RunConfig cfg = base;
        cfg.params.seed = 7;
        cfg.t_end = 45.0;
        cfg.output_every = 0.5;
        std::ostringstream th;
        th << "random(" << amp << ")";
        cfg.theta0 = Theta0Spec::parse(th.str());
        std::ostringstream uv;
        uv << "random_divfree(" << amp << ")";
        cfg.u0 = U0Spec::parse(uv.str());
        members.push_back(cfg);
        std::ostringstream tag;
        tag << "amp" << amp;
        tags.push_back(tag.str());
    }

    std::vector<RunResult> results = run_ensemble(members, out_dir);
    std::vector<double> radii;
    for (std::size_t k = 0; k < results.size(); ++k) {
        sb.report.member_dirs.push_back(results[k].out_dir);
        standard_member_checks(sb, tags[k], results[k]);
        const double radius = absorbing_radius({&results[k].log}, discard_T);
        radii.push_back(radius);
        sb.check(tags[k] + ".radius_finite", std::isfinite(radius) && radius >= 0, radius, 0);
    }
    const double rmax = *std::max_element(radii.begin(), radii.end());
    const double rmin = *std::min_element(radii.begin(), radii.end());
    const double spread = (rmax > 0) ? (rmax - rmin) / rmax : 0.0;
    std::ostringstream detail;
    detail << "radii";
    for (double r : radii)
        detail << " " << r;
    sb.check("radius_amplitude_independence", spread <= 0.20, spread, 0.20, detail.str());
    return sb.report;
}

// -------------------------------------------------------------- ergodic ---

SuiteReport suite_ergodic(const RunConfig &base, const std::string &out_dir) {
    SuiteBuilder sb("ergodic", out_dir);
    RunConfig cfg = base;
    cfg.params.seed = 9;
    cfg.t_end = 100.0;
    cfg.output_every = 1.0;
    cfg.theta0 = Theta0Spec::parse("equilibrium");
    cfg.u0 = U0Spec::parse("random_divfree(0.02)");

    std::vector<RunResult> results = run_ensemble({cfg}, out_dir);
    const RunResult &r = results[0];
    sb.report.member_dirs.push_back(r.out_dir);
    standard_member_checks(sb, "subcritical", r);

    const ErgodicAverage ke = ergodic_average(r.log.times, r.log.kinetic);
    const ErgodicAverage mth = ergodic_average(r.log.times, r.log.mean_theta);
    sb.check("ke_running_mean_cauchy_gap", ke.cauchy_gap <= 1e-6, ke.cauchy_gap, 1e-6);
    sb.check("mean_theta_running_mean_cauchy_gap", mth.cauchy_gap <= 1e-6, mth.cauchy_gap, 1e-6);
    sb.check("ke_mean_near_equilibrium_value", std::fabs(ke.running_mean.back()) <= 1e-4,
             ke.running_mean.back(), 1e-4);
    return sb.report;
}

// ------------------------------------------------------------ stability ---

SuiteReport suite_stability(const RunConfig &base, const std::string &out_dir) {
    SuiteBuilder sb("stability", out_dir);
    Grid grid = build_grid(base.nx, base.ny, base.lx, base.ly);
    Problem problem = make_problem(grid, base.params);
    EquilibriumSolution eq = aligned_equilibrium(problem);
    sb.check("equilibrium_bc_defect", eq.bc_defect <= 1e-9, eq.bc_defect, 1e-9);
    double trace_calTs = 0;
    {
        const ScalarField &cT = eq.calTs;
        for (int j = 0; j < grid.ny; ++j) {
            trace_calTs = std::max(trace_calTs,
                                   std::fabs(0.5 * (cT.ghost(Edge::west)[j] + cT(0, j))));
            trace_calTs = std::max(
                trace_calTs, std::fabs(0.5 * (cT.ghost(Edge::east)[j] + cT(grid.nx - 1, j))));
        }
        for (int i = 0; i < grid.nx; ++i) {
            trace_calTs = std::max(trace_calTs,
                                   std::fabs(0.5 * (cT.ghost(Edge::south)[i] + cT(i, 0))));
            trace_calTs = std::max(
                trace_calTs, std::fabs(0.5 * (cT.ghost(Edge::north)[i] + cT(i, grid.ny - 1))));
        }
    }
    sb.check("equilibrium_calT_trace", trace_calTs <= 1e-9, trace_calTs, 1e-9);

    const double margin = smallness_margin(eq, problem);
    sb.check("smallness_margin_positive", margin > 0, margin, 0);

    // Perturbed run with the equilibrium registered: exponential decay of the
    // relative energy with a clean tail fit.
    RunConfig cfg = base;
    cfg.params.seed = 11;
    cfg.t_end = 2.5;
    cfg.output_every = 0.01;
    cfg.theta0 = Theta0Spec{}; // zero: O(1) initial distance from equilibrium
    cfg.u0 = U0Spec::parse("random_divfree(0.5)");
    std::vector<RunResult> results = run_ensemble({cfg}, out_dir, &eq);
    const RunResult &r = results[0];
    sb.report.member_dirs.push_back(r.out_dir);
    standard_member_checks(sb, "perturbed", r);

    const std::vector<double> &rel = r.log.rel_energy;
    const double e0 = rel.front();
    const double efinal = rel.back();
    sb.check("rel_energy_final_ratio", efinal <= 1e-8 * e0, efinal / e0, 1e-8);

    // Monotone after the first step, up to the per-step scheme allowance.
    double worst_rise = 0;
    for (std::size_t k = 2; k < rel.size(); ++k) {
        const double dt = r.log.times[k] - r.log.times[k - 1];
        const double h2 = grid.hx * grid.hx + grid.hy * grid.hy;
        const double slack = 100.0 * dt * (h2 + dt * dt) * (1.0 + rel[k - 1]);
        worst_rise = std::max(worst_rise, rel[k] - rel[k - 1] - slack);
    }
    sb.check("rel_energy_nonincreasing", worst_rise <= 0, worst_rise, 0);

    // Fit on the decaying stretch above the solver noise floor.
    std::vector<double> ts, es;
    for (std::size_t k = 0; k < rel.size(); ++k)
        if (rel[k] > e0 * 1e-13) {
            ts.push_back(r.log.times[k]);
            es.push_back(rel[k]);
        }
    DecayFit fit = fit_decay_rate(ts, es, 0.6 * (ts.back() - ts.front()));
    sb.check("decay_rate_positive", fit.rate > 0, fit.rate, 0);
    sb.check("decay_fit_quality", fit.r2 >= 0.99, fit.r2, 0.99);

    // steady_solve from two different small initial states agrees with the
    // closed form (and hence with itself) to 10*tol_steady.
    const double tol_steady = 1e-7;
    auto march = [&](std::uint64_t seed, double amp) {
        SimState init(grid);
        init.u = random_divfree_velocity(grid, amp, seed);
        return steady_solve(problem, init, tol_steady, 50.0);
    };
    EquilibriumSolution eqA = march(12, 0.3);
    EquilibriumSolution eqB = march(13, 0.1);
    auto dist_to_closed = [&](const EquilibriumSolution &e) {
        ScalarField dth = e.thetas;
        dth -= eq.thetas;
        return cell_l2(dth) + vec_l2(e.us);
    };
    sb.check("steady_solve_matches_aligned_A", dist_to_closed(eqA) <= 10 * tol_steady,
             dist_to_closed(eqA), 10 * tol_steady);
    sb.check("steady_solve_matches_aligned_B", dist_to_closed(eqB) <= 10 * tol_steady,
             dist_to_closed(eqB), 10 * tol_steady);
    {
        ScalarField dth = eqA.thetas;
        dth -= eqB.thetas;
        VectorField du = eqA.us;
        du -= eqB.us;
        const double d = cell_l2(dth) + vec_l2(du);
        sb.check("steady_solve_two_inits_agree", d <= 10 * tol_steady, d, 10 * tol_steady);
    }
    return sb.report;
}

// ------------------------------------------------------------- rayleigh ---

SuiteReport suite_rayleigh(const RunConfig &base, const std::string &out_dir) {
    SuiteBuilder sb("rayleigh", out_dir);
    Grid grid = build_grid(base.nx, base.ny, base.lx, base.ly);
    Problem problem = make_problem(grid, base.params);
    StabilityReport st = stability_check(problem);

    sb.check("aligned", st.aligned, st.aligned ? 1 : 0, 1);
    sb.check("rb_lhs_is_one", std::fabs(st.lhs - 1.0) <= 1e-10, st.lhs, 1.0);
    const double two_pi2 = 2.0 * M_PI * M_PI;
    sb.check("rb_rhs_near_2pi2", std::fabs(st.rhs - two_pi2) <= 0.01 * two_pi2, st.rhs, two_pi2);
    sb.check("rb_satisfied", st.satisfied, st.lhs, st.rhs);
    sb.check("rb_margin", st.margin > 18.0, st.margin, 18.0,
             "expected about 2*pi^2 - 1 = 18.739");

    // Scaling mu*kappa by 1/100 flips the verdict.
    {
        RunConfig scaled = base;
        scaled.params.mu = 0.1;
        scaled.params.kappa = 0.1;
        Problem p2 = make_problem(grid, scaled.params);
        StabilityReport st2 = stability_check(p2);
        sb.check("rb_unsatisfied_when_scaled", !st2.satisfied, st2.rhs, st2.lhs);
    }
    // The condition is a product: swapping the amplitude roles of the two
    // gradients leaves the verdict unchanged.
    {
        RunConfig swapped = base;
        swapped.params.g_spec = FuncSpec::parse("linear_y(-0.5)");
        swapped.params.thetaB_spec = FuncSpec::parse("constant(1) + linear_y(-2)");
        Problem p3 = make_problem(grid, swapped.params);
        StabilityReport st3 = stability_check(p3);
        sb.check("rb_product_swap_invariant", st3.satisfied == st.satisfied && st3.lhs == st.lhs,
                 st3.lhs, st.lhs);
    }

    // Decay run under (RB): K > 0.
    EquilibriumSolution eq = aligned_equilibrium(problem);
    RunConfig cfg = base;
    cfg.params.seed = 15;
    cfg.t_end = 1.5;
    cfg.output_every = 0.01;
    cfg.theta0 = Theta0Spec{};
    cfg.u0 = U0Spec::parse("random_divfree(0.3)");
    std::vector<RunResult> results = run_ensemble({cfg}, out_dir, &eq);
    const RunResult &r = results[0];
    sb.report.member_dirs.push_back(r.out_dir);
    standard_member_checks(sb, "rb_run", r);
    std::vector<double> ts, es;
    const double e0 = r.log.rel_energy.front();
    for (std::size_t k = 0; k < r.log.rel_energy.size(); ++k)
        if (r.log.rel_energy[k] > e0 * 1e-13) {
            ts.push_back(r.log.times[k]);
            es.push_back(r.log.rel_energy[k]);
        }
    DecayFit fit = fit_decay_rate(ts, es, 0.6 * (ts.back() - ts.front()));
    sb.check("decay_rate_positive", fit.rate > 0, fit.rate, 0);
    return sb.report;
}

// ----------------------------------------------------------- uniqueness ---

SuiteReport suite_uniqueness(const RunConfig &base, const std::string &out_dir) {
    SuiteBuilder sb("uniqueness", out_dir);
    Grid grid = build_grid(base.nx, base.ny, base.lx, base.ly);

    // Eigenmode difference, u = 0, alpha = 0: pure heat decay at 2*kappa*lambda1.
    {
        Params p = base.params;
        p.alpha = 0.0;
        p.thetaB_spec = FuncSpec::parse("constant(0)");
        p.dt_max = 0.002;
        BoundaryClosure closure = make_closure(grid, p.thetaB_spec, 0.0);
        ScalarField mode(grid);
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                mode(i, j) = std::sin(M_PI * grid.xc(i) / grid.lx) *
                             std::sin(M_PI * grid.yc(j) / grid.ly);
        ScalarField zero(grid);
        ContractionReport rep =
            frozen_velocity_contraction(mode, zero, {}, closure, p, 0.2);
        sb.check("eigenmode_monotone", rep.max_step_increase <= 1e-12 * rep.initial_energy,
                 rep.max_step_increase, 1e-12 * rep.initial_energy);
        DecayFit fit = fit_decay_rate(rep.times, rep.energy, 0.15);
        const double cp = poincare_constant(grid, 1e-10);
        const double want = 2.0 * p.kappa * cp * cp;
        const double err = std::fabs(fit.rate - want) / want;
        sb.check("eigenmode_rate_within_5pct", err <= 0.05, fit.rate, want,
                 "relative error " + std::to_string(err));
    }

    // Random difference under a frozen swirl: monotone decay within the
    // Poincare envelope (grid slack eps_h = 0.1).
    {
        Params p = base.params;
        p.dt_max = 0.002;
        BoundaryClosure closure = make_closure(grid, p.thetaB_spec, p.alpha);
        Problem prob = make_problem(grid, p);
        Theta0Spec spec1 = Theta0Spec::parse("random(1)");
        ScalarField th1 = build_theta0(spec1, prob, 21);
        ScalarField th2 = build_theta0(spec1, prob, 22);
        VectorField swirl = eigenmode_velocity(grid, 1.0);
        const double T = 0.8;
        ContractionReport rep =
            frozen_velocity_contraction(th1, th2, {swirl}, closure, p, T);
        sb.check("swirl_monotone", rep.max_step_increase <= 1e-12 * rep.initial_energy,
                 rep.max_step_increase, 1e-12 * rep.initial_energy);
        const double cp = poincare_constant(grid, 1e-10);
        const double eps_h = 0.1;
        const double envelope =
            rep.initial_energy * std::exp(-2.0 * p.kappa * cp * cp * T * (1.0 - eps_h));
        sb.check("swirl_poincare_envelope", rep.final_energy <= envelope, rep.final_energy,
                 envelope);
    }

    // Identical data: the difference energy is identically zero.
    {
        Params p = base.params;
        BoundaryClosure closure = make_closure(grid, p.thetaB_spec, p.alpha);
        Problem prob = make_problem(grid, p);
        ScalarField th = build_theta0(Theta0Spec::parse("random(1)"), prob, 23);
        ContractionReport rep = frozen_velocity_contraction(th, th, {}, closure, p, 0.02);
        double emax = 0;
        for (double e : rep.energy)
            emax = std::max(emax, e);
        sb.check("identical_data_zero_energy", emax == 0.0, emax, 0);
    }
    return sb.report;
}

} // namespace

std::vector<std::string> suite_names() {
    return {"maxprinciple", "bounds", "dissipativity", "ergodic",
            "stability",    "rayleigh", "uniqueness"};
}

std::string SuiteReport::to_json() const {
    json j;
    j["suite"] = suite;
    j["pass"] = pass;
    j["first_counterexample"] = first_counterexample;
    j["members"] = member_dirs;
    j["checks"] = json::array();
    for (const SuiteCheck &c : checks) {
        json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        jc["measured"] = c.measured;
        jc["bound"] = c.bound;
        if (!c.detail.empty())
            jc["detail"] = c.detail;
        j["checks"].push_back(jc);
    }
    return j.dump(2);
}

SuiteReport verify(const std::string &suite_name, const std::optional<RunConfig> &base_in,
                   const std::string &out_dir, int /*threads*/) {
    RunConfig base = base_in ? *base_in : default_base();
    SuiteReport rep;
    if (suite_name == "bounds")
        rep = suite_bounds(base, out_dir);
    else if (suite_name == "maxprinciple")
        rep = suite_maxprinciple(base, out_dir);
    else if (suite_name == "dissipativity")
        rep = suite_dissipativity(base, out_dir);
    else if (suite_name == "ergodic")
        rep = suite_ergodic(base, out_dir);
    else if (suite_name == "stability")
        rep = suite_stability(base, out_dir);
    else if (suite_name == "rayleigh")
        rep = suite_rayleigh(base, out_dir);
    else if (suite_name == "uniqueness")
        rep = suite_uniqueness(base, out_dir);
    else
        throw invalid_argument_error("unknown suite '" + suite_name + "'; expected one of " +
                                     "maxprinciple, bounds, dissipativity, ergodic, stability, " +
                                     "rayleigh, uniqueness");
    std::ofstream os(out_dir + "/report.json");
    os << rep.to_json() << '\n';
    return rep;
}

} // namespace obrb

#include "obrb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "obrb/checkpoint.hpp"
#include "obrb/errors.hpp"

namespace obrb {

std::string to_string(ViolationKind k) {
    switch (k) {
    case ViolationKind::max_principle: return "max_principle";
    case ViolationKind::ut1_bound: return "ut1_bound";
    case ViolationKind::w7_energy: return "w7_energy";
    case ViolationKind::w15_energy: return "w15_energy";
    case ViolationKind::w22_truncation: return "w22_truncation";
    case ViolationKind::divergence: return "divergence";
    }
    return "unknown";
}

double ut1_bound(const ScalarField &theta0, const BoundaryClosure &closure) {
    const double a = closure.alpha;
    if (!(a > 0.0 && a < 1.0))
        throw invalid_argument_error("ut1_bound: requires 0 < alpha < 1, got " +
                                     std::to_string(a));
    return theta0.max_abs() + 2.0 / (1.0 - a * a) * closure.trace.max_abs();
}

void DiagnosticsLog::register_initial(const SimState &s0, const BoundaryClosure &closure,
                                      double lin_tol_in) {
    lin_tol = lin_tol_in;
    const double a = closure.alpha;
    // Same formula as ut1_bound; alpha = 0 is tolerated here for decoupled runs.
    ut1 = s0.theta.max_abs() + 2.0 / (1.0 - a * a) * closure.trace.max_abs();

    times.push_back(s0.t);
    steps.push_back(s0.step);
    kinetic.push_back(0.5 * vec_inner(s0.u, s0.u));
    const ScalarField calT = to_calT(s0.theta, closure);
    thermal.push_back(lambda_energy(calT, a));
    theta_min.push_back(s0.theta.min_value());
    theta_max.push_back(s0.theta.max_value());
    theta_l2.push_back(cell_l2(s0.theta));
    mean_theta.push_back(mean(s0.theta));
    div_max.push_back(max_abs_divergence(s0.u));
    w7_res.push_back(0.0);
    w15_res.push_back(0.0);
    if (equilibrium) {
        ScalarField dT = calT;
        dT -= equilibrium->calTs;
        VectorField du = s0.u;
        du -= equilibrium->us;
        rel_energy.push_back(0.5 * vec_inner(du, du) + lambda_energy(dT, a));
    } else {
        rel_energy.push_back(std::numeric_limits<double>::quiet_NaN());
    }
}

void DiagnosticsLog::register_equilibrium(EquilibriumSolution eq) {
    equilibrium = std::move(eq);
}

void DiagnosticsLog::record(const SimState &state, const BoundaryClosure &closure,
                            const StepReport &rep) {
    const double a = closure.alpha;
    times.push_back(state.t);
    steps.push_back(state.step);
    const double ke = 0.5 * vec_inner(state.u, state.u);
    kinetic.push_back(ke);
    const ScalarField calT = to_calT(state.theta, closure);
    thermal.push_back(lambda_energy(calT, a));
    theta_min.push_back(rep.theta_min);
    theta_max.push_back(rep.theta_max);
    theta_l2.push_back(cell_l2(state.theta));
    mean_theta.push_back(mean(state.theta));
    div_max.push_back(rep.div_max);
    w7_res.push_back(rep.w7_residual);
    w15_res.push_back(rep.w15_residual);
    if (equilibrium) {
        ScalarField dT = calT;
        dT -= equilibrium->calTs;
        VectorField du = state.u;
        du -= equilibrium->us;
        rel_energy.push_back(0.5 * vec_inner(du, du) + lambda_energy(dT, a));
    } else {
        rel_energy.push_back(std::numeric_limits<double>::quiet_NaN());
    }

    auto file_event = [&](ViolationKind kind, double value, double bound) {
        ViolationEvent ev;
        ev.t = state.t;
        ev.step = state.step;
        ev.kind = kind;
        ev.value = value;
        ev.bound = bound;
        if (!snapshot_dir.empty() && violation_count(kind) == 0) {
            ev.snapshot = snapshot_dir + "/violation_" + to_string(kind) + ".obrb";
            checkpoint_write(state, ev.snapshot);
        }
        violations.push_back(std::move(ev));
    };

    const double env_tol = 10.0 * lin_tol;
    if (rep.envelope_excess > env_tol)
        file_event(ViolationKind::max_principle, rep.envelope_excess, env_tol);

    const double amax = std::max(std::fabs(rep.theta_min), std::fabs(rep.theta_max));
    if (amax > ut1 + env_tol)
        file_event(ViolationKind::ut1_bound, amax, ut1 + env_tol);

    if (rep.div_max > env_tol)
        file_event(ViolationKind::divergence, rep.div_max, env_tol);

    if (rep.w7_residual > rep.w7_tolerance)
        file_event(ViolationKind::w7_energy, rep.w7_residual, rep.w7_tolerance);
    if (std::fabs(rep.w15_residual) > rep.w15_tolerance)
        file_event(ViolationKind::w15_energy, std::fabs(rep.w15_residual), rep.w15_tolerance);

    const double w22_slack =
        (1e-12 + 100.0 * lin_tol) * rep.scale * rep.scale * state.theta.grid().area;
    const double w22_worst = std::max(rep.w22_pos_delta, rep.w22_neg_delta);
    if (w22_worst > w22_slack)
        file_event(ViolationKind::w22_truncation, w22_worst, w22_slack);
}

std::size_t DiagnosticsLog::violation_count(ViolationKind k) const {
    std::size_t n = 0;
    for (const auto &v : violations)
        if (v.kind == k)
            ++n;
    return n;
}

double DiagnosticsLog::sup_state_norm(double discard_T) const {
    double m = 0;
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] > discard_T)
            m = std::max(m, std::sqrt(2.0 * kinetic[k]) + theta_l2[k]);
    return m;
}

DecayFit fit_decay_rate(const std::vector<double> &times, const std::vector<double> &energy,
                        double window, double floor) {
    if (times.size() != energy.size())
        throw invalid_argument_error("fit_decay_rate: series length mismatch");
    DecayFit fit;
    if (times.empty())
        throw invalid_argument_error("fit_decay_rate: empty series");
    const double t_start = times.back() - window;
    std::vector<double> ts, ls;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t_start)
            continue;
        if (!(energy[k] > floor)) {
            fit.hit_floor = true;
            fit.floor_time = times[k];
            break;
        }
        ts.push_back(times[k]);
        ls.push_back(std::log(energy[k]));
    }
    if (ts.size() < 8) {
        if (fit.hit_floor)
            return fit;
        throw invalid_argument_error("fit_decay_rate: fewer than 8 samples in window");
    }
    const double n = static_cast<double>(ts.size());
    double st = 0, sl = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        st += ts[k];
        sl += ls[k];
    }
    const double tbar = st / n, lbar = sl / n;
    double cov = 0, var = 0, sstot = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        cov += (ts[k] - tbar) * (ls[k] - lbar);
        var += (ts[k] - tbar) * (ts[k] - tbar);
        sstot += (ls[k] - lbar) * (ls[k] - lbar);
    }
    const double slope = cov / var;
    const double intercept = lbar - slope * tbar;
    double ssres = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double r = ls[k] - (intercept + slope * ts[k]);
        ssres += r * r;
    }
    fit.rate = -slope;
    fit.prefactor = std::exp(intercept);
    fit.r2 = (sstot > 1e-30) ? 1.0 - ssres / sstot : 1.0;
    fit.samples = static_cast<int>(ts.size());
    return fit;
}

ErgodicAverage ergodic_average(const std::vector<double> &times,
                               const std::vector<double> &values) {
    if (times.size() != values.size() || times.size() < 2)
        throw invalid_argument_error("ergodic_average: need at least 2 samples");
    ErgodicAverage out;
    out.times = times;
    out.running_mean.resize(times.size());
    out.running_mean[0] = values[0];
    double integral = 0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        integral += 0.5 * (values[k] + values[k - 1]) * (times[k] - times[k - 1]);
        const double span = times[k] - times[0];
        out.running_mean[k] = (span > 0) ? integral / span : values[k];
    }
    const double T = times.back() - times.front();
    auto osc = [&](double lo, double hi) {
        double mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double s = times[k] - times.front();
            if (s >= lo && s <= hi) {
                mn = std::min(mn, out.running_mean[k]);
                mx = std::max(mx, out.running_mean[k]);
            }
        }
        return (mx >= mn) ? mx - mn : 0.0;
    };
    out.cauchy_gap = std::max(osc(0.25 * T, 0.5 * T), osc(0.5 * T, T));
    return out;
}

double absorbing_radius(const std::vector<const DiagnosticsLog *> &logs, double discard_T) {
    double radius = 0;
    for (const DiagnosticsLog *log : logs) {
        if (log->duration() < 2.0 * discard_T)
            throw invalid_argument_error("absorbing_radius: log covers " +
                                         std::to_string(log->duration()) +
                                         " < 2*discard_T = " + std::to_string(2.0 * discard_T));
        radius = std::max(radius, log->sup_state_norm(discard_T));
    }
    return radius;
}

} // namespace obrb

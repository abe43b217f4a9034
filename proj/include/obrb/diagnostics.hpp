#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obrb/equilibrium.hpp"
#include "obrb/flow.hpp"

namespace obrb {

enum class ViolationKind {
    max_principle, // field extrema escaped the parabolic envelope
    ut1_bound,     // |Theta| exceeded the uniform a-priori bound
    w7_energy,     // kinetic energy identity defect beyond scheme tolerance
    w15_energy,    // thermal energy identity defect beyond scheme tolerance
    w22_truncation,// truncation energy increased beyond slack
    divergence,    // max-norm divergence above 10*lin_tol
};

std::string to_string(ViolationKind k);

struct ViolationEvent {
    double t = 0;
    std::int64_t step = 0;
    ViolationKind kind = ViolationKind::max_principle;
    double value = 0;
    double bound = 0;
    std::string snapshot; // checkpoint path when one was captured
};

/// Time series of every theorem-facing measurement of a run. Appended once
/// per accepted step; violations are recorded, never fatal, so scheme error
/// can be distinguished from genuine violations offline.
struct DiagnosticsLog {
    std::vector<double> times;
    std::vector<double> kinetic;    // 0.5*||u||^2
    std::vector<double> thermal;    // 0.5*<Lambda calT, calT>
    std::vector<double> theta_min, theta_max;
    std::vector<double> theta_l2;
    std::vector<double> mean_theta;
    std::vector<double> div_max;
    std::vector<double> w7_res, w15_res;
    std::vector<double> rel_energy; // vs registered equilibrium (NaN otherwise)
    std::vector<std::int64_t> steps;

    double ut1 = 0; // ||Theta0||_inf + 2/(1-alpha^2) * max|thetaB|, run constant
    double lin_tol = 1e-10;
    std::string snapshot_dir; // when set, first violation per kind is checkpointed
    std::vector<ViolationEvent> violations;

    std::optional<EquilibriumSolution> equilibrium;

    void register_initial(const SimState &s0, const BoundaryClosure &closure, double lin_tol_in);
    void register_equilibrium(EquilibriumSolution eq);

    /// Appends all series for one accepted step and files violation events.
    void record(const SimState &state, const BoundaryClosure &closure, const StepReport &rep);

    std::size_t violation_count(ViolationKind k) const;
    double sup_state_norm(double discard_T) const; // sup_{t>discard} ||u|| + ||Theta||
    double duration() const { return times.empty() ? 0.0 : times.back() - times.front(); }
};

/// ||Theta0||_inf + 2/(1-alpha^2) * max_boundary |thetaB|; requires 0<alpha<1.
double ut1_bound(const ScalarField &theta0, const BoundaryClosure &closure);

struct DecayFit {
    double rate = 0;      // positive = decay
    double prefactor = 0;
    double r2 = 0;
    int samples = 0;
    bool hit_floor = false;
    double floor_time = 0; // first time E fell to the floor, when hit_floor
};

/// Least-squares line on (t, log E) over the trailing time window. Requires
/// at least 8 usable samples; if E hits the noise floor inside the window the
/// fit stops there and reports the crossing time.
DecayFit fit_decay_rate(const std::vector<double> &times, const std::vector<double> &energy,
                        double window, double floor = 0.0);

struct ErgodicAverage {
    std::vector<double> times;
    std::vector<double> running_mean; // trapezoid time average up to t
    double cauchy_gap = 0; // max oscillation over the last two dyadic windows
};

ErgodicAverage ergodic_average(const std::vector<double> &times, const std::vector<double> &values);

/// Empirical absorbing radius: max over runs of sup_{t>discard_T} of
/// ||u||_{L2} + ||Theta||_{L2}. Each log must cover at least 2*discard_T.
double absorbing_radius(const std::vector<const DiagnosticsLog *> &logs, double discard_T);

} // namespace obrb

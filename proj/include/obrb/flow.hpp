#pragma once

#include "obrb/heat.hpp"
#include "obrb/problem.hpp"
#include "obrb/state.hpp"

namespace obrb {

/// dt = dt_cfl * min(hx/max|ux|, hy/max|uy|, dt_max); falls back to
/// dt_cfl*dt_max for a quiescent fluid.
double compute_dt(const SimState &state, const Params &params);

/// Face-centered buoyancy -Theta * grad_h G, Theta averaged to faces.
/// For G = linear_y(-1) this is +Theta in the y direction (hot rises).
VectorField buoyancy_force(const ScalarField &theta, const ScalarField &g_potential);

/// Warm-start storage for the implicit velocity and projection solves.
struct FlowWorkspace {
    std::vector<double> ux_warm, uy_warm;
    ScalarField phi_warm;  // pre-viscous projection potential
    ScalarField phi2_warm; // post-viscous projection potential
    bool has_visc = false;
    bool has_phi = false;
    bool has_phi2 = false;
};

struct MomentumResult {
    VectorField u;
    double div_max = 0;      // max-norm divergence after projection
    double w7_residual = 0;  // discrete kinetic energy balance defect
    double w7_tolerance = 0; // scheme-error allowance for the defect
    LinearSolveReport projection_report;
};

/// One velocity step: explicit centered advection and buoyancy, implicit
/// viscosity with no-slip, Chorin projection. Wall-normal components stay
/// exactly zero; tangential no-slip enters through ghost reflection in the
/// viscous operator. Also evaluates the kinetic energy identity
///   d(0.5||u||^2) + dt*mu*||grad u||^2 + dt*Int Theta grad G . u = r.
MomentumResult momentum_step(const SimState &state, const ScalarField &theta_new,
                             const Problem &problem, double dt, FlowWorkspace *ws = nullptr);

/// Per-run mutable scratch shared by the step functions, plus the running
/// parabolic-envelope constants for the truncation-energy checks.
struct StepWorkspace {
    HeatWorkspace heat;
    FlowWorkspace flow;
    double env_hi = 0, env_lo = 0; // running sup/inf of {Theta0, traces seen}
    bool env_init = false;
};

struct StepReport {
    double t_before = 0, t_after = 0, dt = 0;
    double div_max = 0;
    double w7_residual = 0, w15_residual = 0;
    double w7_tolerance = 0, w15_tolerance = 0; // scheme-error allowances
    double trace_min = 0, trace_max = 0;   // trace applied by this step
    double theta_min = 0, theta_max = 0;   // new field extrema
    double env_lo = 0, env_hi = 0;         // per-step parabolic envelope
    double envelope_excess = 0;            // positive part of any violation
    double w22_pos_delta = 0, w22_neg_delta = 0; // truncation-energy increments
    double scale = 1;                      // data scale for tolerance checks
};

/// Advances (u, Theta, t) by one dt: temperature step with u^n, then momentum
/// step with Theta^{n+1}. dt comes from compute_dt, optionally capped (the run
/// loop caps the final step at t_end). Throws solver_error on NaN fields,
/// naming the first offending array.
StepReport full_step(SimState &state, const Problem &problem, StepWorkspace &ws,
                     double dt_cap = 0.0);

} // namespace obrb

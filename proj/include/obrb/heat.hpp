#pragma once

#include <vector>

#include "obrb/elliptic.hpp"
#include "obrb/nonlocal.hpp"
#include "obrb/params.hpp"
#include "obrb/state.hpp"

namespace obrb {

/// Warm-start storage for the implicit temperature solves of one run.
struct HeatWorkspace {
    ScalarField diff_warm;
    ScalarField aux_warm;
    bool has_diff = false;
    bool has_aux = false;
};

/// Advective time step limit shared by the temperature and flow steppers:
/// dt_cfl * min(hx/max|ux|, hy/max|uy|, dt_max).
double advective_dt(const VectorField &u, const Params &params);

/// One explicit conservative advection step for the temperature. Upwind
/// donor-cell fluxes by default; the flux-limited (minmod) variant is a
/// config option excluded from the theorem suites. Inflow faces would take
/// their value from the supplied trace; with impermeable walls every wall
/// flux vanishes. Throws solver_error when a cell violates the advective CFL
/// |ux|dt/hx + |uy|dt/hy <= 1, naming the worst cell.
ScalarField advect_temperature(const ScalarField &theta, const VectorField &u, double dt,
                               const BoundaryTrace &inflow,
                               AdvectionScheme scheme = AdvectionScheme::upwind);

struct DiffusionResult {
    ScalarField theta;
    BoundaryTrace applied_trace; // the Dirichlet data the solve used
    LinearSolveReport report;
};

/// Implicit diffusion (Id - kappa*dt*Lap_h) with the non-local Dirichlet
/// data thetaB - alpha*mean(Theta^{n+1}). The implicit coupling solves the
/// scalar mean fixed point exactly via the rank-one closure; the lagged mode
/// freezes the mean at mean(theta_star) and does a single Dirichlet solve.
DiffusionResult diffuse_temperature(const ScalarField &theta_star, const BoundaryClosure &closure,
                                    double kappa, double dt, double tol,
                                    BcCoupling coupling = BcCoupling::implicit,
                                    HeatWorkspace *ws = nullptr);

struct TempStepResult {
    ScalarField theta;
    BoundaryTrace applied_trace;
    double trace_min = 0, trace_max = 0;
    double w15_residual = 0;  // discrete thermal energy balance defect
    double w15_tolerance = 0; // scheme-error allowance for the defect
    LinearSolveReport report;
};

/// One split step: advect with u, then diffuse implicitly. Also evaluates the
/// per-step thermal energy identity
///   d(0.5<Lambda T,T>) + dt*kappa*||grad T||^2 - dt*Int u . grad T thetaB = r
/// whose defect r is returned for the diagnostics log.
TempStepResult temperature_step(const ScalarField &theta, const VectorField &u,
                                const BoundaryClosure &closure, const Params &params, double dt,
                                HeatWorkspace *ws = nullptr);

struct ContractionReport {
    std::vector<double> times;
    std::vector<double> energy;       // 0.5*<Lambda dT, dT>, dT the calT difference
    std::vector<double> energy_theta; // 0.5*<Lambda dTheta, dTheta> (logged variant)
    double max_step_increase = 0.0;   // worst positive energy jump observed
    double initial_energy = 0.0;
    double final_energy = 0.0;
};

/// Evolves two temperature fields under the same frozen velocity series
/// (cycled per step) and tracks the Lambda-energy of their difference, the
/// contraction quantity behind uniqueness of the temperature.
ContractionReport frozen_velocity_contraction(const ScalarField &theta1_0,
                                              const ScalarField &theta2_0,
                                              const std::vector<VectorField> &u_series,
                                              const BoundaryClosure &closure,
                                              const Params &params, double t_end);

} // namespace obrb

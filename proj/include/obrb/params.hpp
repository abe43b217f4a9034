#pragma once

#include <cstdint>
#include <string>

#include "obrb/funcspec.hpp"

namespace obrb {

enum class BcCoupling { implicit, lagged };
enum class AdvectionScheme { upwind, limited };

/// Physical constants and numerical controls shared by the steppers.
struct Params {
    double mu = 1.0;    // viscosity, > 0
    double kappa = 1.0; // thermal diffusivity, > 0
    double alpha = 0.5; // non-local boundary coefficient, in (0,1)

    FuncSpec g_spec;      // gravitational potential descriptor
    FuncSpec thetaB_spec; // boundary temperature descriptor

    double dt_cfl = 0.4; // CFL safety factor; <= 0.5 keeps the advective
                         // sum-form CFL |ux|dt/hx + |uy|dt/hy below 1
    double dt_max = 0.05;
    double lin_tol = 1e-10; // relative linear-solver residual target
    BcCoupling bc_coupling = BcCoupling::implicit;
    AdvectionScheme advection = AdvectionScheme::upwind;
    std::uint64_t seed = 0;

    /// Throws invalid_argument_error when a constraint is violated
    /// (mu, kappa > 0; 0 < alpha < 1 per hypothesis (UU); dt_cfl in (0,1]).
    void validate() const;
};

/// alpha = gamma - 1 for an adiabatic exponent gamma in (1,2); the result
/// automatically satisfies 0 < alpha < 1.
double alpha_from_gamma(double gamma);

} // namespace obrb

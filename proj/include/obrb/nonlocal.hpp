#pragma once

#include "obrb/elliptic.hpp"
#include "obrb/field.hpp"
#include "obrb/funcspec.hpp"

namespace obrb {

/// Discrete cell average (midpoint quadrature, exact for linear data).
double mean(const ScalarField &f);

/// Lambda(Z) = Z - alpha/(1+alpha) * mean(Z): strictly positive, bounded,
/// self-adjoint; eigenvalue 1 on mean-zero fields, 1/(1+alpha) on constants.
ScalarField lambda_apply(const ScalarField &z, double alpha);

/// Inverse of lambda_apply: W -> W + alpha*mean(W).
ScalarField lambda_inverse(const ScalarField &w, double alpha);

/// Energy 0.5*<Lambda z, z> in the cell inner product.
double lambda_energy(const ScalarField &z, double alpha);

/// Boundary data bundle for the non-local condition
/// trace(Theta) = thetaB - alpha*mean(Theta). Stores thetaB both as its edge
/// trace and as its harmonic extension over the grid, so gradients of thetaB
/// are available by differencing.
struct BoundaryClosure {
    ScalarField thetaB;    // harmonic extension sampled on cells
    BoundaryTrace trace;   // thetaB at boundary-face midpoints
    double alpha = 0.0;
    FuncSpec spec;         // the closed form behind both representations
};

/// Builds the closure from a descriptor. Built-in descriptors are globally
/// harmonic, so the extension is the closed form itself and the interior
/// discrete-harmonic residual vanishes to machine precision.
BoundaryClosure make_closure(const Grid &g, const FuncSpec &thetaB_spec, double alpha);

/// calT = Theta + alpha*mean(Theta) - thetaB; zero trace whenever Theta
/// satisfies the discrete boundary condition.
ScalarField to_calT(const ScalarField &theta, const BoundaryClosure &closure);

/// Theta = calT + thetaB - alpha/(1+alpha)*mean(calT + thetaB).
ScalarField from_calT(const ScalarField &calT, const BoundaryClosure &closure);

/// Edge traces of thetaB - alpha*mean(theta).
BoundaryTrace boundary_value(const ScalarField &theta, const BoundaryClosure &closure);

} // namespace obrb

#pragma once

#include <utility>
#include <vector>

#include "obrb/field.hpp"
#include "obrb/grid.hpp"

namespace obrb {

struct LinearSolveReport {
    int iterations = 0;
    double residual = 0.0; // relative to rhs norm (absolute when rhs = 0)
    bool converged = false;
};

/// Per-axis boundary closure of the five-point stencil.
///   node_dirichlet: the wall passes through the sample line adjacent to the
///                   first/last unknown (face-centered velocity components).
///   half_dirichlet: the wall sits half a spacing outside the first/last
///                   sample (cell-centered scalars); ghost = 2b - interior.
///   half_neumann:   ghost mirrors the interior value (zero wall flux).
enum class AxisBC { node_dirichlet, half_dirichlet, half_neumann };

/// Matrix-free operator  A v = sigma*v + c*(-Lap_h v)  on an mx-by-my array
/// with homogeneous boundary closures; inhomogeneous boundary data enters
/// through rhs contributions (see add_dirichlet_rhs).
struct Stencil5 {
    int mx = 0, my = 0;
    double hx = 0, hy = 0;
    double sigma = 0.0; // identity coefficient: 0 for Poisson, 1 for Helmholtz
    double c = 1.0;     // diffusion coefficient (c > 0)
    AxisBC bcx = AxisBC::half_dirichlet;
    AxisBC bcy = AxisBC::half_dirichlet;

    void apply(const std::vector<double> &v, std::vector<double> &out) const;
    void diagonal(std::vector<double> &out) const;
    std::size_t size() const { return static_cast<std::size_t>(mx) * my; }
};

struct CgOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;   // extra absolute l2 residual target (0 = off)
    int max_iter = 0;       // 0 = cap from 10*sqrt(mx*my)*log(1/rel_tol)
    bool project_mean = false; // keep iterates mean-free (singular Neumann)
};

/// Jacobi-preconditioned conjugate gradients; x holds the initial guess.
LinearSolveReport cg_solve(const Stencil5 &A, const std::vector<double> &b,
                           std::vector<double> &x, const CgOptions &opt);

/// Solves Lap_h u = rhs with Dirichlet trace bc. The returned field satisfies
/// the half-cell ghost closure: linear and bilinear data are reproduced
/// exactly, smooth data to O(h^2). Warm start via x0 (optional).
std::pair<ScalarField, LinearSolveReport>
solve_poisson_dirichlet(const Grid &g, const ScalarField &rhs, const BoundaryTrace &bc,
                        double tol, const ScalarField *x0 = nullptr);

/// Solves Lap_h u = rhs with homogeneous Neumann closure in the mean-zero
/// class. Throws invalid_argument_error when the discrete mean of rhs exceeds
/// the compatibility tolerance.
std::pair<ScalarField, LinearSolveReport>
solve_poisson_neumann_zero_mean(const Grid &g, const ScalarField &rhs, double tol,
                                const ScalarField *x0 = nullptr, double abs_tol = 0.0);

/// Solves (Id - c*Lap_h) u = rhs with Dirichlet trace bc.
std::pair<ScalarField, LinearSolveReport>
solve_helmholtz_dirichlet(const Grid &g, double c, const ScalarField &rhs,
                          const BoundaryTrace &bc, double tol,
                          const ScalarField *x0 = nullptr, double abs_tol = 0.0);

/// Solves (Id - c*Lap_h) u = rhs where the Dirichlet trace couples to the
/// unknown through its own mean: trace = thetaB - alpha*mean(u). Two Dirichlet
/// solves (trace thetaB, trace -1) are combined by the exact rank-one closure
///   m = m0 / (1 + alpha*m1),
/// with m0 the mean of the thetaB solve and m1 the mean of the +1-trace
/// homogeneous solve (the -1-trace solution negated). The coupled scalar fixed
/// point is linear, so it is solved exactly rather than lagged.
struct RankOneResult {
    ScalarField solution;
    BoundaryTrace applied_trace;  // thetaB - alpha*m, the trace the solve used
    ScalarField aux;              // unit-trace homogeneous solution (reusable)
    LinearSolveReport report;     // thetaB partial solve
    LinearSolveReport report_aux; // unit-trace partial solve
    double mean = 0.0;            // mean of the combined solution
};
RankOneResult solve_helmholtz_rank_one(const Grid &g, double c, const ScalarField &rhs,
                                       const BoundaryTrace &thetaB_trace, double alpha,
                                       double tol, const ScalarField *x0 = nullptr,
                                       const ScalarField *aux0 = nullptr, double abs_tol = 0.0);

/// Smallest eigenvalue of the discrete Dirichlet Laplacian via inverse power
/// iteration; returns sqrt(lambda_1), the constant in C_p||v|| <= ||grad v||.
double poincare_constant(const Grid &g, double tol);

/// Dirichlet energy <-Lap_h v, v> with homogeneous half-cell closure; equals
/// the face-difference sum including the wall terms.
double dirichlet_energy(const ScalarField &v);

/// Applies the five-point Laplacian with Dirichlet trace bc (diagnostics).
ScalarField apply_laplacian_dirichlet(const ScalarField &v, const BoundaryTrace &bc);

} // namespace obrb

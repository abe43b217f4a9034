#include "obrb/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "obrb/errors.hpp"

namespace obrb {

double gradient_max_norm(const ScalarField &f, const BoundaryTrace &trace) {
    const Grid &g = f.grid();
    double m = 0;
    for (int j = 0; j < g.ny; ++j) {
        m = std::max(m, std::fabs(2.0 * (f(0, j) - trace.west[j]) / g.hx));
        m = std::max(m, std::fabs(2.0 * (trace.east[j] - f(g.nx - 1, j)) / g.hx));
        for (int i = 1; i < g.nx; ++i)
            m = std::max(m, std::fabs((f(i, j) - f(i - 1, j)) / g.hx));
    }
    for (int i = 0; i < g.nx; ++i) {
        m = std::max(m, std::fabs(2.0 * (f(i, 0) - trace.south[i]) / g.hy));
        m = std::max(m, std::fabs(2.0 * (trace.north[i] - f(i, g.ny - 1)) / g.hy));
        for (int j = 1; j < g.ny; ++j)
            m = std::max(m, std::fabs((f(i, j) - f(i, j - 1)) / g.hy));
    }
    return m;
}

double velocity_gradient_max_norm(const VectorField &u) {
    const Grid &g = u.grid();
    double m = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            m = std::max(m, std::fabs((u.ux(i + 1, j) - u.ux(i, j)) / g.hx));
    for (int i = 0; i <= g.nx; ++i) {
        m = std::max(m, std::fabs(2.0 * u.ux(i, 0) / g.hy));
        m = std::max(m, std::fabs(2.0 * u.ux(i, g.ny - 1) / g.hy));
        for (int j = 1; j < g.ny; ++j)
            m = std::max(m, std::fabs((u.ux(i, j) - u.ux(i, j - 1)) / g.hy));
    }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            m = std::max(m, std::fabs((u.uy(i, j + 1) - u.uy(i, j)) / g.hy));
    for (int j = 0; j <= g.ny; ++j) {
        m = std::max(m, std::fabs(2.0 * u.uy(0, j) / g.hx));
        m = std::max(m, std::fabs(2.0 * u.uy(g.nx - 1, j) / g.hx));
        for (int i = 1; i < g.nx; ++i)
            m = std::max(m, std::fabs((u.uy(i, j) - u.uy(i - 1, j)) / g.hx));
    }
    return m;
}

namespace {

// Cell-centered gradient by averaging the adjacent face differences, wall
// faces using the half-spacing form.
void center_gradient(const ScalarField &f, const BoundaryTrace &trace, int i, int j, double &gx,
                     double &gy) {
    const Grid &g = f.grid();
    const double gw = (i == 0) ? 2.0 * (f(0, j) - trace.west[j]) / g.hx
                               : (f(i, j) - f(i - 1, j)) / g.hx;
    const double ge = (i == g.nx - 1) ? 2.0 * (trace.east[j] - f(i, j)) / g.hx
                                      : (f(i + 1, j) - f(i, j)) / g.hx;
    const double gs = (j == 0) ? 2.0 * (f(i, 0) - trace.south[i]) / g.hy
                               : (f(i, j) - f(i, j - 1)) / g.hy;
    const double gn = (j == g.ny - 1) ? 2.0 * (trace.north[i] - f(i, j)) / g.hy
                                      : (f(i, j + 1) - f(i, j)) / g.hy;
    gx = 0.5 * (gw + ge);
    gy = 0.5 * (gs + gn);
}

} // namespace

double gradient_cross_max(const ScalarField &a, const ScalarField &b,
                          const BoundaryTrace &trace_a, const BoundaryTrace &trace_b) {
    const Grid &g = a.grid();
    double m = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double ax, ay, bx, by;
            center_gradient(a, trace_a, i, j, ax, ay);
            center_gradient(b, trace_b, i, j, bx, by);
            m = std::max(m, std::fabs(ax * by - ay * bx));
        }
    return m;
}

namespace {

double bc_trace_defect(const ScalarField &theta, const BoundaryClosure &closure) {
    const Grid &g = theta.grid();
    const BoundaryTrace want = boundary_value(theta, closure);
    double worst = 0;
    for (int j = 0; j < g.ny; ++j) {
        worst = std::max(worst,
                         std::fabs(0.5 * (theta.ghost(Edge::west)[j] + theta(0, j)) - want.west[j]));
        worst = std::max(worst, std::fabs(0.5 * (theta.ghost(Edge::east)[j] + theta(g.nx - 1, j)) -
                                          want.east[j]));
    }
    for (int i = 0; i < g.nx; ++i) {
        worst = std::max(worst, std::fabs(0.5 * (theta.ghost(Edge::south)[i] + theta(i, 0)) -
                                          want.south[i]));
        worst = std::max(worst, std::fabs(0.5 * (theta.ghost(Edge::north)[i] + theta(i, g.ny - 1)) -
                                          want.north[i]));
    }
    return worst;
}

double alignment_cross(const Problem &problem) {
    const BoundaryTrace g_trace = sample_at_boundary(problem.grid, problem.params.g_spec);
    return gradient_cross_max(problem.closure.thetaB, problem.g_potential, problem.closure.trace,
                              g_trace);
}

double alignment_scale(const Problem &problem) {
    const BoundaryTrace g_trace = sample_at_boundary(problem.grid, problem.params.g_spec);
    const double ga = gradient_max_norm(problem.g_potential, g_trace);
    const double gb = gradient_max_norm(problem.closure.thetaB, problem.closure.trace);
    return 1.0 + ga * gb;
}

} // namespace

EquilibriumSolution aligned_equilibrium(const Problem &problem) {
    const double cross = alignment_cross(problem);
    if (cross > 1e-10 * alignment_scale(problem))
        throw invalid_argument_error(
            "aligned_equilibrium: grad thetaB x grad G = " + std::to_string(cross) +
            " is nonzero; non-aligned data has no closed form, use steady_solve");

    const BoundaryClosure &closure = problem.closure;
    const double alpha = closure.alpha;
    const double m = mean(closure.thetaB);
    const double shift = alpha * m / (1.0 + alpha); // fixed point of c = m - alpha*c, scaled

    EquilibriumSolution eq;
    eq.us = VectorField(problem.grid);
    eq.thetas = closure.thetaB;
    eq.thetas += -shift;
    BoundaryTrace trace = closure.trace;
    trace += -shift;
    eq.thetas.set_dirichlet_ghosts(trace);
    eq.calTs = to_calT(eq.thetas, closure);
    eq.residual = 0.0;
    eq.bc_defect = bc_trace_defect(eq.thetas, closure);
    return eq;
}

EquilibriumSolution steady_solve(const Problem &problem, const SimState &init, double tol_steady,
                                 double max_T) {
    if (!(tol_steady > 0.0))
        throw invalid_argument_error("steady_solve: tol_steady must be positive");
    SimState state = init;
    StepWorkspace ws;
    SimState mark = state;
    double mark_t = state.t;
    double residual = std::numeric_limits<double>::infinity();

    while (state.t - init.t < max_T) {
        full_step(state, problem, ws);
        if (state.t - mark_t >= 1.0) {
            ScalarField dth = state.theta;
            dth -= mark.theta;
            VectorField du = state.u;
            du -= mark.u;
            residual = (cell_l2(dth) + vec_l2(du)) / (state.t - mark_t);
            if (residual < tol_steady) {
                EquilibriumSolution eq;
                eq.us = state.u;
                eq.thetas = state.theta;
                eq.calTs = to_calT(state.theta, problem.closure);
                eq.residual = residual;
                eq.bc_defect = bc_trace_defect(state.theta, problem.closure);
                return eq;
            }
            mark = state;
            mark_t = state.t;
        }
    }
    throw solver_error("steady_solve: no steady state within T = " + std::to_string(max_T) +
                       ", last residual " + std::to_string(residual) +
                       " (possible instability or oscillation)");
}

StabilityReport stability_check(const Problem &problem, double cp_tol) {
    StabilityReport r;
    const BoundaryTrace g_trace = sample_at_boundary(problem.grid, problem.params.g_spec);
    const double grad_g = gradient_max_norm(problem.g_potential, g_trace);
    const double grad_b = gradient_max_norm(problem.closure.thetaB, problem.closure.trace);
    r.cp = poincare_constant(problem.grid, cp_tol);
    r.lhs = grad_g * grad_b;
    r.rhs = r.cp * r.cp * problem.params.mu * problem.params.kappa;
    r.aligned = alignment_cross(problem) <= 1e-10 * alignment_scale(problem);
    r.satisfied = r.lhs <= r.rhs;
    r.margin = r.rhs - r.lhs;
    r.optimal_Z = (grad_g > 0.0 && grad_b > 0.0) ? std::sqrt(grad_b / grad_g) : 0.0;
    r.quad_min = 2.0 * std::sqrt(r.lhs);
    r.quad_rhs = 2.0 * r.cp * r.cp * std::sqrt(problem.params.mu * problem.params.kappa);
    r.quad_satisfied = r.quad_min <= r.quad_rhs;
    return r;
}

double smallness_margin(const EquilibriumSolution &eq, const Problem &problem, double cp_tol) {
    const double cp = poincare_constant(problem.grid, cp_tol);
    const double lam = cp * cp;
    const double mu = problem.params.mu;
    const double kappa = problem.params.kappa;

    ScalarField drive = problem.closure.thetaB;
    drive += eq.calTs; // thetaB + calT_s, zero-trace part rides on thetaB's trace
    const double grad_drive = gradient_max_norm(drive, problem.closure.trace);
    const BoundaryTrace g_trace = sample_at_boundary(problem.grid, problem.params.g_spec);
    const double grad_g = gradient_max_norm(problem.g_potential, g_trace);
    const double S = grad_g + grad_drive;
    const double A = velocity_gradient_max_norm(eq.us);

    if (S == 0.0)
        return std::min(mu * lam - A, kappa * lam);
    // Balance weight equalizing the two coefficient gaps.
    const double beta = kappa * lam - mu * lam + A;
    const double z = (-beta + std::sqrt(beta * beta + S * S)) / S;
    return kappa * lam - 0.5 * S / z;
}

} // namespace obrb

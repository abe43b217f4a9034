#include "obrb/heat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "obrb/errors.hpp"

namespace obrb {

double advective_dt(const VectorField &u, const Params &params) {
    const Grid &g = u.grid();
    double limit = params.dt_max;
    const double mx = u.max_abs_ux();
    const double my = u.max_abs_uy();
    if (mx > 0.0)
        limit = std::min(limit, g.hx / mx);
    if (my > 0.0)
        limit = std::min(limit, g.hy / my);
    return params.dt_cfl * limit;
}

namespace {

double minmod(double a, double b) {
    if (a * b <= 0.0)
        return 0.0;
    return (std::fabs(a) < std::fabs(b)) ? a : b;
}

void check_cfl(const ScalarField &theta, const VectorField &u, double dt) {
    const Grid &g = theta.grid();
    double worst = 0.0;
    int wi = 0, wj = 0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double cx = std::max(std::fabs(u.ux(i, j)), std::fabs(u.ux(i + 1, j))) / g.hx;
            const double cy = std::max(std::fabs(u.uy(i, j)), std::fabs(u.uy(i, j + 1))) / g.hy;
            const double c = (cx + cy) * dt;
            if (c > worst) {
                worst = c;
                wi = i;
                wj = j;
            }
        }
    }
    if (worst > 1.0 + 1e-12)
        throw solver_error("advect_temperature: CFL violated at cell (" + std::to_string(wi) +
                           "," + std::to_string(wj) + "): |u|dt/h = " + std::to_string(worst));
}

} // namespace

ScalarField advect_temperature(const ScalarField &theta, const VectorField &u, double dt,
                               const BoundaryTrace &inflow, AdvectionScheme scheme) {
    const Grid &g = theta.grid();
    check_cfl(theta, u, dt);

    const bool limited = (scheme == AdvectionScheme::limited);
    std::vector<double> fx(static_cast<std::size_t>(g.nx + 1) * g.ny, 0.0);
    std::vector<double> fy(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0.0);

    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) {
            const double v = u.ux(i, j);
            if (v == 0.0)
                continue;
            double donor;
            if (v > 0.0) {
                donor = (i == 0) ? inflow.west[j] : theta(i - 1, j);
                if (limited && i >= 2 && i < g.nx) {
                    const double s = minmod(theta(i - 1, j) - theta(i - 2, j),
                                            theta(i, j) - theta(i - 1, j));
                    donor += 0.5 * s * (1.0 - v * dt / g.hx);
                }
            } else {
                donor = (i == g.nx) ? inflow.east[j] : theta(i, j);
                if (limited && i >= 1 && i < g.nx - 1) {
                    const double s = minmod(theta(i, j) - theta(i - 1, j),
                                            theta(i + 1, j) - theta(i, j));
                    donor -= 0.5 * s * (1.0 + v * dt / g.hx);
                }
            }
            fx[static_cast<std::size_t>(j) * (g.nx + 1) + i] = v * donor;
        }
    }
    for (int j = 0; j <= g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double v = u.uy(i, j);
            if (v == 0.0)
                continue;
            double donor;
            if (v > 0.0) {
                donor = (j == 0) ? inflow.south[i] : theta(i, j - 1);
                if (limited && j >= 2 && j < g.ny) {
                    const double s = minmod(theta(i, j - 1) - theta(i, j - 2),
                                            theta(i, j) - theta(i, j - 1));
                    donor += 0.5 * s * (1.0 - v * dt / g.hy);
                }
            } else {
                donor = (j == g.ny) ? inflow.north[i] : theta(i, j);
                if (limited && j >= 1 && j < g.ny - 1) {
                    const double s = minmod(theta(i, j) - theta(i, j - 1),
                                            theta(i, j + 1) - theta(i, j));
                    donor -= 0.5 * s * (1.0 + v * dt / g.hy);
                }
            }
            fy[static_cast<std::size_t>(j) * g.nx + i] = v * donor;
        }
    }

    ScalarField out = theta;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double dfx = fx[static_cast<std::size_t>(j) * (g.nx + 1) + i + 1] -
                               fx[static_cast<std::size_t>(j) * (g.nx + 1) + i];
            const double dfy = fy[static_cast<std::size_t>(j + 1) * g.nx + i] -
                               fy[static_cast<std::size_t>(j) * g.nx + i];
            out(i, j) -= dt * (dfx / g.hx + dfy / g.hy);
        }
    }
    return out;
}

DiffusionResult diffuse_temperature(const ScalarField &theta_star, const BoundaryClosure &closure,
                                    double kappa, double dt, double tol, BcCoupling coupling,
                                    HeatWorkspace *ws) {
    if (!(kappa > 0.0) || !(dt > 0.0))
        throw invalid_argument_error("diffuse_temperature: kappa and dt must be positive");
    const Grid &g = theta_star.grid();
    const double c = kappa * dt;
    // Absolute residual floor keeps the interior solve error below the
    // max-principle slack even for large-amplitude data (||A^-1|| <= 1).
    const double abs_tol = 3.0 * tol;

    DiffusionResult res;
    if (coupling == BcCoupling::lagged) {
        BoundaryTrace trace = closure.trace;
        trace += -closure.alpha * mean(theta_star);
        auto [sol, rep] = solve_helmholtz_dirichlet(
            g, c, theta_star, trace, tol, (ws && ws->has_diff) ? &ws->diff_warm : nullptr, abs_tol);
        res.theta = std::move(sol);
        res.applied_trace = std::move(trace);
        res.report = rep;
    } else {
        RankOneResult ro = solve_helmholtz_rank_one(
            g, c, theta_star, closure.trace, closure.alpha, tol,
            (ws && ws->has_diff) ? &ws->diff_warm : nullptr,
            (ws && ws->has_aux) ? &ws->aux_warm : nullptr, abs_tol);
        if (!ro.report.converged || !ro.report_aux.converged)
            throw solver_error("diffuse_temperature: implicit solve failed to converge, residual " +
                               std::to_string(std::max(ro.report.residual, ro.report_aux.residual)));
        res.theta = std::move(ro.solution);
        res.applied_trace = std::move(ro.applied_trace);
        res.report = ro.report;
        if (ws && closure.alpha != 0.0) {
            ws->aux_warm = std::move(ro.aux);
            ws->has_aux = true;
        }
    }
    if (!res.report.converged)
        throw solver_error("diffuse_temperature: implicit solve failed to converge, residual " +
                           std::to_string(res.report.residual));
    if (ws) {
        ws->diff_warm = res.theta;
        ws->has_diff = true;
    }
    return res;
}

namespace {

// Int u . grad(T) thetaB over faces, with thetaB averaged to faces. Wall
// faces carry no normal velocity and drop out.
double transport_term(const VectorField &u, const ScalarField &calT, const ScalarField &thetaB) {
    const Grid &g = calT.grid();
    double s = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double gx = (calT(i, j) - calT(i - 1, j)) / g.hx;
            const double tb = 0.5 * (thetaB(i, j) + thetaB(i - 1, j));
            s += u.ux(i, j) * gx * tb;
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double gy = (calT(i, j) - calT(i, j - 1)) / g.hy;
            const double tb = 0.5 * (thetaB(i, j) + thetaB(i, j - 1));
            s += u.uy(i, j) * gy * tb;
        }
    return s * g.cell_area();
}

} // namespace

TempStepResult temperature_step(const ScalarField &theta, const VectorField &u,
                                const BoundaryClosure &closure, const Params &params, double dt,
                                HeatWorkspace *ws) {
    const BoundaryTrace inflow = boundary_value(theta, closure);
    ScalarField theta_star = advect_temperature(theta, u, dt, inflow, params.advection);
    DiffusionResult diff =
        diffuse_temperature(theta_star, closure, params.kappa, dt, params.lin_tol,
                            params.bc_coupling, ws);

    TempStepResult out;
    // Thermal energy balance defect for this step (diagnostics only).
    const ScalarField calT_old = to_calT(theta, closure);
    const ScalarField calT_star = to_calT(theta_star, closure);
    const ScalarField calT_new = to_calT(diff.theta, closure);
    const double e_old = lambda_energy(calT_old, closure.alpha);
    const double e_new = lambda_energy(calT_new, closure.alpha);
    const double diss = dirichlet_energy(calT_new);
    const double transp = transport_term(u, calT_new, closure.thetaB);
    out.w15_residual = e_new - e_old + dt * params.kappa * diss - dt * transp;

    // Scheme-error allowance: O(dt*(h^2+dt^2)) splitting and quadrature error,
    // the first-order upwind dissipation (bounded through the measured
    // Dirichlet energy), the implicit-Euler dissipation of this step (exactly
    // computable, and O(dt^2) once the boundary layer of incompatible initial
    // data has relaxed), and the solver floor.
    ScalarField dT = calT_new;
    dT -= calT_star;
    const double implicit_diss = lambda_energy(dT, closure.alpha);
    const Grid &g = theta.grid();
    const double h2 = g.hx * g.hx + g.hy * g.hy;
    const double th_scale =
        std::max({1.0, theta.max_abs(), closure.trace.max_abs()});
    const double e_scale = 1.0 + std::fabs(e_old) + th_scale * th_scale * g.area;
    const double umax = std::max(u.max_abs_ux(), u.max_abs_uy());
    out.w15_tolerance = 100.0 * dt * (h2 + dt * dt) * e_scale +
                        std::max(g.hx, g.hy) * umax * dt * diss + 2.0 * implicit_diss +
                        10.0 * params.lin_tol * e_scale;

    out.trace_min = diff.applied_trace.min_value();
    out.trace_max = diff.applied_trace.max_value();
    out.theta = std::move(diff.theta);
    out.applied_trace = std::move(diff.applied_trace);
    out.report = diff.report;
    return out;
}

ContractionReport frozen_velocity_contraction(const ScalarField &theta1_0,
                                              const ScalarField &theta2_0,
                                              const std::vector<VectorField> &u_series,
                                              const BoundaryClosure &closure,
                                              const Params &params, double t_end) {
    const Grid &g = theta1_0.grid();
    ScalarField th1 = theta1_0;
    ScalarField th2 = theta2_0;
    HeatWorkspace ws1, ws2;
    VectorField zero_u(g);

    ContractionReport rep;
    auto energy_of = [&](const ScalarField &a, const ScalarField &b, double &e_calt,
                         double &e_theta) {
        ScalarField diff = a;
        diff -= b;
        e_theta = lambda_energy(diff, closure.alpha);
        // The calT difference is Theta difference plus alpha times its mean
        // (thetaB cancels), the quantity whose Lambda-energy contracts.
        ScalarField dT = lambda_inverse(diff, closure.alpha);
        e_calt = lambda_energy(dT, closure.alpha);
    };

    double e0 = 0, e0t = 0;
    energy_of(th1, th2, e0, e0t);
    rep.times.push_back(0.0);
    rep.energy.push_back(e0);
    rep.energy_theta.push_back(e0t);
    rep.initial_energy = e0;

    double t = 0;
    std::size_t step = 0;
    while (t < t_end - 1e-14) {
        const VectorField &u = u_series.empty() ? zero_u : u_series[step % u_series.size()];
        double dt = advective_dt(u, params);
        dt = std::min(dt, t_end - t);
        th1 = temperature_step(th1, u, closure, params, dt, &ws1).theta;
        th2 = temperature_step(th2, u, closure, params, dt, &ws2).theta;
        t += dt;
        ++step;
        double e = 0, et = 0;
        energy_of(th1, th2, e, et);
        rep.max_step_increase = std::max(rep.max_step_increase, e - rep.energy.back());
        rep.times.push_back(t);
        rep.energy.push_back(e);
        rep.energy_theta.push_back(et);
    }
    rep.final_energy = rep.energy.back();
    return rep;
}

} // namespace obrb

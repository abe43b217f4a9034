#include "obrb/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "obrb/errors.hpp"

namespace obrb {

double compute_dt(const SimState &state, const Params &params) {
    return advective_dt(state.u, params);
}

VectorField buoyancy_force(const ScalarField &theta, const ScalarField &g_potential) {
    const Grid &g = theta.grid();
    VectorField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double th = 0.5 * (theta(i - 1, j) + theta(i, j));
            const double gx = (g_potential(i, j) - g_potential(i - 1, j)) / g.hx;
            f.ux(i, j) = -th * gx;
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double th = 0.5 * (theta(i, j - 1) + theta(i, j));
            const double gy = (g_potential(i, j) - g_potential(i, j - 1)) / g.hy;
            f.uy(i, j) = -th * gy;
        }
    return f;
}

namespace {

// Conservative centered discretization of div(u (x) u) on the staggered grid.
// Corner fluxes on the walls vanish with the wall-normal velocity, which is
// what keeps the form energy-neutral up to O(h^2).
void advection(const VectorField &u, VectorField &adv) {
    const Grid &g = u.grid();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const double uce = 0.5 * (u.ux(i, j) + u.ux(i + 1, j));
            const double ucw = 0.5 * (u.ux(i - 1, j) + u.ux(i, j));
            const double dx = (uce * uce - ucw * ucw) / g.hx;
            double fs = 0.0, fn = 0.0;
            if (j > 0) {
                const double vy = 0.5 * (u.uy(i - 1, j) + u.uy(i, j));
                const double vx = 0.5 * (u.ux(i, j - 1) + u.ux(i, j));
                fs = vy * vx;
            }
            if (j < g.ny - 1) {
                const double vy = 0.5 * (u.uy(i - 1, j + 1) + u.uy(i, j + 1));
                const double vx = 0.5 * (u.ux(i, j) + u.ux(i, j + 1));
                fn = vy * vx;
            }
            adv.ux(i, j) = dx + (fn - fs) / g.hy;
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double vcn = 0.5 * (u.uy(i, j) + u.uy(i, j + 1));
            const double vcs = 0.5 * (u.uy(i, j - 1) + u.uy(i, j));
            const double dy = (vcn * vcn - vcs * vcs) / g.hy;
            double fw = 0.0, fe = 0.0;
            if (i > 0) {
                const double vx = 0.5 * (u.ux(i, j - 1) + u.ux(i, j));
                const double vy = 0.5 * (u.uy(i - 1, j) + u.uy(i, j));
                fw = vx * vy;
            }
            if (i < g.nx - 1) {
                const double vx = 0.5 * (u.ux(i + 1, j - 1) + u.ux(i + 1, j));
                const double vy = 0.5 * (u.uy(i, j) + u.uy(i + 1, j));
                fe = vx * vy;
            }
            adv.uy(i, j) = dy + (fe - fw) / g.hx;
        }
    }
}

Stencil5 ux_operator(const Grid &g, double sigma, double c) {
    Stencil5 A;
    A.mx = g.nx - 1;
    A.my = g.ny;
    A.hx = g.hx;
    A.hy = g.hy;
    A.sigma = sigma;
    A.c = c;
    A.bcx = AxisBC::node_dirichlet; // wall values sit on the face lines i=0,nx
    A.bcy = AxisBC::half_dirichlet; // tangential no-slip via ghost reflection
    return A;
}

Stencil5 uy_operator(const Grid &g, double sigma, double c) {
    Stencil5 A;
    A.mx = g.nx;
    A.my = g.ny - 1;
    A.hx = g.hx;
    A.hy = g.hy;
    A.sigma = sigma;
    A.c = c;
    A.bcx = AxisBC::half_dirichlet;
    A.bcy = AxisBC::node_dirichlet;
    return A;
}

void extract_ux(const VectorField &u, std::vector<double> &v) {
    const Grid &g = u.grid();
    v.resize(static_cast<std::size_t>(g.nx - 1) * g.ny);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            v[static_cast<std::size_t>(j) * (g.nx - 1) + (i - 1)] = u.ux(i, j);
}

void extract_uy(const VectorField &u, std::vector<double> &v) {
    const Grid &g = u.grid();
    v.resize(static_cast<std::size_t>(g.nx) * (g.ny - 1));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            v[static_cast<std::size_t>(j - 1) * g.nx + i] = u.uy(i, j);
}

void insert_ux(VectorField &u, const std::vector<double> &v) {
    const Grid &g = u.grid();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            u.ux(i, j) = v[static_cast<std::size_t>(j) * (g.nx - 1) + (i - 1)];
}

void insert_uy(VectorField &u, const std::vector<double> &v) {
    const Grid &g = u.grid();
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u.uy(i, j) = v[static_cast<std::size_t>(j - 1) * g.nx + i];
}

// <-Lap_h u, u> with the no-slip closure; the Dirichlet form behind the
// implicit viscous solve.
double viscous_energy(const VectorField &u) {
    const Grid &g = u.grid();
    std::vector<double> v, av;
    double s = 0;
    Stencil5 Ax = ux_operator(g, 0.0, 1.0);
    extract_ux(u, v);
    Ax.apply(v, av);
    for (std::size_t k = 0; k < v.size(); ++k)
        s += v[k] * av[k];
    Stencil5 Ay = uy_operator(g, 0.0, 1.0);
    extract_uy(u, v);
    Ay.apply(v, av);
    for (std::size_t k = 0; k < v.size(); ++k)
        s += v[k] * av[k];
    return s * g.cell_area();
}

} // namespace

MomentumResult momentum_step(const SimState &state, const ScalarField &theta_new,
                             const Problem &problem, double dt, FlowWorkspace *ws) {
    const Grid &g = problem.grid;
    const Params &p = problem.params;
    const VectorField &un = state.u;

    VectorField adv(g);
    advection(un, adv);
    VectorField force = buoyancy_force(theta_new, problem.g_potential);

    VectorField ustar = un;
    double rhs_norm2 = 0; // ||-adv + f||^2, the explicit update magnitude
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double r = -adv.ux(i, j) + force.ux(i, j);
            ustar.ux(i, j) += dt * r;
            rhs_norm2 += r * r;
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double r = -adv.uy(i, j) + force.uy(i, j);
            ustar.uy(i, j) += dt * r;
            rhs_norm2 += r * r;
        }
    rhs_norm2 *= g.cell_area();

    // First projection: the explicit forcing is cleaned before viscosity acts,
    // so a curl-free buoyancy (constant Theta, or the aligned equilibrium) is
    // annihilated exactly instead of being sheared into the side-wall layers
    // by the no-slip viscous operator.
    auto project = [&](VectorField &v, ScalarField *warm, bool has_warm) {
        ScalarField rhs = divergence(v);
        rhs *= 1.0 / dt;
        auto [phi, rep] = solve_poisson_neumann_zero_mean(
            g, rhs, p.lin_tol, has_warm ? warm : nullptr, 4.0 * p.lin_tol / dt);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i)
                v.ux(i, j) -= dt * (phi(i, j) - phi(i - 1, j)) / g.hx;
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                v.uy(i, j) -= dt * (phi(i, j) - phi(i, j - 1)) / g.hy;
        v.clamp_normal_boundary();
        if (warm)
            *warm = std::move(phi);
        return rep;
    };
    project(ustar, ws ? &ws->phi_warm : nullptr, ws && ws->has_phi);
    if (ws)
        ws->has_phi = true;

    // Implicit viscosity, one Helmholtz solve per component.
    const double c = p.mu * dt;
    CgOptions opt;
    opt.rel_tol = p.lin_tol;
    std::vector<double> b, x;

    Stencil5 Ax = ux_operator(g, 1.0, c);
    extract_ux(ustar, b);
    if (ws && ws->has_visc)
        x = ws->ux_warm;
    else
        x.assign(b.size(), 0.0);
    LinearSolveReport rx = cg_solve(Ax, b, x, opt);
    if (!rx.converged)
        throw solver_error("momentum_step: viscous solve (ux) failed, residual " +
                           std::to_string(rx.residual));
    insert_ux(ustar, x);
    if (ws)
        ws->ux_warm = std::move(x);

    Stencil5 Ay = uy_operator(g, 1.0, c);
    extract_uy(ustar, b);
    if (ws && ws->has_visc)
        x = ws->uy_warm;
    else
        x.assign(b.size(), 0.0);
    LinearSolveReport ry = cg_solve(Ay, b, x, opt);
    if (!ry.converged)
        throw solver_error("momentum_step: viscous solve (uy) failed, residual " +
                           std::to_string(ry.residual));
    insert_uy(ustar, x);
    if (ws) {
        ws->uy_warm = std::move(x);
        ws->has_visc = true;
    }

    // Second projection restores exact discrete incompressibility after the
    // viscous closure; the absolute target keeps the post-projection
    // divergence within 10*lin_tol regardless of the velocity amplitude.
    MomentumResult res;
    res.u = std::move(ustar);
    res.projection_report =
        project(res.u, ws ? &ws->phi2_warm : nullptr, ws && ws->has_phi2);
    if (ws)
        ws->has_phi2 = true;
    res.div_max = max_abs_divergence(res.u);

    // Kinetic energy balance defect:
    //   d(0.5||u||^2) + dt*mu*||grad u||^2 + dt*Int Theta grad G . u = r.
    const double ke_old = 0.5 * vec_inner(un, un);
    const double ke_new = 0.5 * vec_inner(res.u, res.u);
    const double svisc = viscous_energy(res.u);
    const double buoy_work = -vec_inner(force, un);
    res.w7_residual = ke_new - ke_old + dt * p.mu * svisc + dt * buoy_work;

    // Allowance: O(dt*(h^2+dt^2)) advection skew defect, the explicit-update
    // quadratic term dt^2 ||-adv+f||^2, and the solver floor.
    const double h2 = g.hx * g.hx + g.hy * g.hy;
    const double umax = std::max(un.max_abs_ux(), un.max_abs_uy());
    res.w7_tolerance = 100.0 * dt * (h2 + dt * dt) * (1.0 + ke_old) * (1.0 + umax) +
                       dt * dt * rhs_norm2 + 10.0 * p.lin_tol * (1.0 + ke_old);
    return res;
}

StepReport full_step(SimState &state, const Problem &problem, StepWorkspace &ws, double dt_cap) {
    const Params &p = problem.params;
    StepReport rep;
    rep.t_before = state.t;
    double dt = compute_dt(state, p);
    if (dt_cap > 0.0)
        dt = std::min(dt, dt_cap);
    rep.dt = dt;

    const double theta_old_min = state.theta.min_value();
    const double theta_old_max = state.theta.max_value();
    if (!ws.env_init) {
        ws.env_lo = theta_old_min;
        ws.env_hi = theta_old_max;
        ws.env_init = true;
    }

    TempStepResult ts = temperature_step(state.theta, state.u, problem.closure, p, dt, &ws.heat);
    MomentumResult ms = momentum_step(state, ts.theta, problem, dt, &ws.flow);

    if (!ts.theta.all_finite())
        throw solver_error("full_step: non-finite values in theta at t = " +
                           std::to_string(state.t));
    if (!ms.u.all_finite())
        throw solver_error("full_step: non-finite values in u at t = " + std::to_string(state.t));

    // Parabolic envelope for this step: old interior extrema vs applied trace.
    rep.trace_min = ts.trace_min;
    rep.trace_max = ts.trace_max;
    rep.env_lo = std::min(theta_old_min, ts.trace_min);
    rep.env_hi = std::max(theta_old_max, ts.trace_max);
    rep.theta_min = ts.theta.min_value();
    rep.theta_max = ts.theta.max_value();
    rep.envelope_excess =
        std::max({0.0, rep.theta_max - rep.env_hi, rep.env_lo - rep.theta_min});

    // Truncation energies against the running parabolic-boundary constants.
    ws.env_hi = std::max(ws.env_hi, ts.trace_max);
    ws.env_lo = std::min(ws.env_lo, ts.trace_min);
    const Grid &g = problem.grid;
    auto truncation = [&](const ScalarField &f, double up, double lo, double &pos, double &neg) {
        double sp = 0, sn = 0;
        for (double v : f.data()) {
            const double a = std::max(v - up, 0.0);
            const double b = std::min(v - lo, 0.0);
            sp += a * a;
            sn += b * b;
        }
        pos = sp * g.cell_area();
        neg = sn * g.cell_area();
    };
    double pos_old = 0, neg_old = 0, pos_new = 0, neg_new = 0;
    truncation(state.theta, ws.env_hi, ws.env_lo, pos_old, neg_old);
    truncation(ts.theta, ws.env_hi, ws.env_lo, pos_new, neg_new);
    rep.w22_pos_delta = pos_new - pos_old;
    rep.w22_neg_delta = neg_new - neg_old;

    rep.w15_residual = ts.w15_residual;
    rep.w15_tolerance = ts.w15_tolerance;
    rep.w7_residual = ms.w7_residual;
    rep.w7_tolerance = ms.w7_tolerance;
    rep.div_max = ms.div_max;
    rep.scale = std::max({1.0, std::fabs(rep.env_hi), std::fabs(rep.env_lo),
                          ts.theta.max_abs()});

    state.theta = std::move(ts.theta);
    state.u = std::move(ms.u);
    state.t += dt;
    state.step += 1;
    rep.t_after = state.t;
    return rep;
}

} // namespace obrb

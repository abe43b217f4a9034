#include "obrb/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "obrb/errors.hpp"

namespace obrb {

namespace {

// Diagonal contribution of one axis at the first/last sample.
double end_diag(AxisBC bc) {
    switch (bc) {
    case AxisBC::node_dirichlet: return 2.0;
    case AxisBC::half_dirichlet: return 3.0;
    case AxisBC::half_neumann: return 1.0;
    }
    return 2.0;
}

} // namespace

void Stencil5::apply(const std::vector<double> &v, std::vector<double> &out) const {
    const double ihx2 = 1.0 / (hx * hx);
    const double ihy2 = 1.0 / (hy * hy);
    const double ax_end = end_diag(bcx) * ihx2;
    const double ay_end = end_diag(bcy) * ihy2;
    out.resize(v.size());
    for (int j = 0; j < my; ++j) {
        const double *row = v.data() + static_cast<std::size_t>(j) * mx;
        const double *below = (j > 0) ? row - mx : nullptr;
        const double *above = (j < my - 1) ? row + mx : nullptr;
        double *o = out.data() + static_cast<std::size_t>(j) * mx;
        const double ay = (j == 0 || j == my - 1) ? ay_end : 2.0 * ihy2;
        for (int i = 0; i < mx; ++i) {
            const double ax = (i == 0 || i == mx - 1) ? ax_end : 2.0 * ihx2;
            double lap = (ax + ay) * row[i];
            if (i > 0)
                lap -= ihx2 * row[i - 1];
            if (i < mx - 1)
                lap -= ihx2 * row[i + 1];
            if (below)
                lap -= ihy2 * below[i];
            if (above)
                lap -= ihy2 * above[i];
            o[i] = sigma * row[i] + c * lap;
        }
    }
}

void Stencil5::diagonal(std::vector<double> &out) const {
    const double ihx2 = 1.0 / (hx * hx);
    const double ihy2 = 1.0 / (hy * hy);
    const double ax_end = end_diag(bcx) * ihx2;
    const double ay_end = end_diag(bcy) * ihy2;
    out.resize(size());
    for (int j = 0; j < my; ++j) {
        const double ay = (j == 0 || j == my - 1) ? ay_end : 2.0 * ihy2;
        for (int i = 0; i < mx; ++i) {
            const double ax = (i == 0 || i == mx - 1) ? ax_end : 2.0 * ihx2;
            out[static_cast<std::size_t>(j) * mx + i] = sigma + c * (ax + ay);
        }
    }
}

namespace {

double dot(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a[k] * b[k];
    return s;
}

void remove_mean(std::vector<double> &v) {
    double m = 0;
    for (double x : v)
        m += x;
    m /= static_cast<double>(v.size());
    for (double &x : v)
        x -= m;
}

} // namespace

LinearSolveReport cg_solve(const Stencil5 &A, const std::vector<double> &b,
                           std::vector<double> &x, const CgOptions &opt) {
    const std::size_t n = A.size();
    x.resize(n, 0.0);
    const double bnorm = std::sqrt(dot(b, b));
    double target;
    if (bnorm > 0.0)
        target = (opt.abs_tol > 0.0) ? std::min(opt.rel_tol * bnorm, opt.abs_tol)
                                     : opt.rel_tol * bnorm;
    else
        target = (opt.abs_tol > 0.0) ? opt.abs_tol : 1e-300;

    int cap = opt.max_iter;
    if (cap <= 0)
        cap = std::max(200, static_cast<int>(10.0 * std::sqrt(static_cast<double>(n)) *
                                             std::log(1.0 / opt.rel_tol)));

    std::vector<double> diag;
    A.diagonal(diag);
    std::vector<double> inv_diag(n);
    for (std::size_t k = 0; k < n; ++k)
        inv_diag[k] = 1.0 / diag[k];

    std::vector<double> r(n), z(n), p(n), q(n);
    A.apply(x, q);
    for (std::size_t k = 0; k < n; ++k)
        r[k] = b[k] - q[k];
    if (opt.project_mean)
        remove_mean(r);

    double rnorm = std::sqrt(dot(r, r));
    LinearSolveReport rep;
    auto finish = [&](int iters, double rn) {
        rep.iterations = iters;
        rep.residual = (bnorm > 0.0) ? rn / bnorm : rn;
        rep.converged = (rn <= target * (1.0 + 1e-12)) || (bnorm > 0.0 && rn <= opt.rel_tol * bnorm);
        return rep;
    };
    if (rnorm <= target)
        return finish(0, rnorm);

    for (std::size_t k = 0; k < n; ++k)
        z[k] = inv_diag[k] * r[k];
    if (opt.project_mean)
        remove_mean(z);
    p = z;
    double rz = dot(r, z);

    double best = rnorm;
    int since_best = 0;
    int it = 0;
    for (it = 1; it <= cap; ++it) {
        A.apply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0))
            break; // operator lost definiteness in finite precision
        const double step = rz / pq;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += step * p[k];
            r[k] -= step * q[k];
        }
        rnorm = std::sqrt(dot(r, r));
        if (rnorm <= target)
            break;
        if (rnorm < 0.999 * best) {
            best = rnorm;
            since_best = 0;
        } else if (++since_best >= 200) {
            break; // stagnated at the attainable floor
        }
        for (std::size_t k = 0; k < n; ++k)
            z[k] = inv_diag[k] * r[k];
        if (opt.project_mean)
            remove_mean(z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < n; ++k)
            p[k] = z[k] + beta * p[k];
    }
    if (opt.project_mean)
        remove_mean(x);
    return finish(std::min(it, cap), rnorm);
}

namespace {

Stencil5 cell_operator(const Grid &g, double sigma, double c, AxisBC bc) {
    Stencil5 A;
    A.mx = g.nx;
    A.my = g.ny;
    A.hx = g.hx;
    A.hy = g.hy;
    A.sigma = sigma;
    A.c = c;
    A.bcx = bc;
    A.bcy = bc;
    return A;
}

// Inhomogeneous Dirichlet data enters the right-hand side at wall cells with
// weight 2*c*b/h^2 (half-cell ghost elimination).
void add_dirichlet_rhs(const Grid &g, double c, const BoundaryTrace &bc, std::vector<double> &rhs) {
    const double wx = 2.0 * c / (g.hx * g.hx);
    const double wy = 2.0 * c / (g.hy * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        rhs[static_cast<std::size_t>(j) * g.nx] += wx * bc.west[j];
        rhs[static_cast<std::size_t>(j) * g.nx + g.nx - 1] += wx * bc.east[j];
    }
    for (int i = 0; i < g.nx; ++i) {
        rhs[i] += wy * bc.south[i];
        rhs[static_cast<std::size_t>(g.ny - 1) * g.nx + i] += wy * bc.north[i];
    }
}

ScalarField field_from(const Grid &g, std::vector<double> &&v) {
    ScalarField f(g);
    f.data() = std::move(v);
    return f;
}

} // namespace

std::pair<ScalarField, LinearSolveReport>
solve_poisson_dirichlet(const Grid &g, const ScalarField &rhs, const BoundaryTrace &bc,
                        double tol, const ScalarField *x0) {
    if (!(tol > 0.0))
        throw invalid_argument_error("solve_poisson_dirichlet: tol must be positive");
    Stencil5 A = cell_operator(g, 0.0, 1.0, AxisBC::half_dirichlet);
    std::vector<double> b(g.cells());
    for (std::size_t k = 0; k < b.size(); ++k)
        b[k] = -rhs.data()[k];
    add_dirichlet_rhs(g, 1.0, bc, b);
    std::vector<double> x = x0 ? x0->data() : std::vector<double>(g.cells(), 0.0);
    CgOptions opt;
    opt.rel_tol = tol;
    LinearSolveReport rep = cg_solve(A, b, x, opt);
    ScalarField out = field_from(g, std::move(x));
    out.set_dirichlet_ghosts(bc);
    return {std::move(out), rep};
}

std::pair<ScalarField, LinearSolveReport>
solve_poisson_neumann_zero_mean(const Grid &g, const ScalarField &rhs, double tol,
                                const ScalarField *x0, double abs_tol) {
    if (!(tol > 0.0))
        throw invalid_argument_error("solve_poisson_neumann_zero_mean: tol must be positive");
    double m = 0;
    for (double v : rhs.data())
        m += v;
    m /= static_cast<double>(rhs.data().size());
    const double compat = 100.0 * tol * std::max(1.0, rhs.max_abs());
    if (std::fabs(m) > compat)
        throw invalid_argument_error(
            "solve_poisson_neumann_zero_mean: incompatible rhs, discrete mean = " +
            std::to_string(m));
    Stencil5 A = cell_operator(g, 0.0, 1.0, AxisBC::half_neumann);
    std::vector<double> b(g.cells());
    for (std::size_t k = 0; k < b.size(); ++k)
        b[k] = -(rhs.data()[k] - m);
    std::vector<double> x = x0 ? x0->data() : std::vector<double>(g.cells(), 0.0);
    CgOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = abs_tol;
    opt.project_mean = true;
    LinearSolveReport rep = cg_solve(A, b, x, opt);
    ScalarField out = field_from(g, std::move(x));
    out.set_neumann_ghosts();
    return {std::move(out), rep};
}

std::pair<ScalarField, LinearSolveReport>
solve_helmholtz_dirichlet(const Grid &g, double c, const ScalarField &rhs,
                          const BoundaryTrace &bc, double tol, const ScalarField *x0,
                          double abs_tol) {
    if (!(c > 0.0))
        throw invalid_argument_error("solve_helmholtz_dirichlet: c must be positive");
    if (!(tol > 0.0))
        throw invalid_argument_error("solve_helmholtz_dirichlet: tol must be positive");
    Stencil5 A = cell_operator(g, 1.0, c, AxisBC::half_dirichlet);
    std::vector<double> b = rhs.data();
    add_dirichlet_rhs(g, c, bc, b);
    std::vector<double> x = x0 ? x0->data() : std::vector<double>(g.cells(), 0.0);
    CgOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = abs_tol;
    LinearSolveReport rep = cg_solve(A, b, x, opt);
    ScalarField out = field_from(g, std::move(x));
    out.set_dirichlet_ghosts(bc);
    return {std::move(out), rep};
}

RankOneResult solve_helmholtz_rank_one(const Grid &g, double c, const ScalarField &rhs,
                                       const BoundaryTrace &thetaB_trace, double alpha,
                                       double tol, const ScalarField *x0,
                                       const ScalarField *aux0, double abs_tol) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw invalid_argument_error("solve_helmholtz_rank_one: alpha must lie in [0,1)");
    RankOneResult res;
    if (alpha == 0.0) {
        auto [u, rep] = solve_helmholtz_dirichlet(g, c, rhs, thetaB_trace, tol, x0, abs_tol);
        double m = 0;
        for (double v : u.data())
            m += v;
        res.mean = m / static_cast<double>(u.data().size());
        res.solution = std::move(u);
        res.applied_trace = thetaB_trace;
        res.report = rep;
        res.report_aux = rep; // single solve, no auxiliary system
        return res;
    }
    auto [u0, rep0] = solve_helmholtz_dirichlet(g, c, rhs, thetaB_trace, tol, x0, abs_tol);
    // Homogeneous problem with unit trace; its mean m1 lies in [0,1] by the
    // M-matrix comparison argument, so the denominator below stays >= 1.
    ScalarField zero_rhs(g);
    BoundaryTrace unit = BoundaryTrace::constant(g, 1.0);
    auto [ue, rep1] = solve_helmholtz_dirichlet(g, c, zero_rhs, unit, tol, aux0, abs_tol);

    double m0 = 0, m1 = 0;
    for (double v : u0.data())
        m0 += v;
    for (double v : ue.data())
        m1 += v;
    m0 /= static_cast<double>(u0.data().size());
    m1 /= static_cast<double>(ue.data().size());

    const double denom = 1.0 + alpha * m1;
    if (std::fabs(denom) <= 1e-12)
        throw solver_error("solve_helmholtz_rank_one: singular non-local coupling, 1+alpha*m1 = " +
                           std::to_string(denom));
    const double m = m0 / denom;

    ScalarField sol = std::move(u0);
    const double shift = alpha * m;
    for (std::size_t k = 0; k < sol.data().size(); ++k)
        sol.data()[k] -= shift * ue.data()[k];
    BoundaryTrace applied = thetaB_trace;
    applied += -shift;
    sol.set_dirichlet_ghosts(applied);

    double msol = 0;
    for (double v : sol.data())
        msol += v;
    res.mean = msol / static_cast<double>(sol.data().size());
    res.solution = std::move(sol);
    res.applied_trace = std::move(applied);
    res.aux = std::move(ue);
    res.report = rep0;
    res.report_aux = rep1;
    return res;
}

double poincare_constant(const Grid &g, double tol) {
    if (!(tol > 0.0))
        throw invalid_argument_error("poincare_constant: tol must be positive");
    Stencil5 A = cell_operator(g, 0.0, 1.0, AxisBC::half_dirichlet);
    const std::size_t n = A.size();

    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n), w(n, 0.0);
    for (double &x : v)
        x = dist(rng);
    double nv = std::sqrt(dot(v, v));
    for (double &x : v)
        x /= nv;

    CgOptions inner;
    inner.rel_tol = std::min(1e-12, tol * 1e-2);

    double lambda = 0.0, lambda_prev = -1.0;
    const int cap = 500;
    for (int it = 0; it < cap; ++it) {
        LinearSolveReport rep = cg_solve(A, v, w, inner);
        if (!rep.converged)
            throw solver_error("poincare_constant: inner solve stalled at iteration " +
                               std::to_string(it));
        const double ww = dot(w, w);
        lambda = dot(v, w) / ww; // Rayleigh quotient of w, using A w ~= v
        const double nw = std::sqrt(ww);
        for (std::size_t k = 0; k < n; ++k)
            v[k] = w[k] / nw;
        if (it > 0 && std::fabs(lambda - lambda_prev) <= tol * std::fabs(lambda))
            return std::sqrt(lambda);
        lambda_prev = lambda;
    }
    throw solver_error("poincare_constant: power iteration failed to converge in " +
                       std::to_string(cap) + " iterations");
}

double dirichlet_energy(const ScalarField &v) {
    const Grid &g = v.grid();
    Stencil5 A = cell_operator(g, 0.0, 1.0, AxisBC::half_dirichlet);
    std::vector<double> av;
    A.apply(v.data(), av);
    double s = 0;
    for (std::size_t k = 0; k < av.size(); ++k)
        s += av[k] * v.data()[k];
    return s * g.cell_area();
}

ScalarField apply_laplacian_dirichlet(const ScalarField &v, const BoundaryTrace &bc) {
    const Grid &g = v.grid();
    ScalarField f = v;
    f.set_dirichlet_ghosts(bc);
    ScalarField out(g);
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double w = (i > 0) ? f(i - 1, j) : f.ghost(Edge::west)[j];
            const double e = (i < g.nx - 1) ? f(i + 1, j) : f.ghost(Edge::east)[j];
            const double s = (j > 0) ? f(i, j - 1) : f.ghost(Edge::south)[i];
            const double n = (j < g.ny - 1) ? f(i, j + 1) : f.ghost(Edge::north)[i];
            out(i, j) = (w - 2.0 * f(i, j) + e) * ihx2 + (s - 2.0 * f(i, j) + n) * ihy2;
        }
    }
    return out;
}

} // namespace obrb

#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "obrb/elliptic.hpp"
#include "obrb/errors.hpp"
#include "obrb/funcspec.hpp"
#include "obrb/nonlocal.hpp"

using namespace obrb;

namespace {

ScalarField sample(const Grid &g, double (*f)(double, double)) {
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = f(g.xc(i), g.yc(j));
    return out;
}

BoundaryTrace trace_of(const Grid &g, double (*f)(double, double)) {
    BoundaryTrace b = BoundaryTrace::zeros(g);
    for (int j = 0; j < g.ny; ++j) {
        b.west[j] = f(0.0, g.yc(j));
        b.east[j] = f(g.lx, g.yc(j));
    }
    for (int i = 0; i < g.nx; ++i) {
        b.south[i] = f(g.xc(i), 0.0);
        b.north[i] = f(g.xc(i), g.ly);
    }
    return b;
}

double max_err(const ScalarField &a, const ScalarField &b) {
    double m = 0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, std::fabs(a.data()[k] - b.data()[k]));
    return m;
}

double sinsin(double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); }

} // namespace

TEST_CASE("poisson dirichlet reproduces linear and bilinear data exactly") {
    Grid g = build_grid(32, 32, 1.0, 1.0);
    ScalarField zero(g);

    auto lin = [](double, double y) { return 1.0 - y; };
    auto [u1, r1] = solve_poisson_dirichlet(g, zero, trace_of(g, lin), 1e-12);
    CHECK(r1.converged);
    CHECK(max_err(u1, sample(g, lin)) <= 1e-10);

    auto bil = [](double x, double y) { return x * y; };
    auto [u2, r2] = solve_poisson_dirichlet(g, zero, trace_of(g, bil), 1e-12);
    CHECK(r2.converged);
    CHECK(max_err(u2, sample(g, bil)) <= 1e-10);
}

TEST_CASE("poisson dirichlet manufactured solution converges at second order") {
    double err[2];
    int k = 0;
    for (int n : {32, 64}) {
        Grid g = build_grid(n, n, 1.0, 1.0);
        ScalarField rhs = sample(g, [](double x, double y) {
            return -2.0 * M_PI * M_PI * std::sin(M_PI * x) * std::sin(M_PI * y);
        });
        auto [u, rep] = solve_poisson_dirichlet(g, rhs, BoundaryTrace::zeros(g), 1e-12);
        CHECK(rep.converged);
        err[k++] = max_err(u, sample(g, sinsin));
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.3));
    CHECK(err[1] <= 2e-3);
}

TEST_CASE("poisson solutions are operator consistent") {
    Grid g = build_grid(24, 24, 1.0, 1.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ScalarField rhs(g);
    for (double &v : rhs.data())
        v = dist(rng);
    auto lin = [](double x, double y) { return 0.3 * x - y + 0.2; };
    BoundaryTrace bc = trace_of(g, lin);
    auto [u, rep] = solve_poisson_dirichlet(g, rhs, bc, 1e-11);
    CHECK(rep.converged);
    ScalarField lap = apply_laplacian_dirichlet(u, bc);
    double resid = 0, scale = 0;
    for (std::size_t k = 0; k < lap.data().size(); ++k) {
        resid += std::pow(lap.data()[k] - rhs.data()[k], 2);
        scale += std::pow(rhs.data()[k], 2);
    }
    CHECK(std::sqrt(resid / scale) <= 1e-9);
}

TEST_CASE("poisson neumann zero mean") {
    Grid g = build_grid(48, 48, 1.0, 1.0);
    ScalarField zero(g);
    auto [u0, r0] = solve_poisson_neumann_zero_mean(g, zero, 1e-12);
    CHECK(r0.converged);
    CHECK(u0.max_abs() <= 1e-13);

    // Manufactured: Lap u = cos(pi x) has the mean-zero solution -cos(pi x)/pi^2.
    double err[2];
    int k = 0;
    for (int n : {32, 64}) {
        Grid gn = build_grid(n, n, 1.0, 1.0);
        ScalarField rhs = sample(gn, [](double x, double) { return std::cos(M_PI * x); });
        auto [u, rep] = solve_poisson_neumann_zero_mean(gn, rhs, 1e-12);
        CHECK(rep.converged);
        ScalarField exact = sample(gn, [](double x, double) {
            return -std::cos(M_PI * x) / (M_PI * M_PI);
        });
        err[k++] = max_err(u, exact);
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.3));

    ScalarField ones(g, 1.0);
    CHECK_THROWS_WITH_AS(std::ignore = solve_poisson_neumann_zero_mean(g, ones, 1e-12),
                         doctest::Contains("mean"), invalid_argument_error);
}

TEST_CASE("helmholtz dirichlet limits and manufactured solution") {
    Grid g = build_grid(32, 32, 1.0, 1.0);

    // c -> 0: the identity dominates.
    ScalarField rhs = sample(g, sinsin);
    auto [u_id, r_id] = solve_helmholtz_dirichlet(g, 1e-14, rhs, BoundaryTrace::zeros(g), 1e-12);
    CHECK(r_id.converged);
    CHECK(max_err(u_id, rhs) <= 1e-8);

    // Constants solve the operator exactly.
    ScalarField ones(g, 1.0);
    auto [u_c, r_c] =
        solve_helmholtz_dirichlet(g, 0.37, ones, BoundaryTrace::constant(g, 1.0), 1e-12);
    CHECK(r_c.converged);
    ScalarField exact_c(g, 1.0);
    CHECK(max_err(u_c, exact_c) <= 1e-10);

    // Manufactured: (Id - c Lap) sin sin = (1 + 2 c pi^2) sin sin.
    const double c = 0.05;
    double err[2];
    int k = 0;
    for (int n : {32, 64}) {
        Grid gn = build_grid(n, n, 1.0, 1.0);
        ScalarField f = sample(gn, sinsin);
        ScalarField scaled = f;
        scaled *= 1.0 + 2.0 * c * M_PI * M_PI;
        auto [u, rep] = solve_helmholtz_dirichlet(gn, c, scaled, BoundaryTrace::zeros(gn), 1e-12);
        CHECK(rep.converged);
        err[k++] = max_err(u, f);
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("helmholtz M-matrix positivity") {
    Grid g = build_grid(20, 20, 1.0, 1.0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    ScalarField rhs(g);
    for (double &v : rhs.data())
        v = dist(rng);
    BoundaryTrace bc = BoundaryTrace::constant(g, 0.2);
    auto [u, rep] = solve_helmholtz_dirichlet(g, 0.01, rhs, bc, 1e-11);
    CHECK(rep.converged);
    CHECK(u.min_value() >= -1e-10);
}

TEST_CASE("rank-one closure: alpha 0 equals the plain dirichlet solve") {
    Grid g = build_grid(24, 24, 1.0, 1.0);
    ScalarField rhs = sample(g, sinsin);
    BoundaryTrace bc = BoundaryTrace::constant(g, 0.7);
    auto [u_d, r_d] = solve_helmholtz_dirichlet(g, 0.02, rhs, bc, 1e-11);
    RankOneResult ro = solve_helmholtz_rank_one(g, 0.02, rhs, bc, 0.0, 1e-11);
    CHECK(r_d.converged);
    CHECK(ro.report.converged);
    CHECK(max_err(u_d, ro.solution) == 0.0); // same code path, bit-identical
}

TEST_CASE("rank-one closure: constant fixed point") {
    Grid g = build_grid(24, 24, 1.0, 1.0);
    const double alpha = 0.5, b = 1.2, c = 0.07;
    // Theta* = b/(1+alpha) is the steady state of the implicit step.
    ScalarField rhs(g, b / (1.0 + alpha));
    RankOneResult ro =
        solve_helmholtz_rank_one(g, c, rhs, BoundaryTrace::constant(g, b), alpha, 1e-12);
    CHECK(ro.report.converged);
    ScalarField exact(g, b / (1.0 + alpha));
    CHECK(max_err(ro.solution, exact) <= 1e-10);
}

TEST_CASE("rank-one closure agrees with the Picard iteration oracle") {
    Grid g = build_grid(24, 24, 1.0, 1.0);
    const double alpha = 0.8, c = 0.03;
    ScalarField rhs = sample(g, [](double x, double y) { return std::sin(2 * M_PI * x) + y; });
    auto lin = [](double, double y) { return 1.0 - y; };
    BoundaryTrace tb = trace_of(g, lin);

    RankOneResult ro = solve_helmholtz_rank_one(g, c, rhs, tb, alpha, 1e-12);
    CHECK(ro.report.converged);

    // Oracle: lag the mean and iterate the plain Dirichlet solve to a fixed
    // point. This is independent of the rank-one combination formula.
    double m = 0;
    ScalarField picard(g);
    for (int it = 0; it < 200; ++it) {
        BoundaryTrace t = tb;
        t += -alpha * m;
        auto [u, rep] = solve_helmholtz_dirichlet(g, c, rhs, t, 1e-13);
        REQUIRE(rep.converged);
        picard = u;
        const double m_new = mean(picard);
        if (std::fabs(m_new - m) <= 1e-14)
            break;
        m = m_new;
    }
    CHECK(max_err(ro.solution, picard) <= 1e-9);

    // Self-consistency of the applied trace: trace = thetaB - alpha*mean.
    const double shift = alpha * ro.mean;
    for (int j = 0; j < g.ny; ++j) {
        const double want = tb.west[j] - shift;
        const double got = 0.5 * (ro.solution.ghost(Edge::west)[j] + ro.solution(0, j));
        CHECK(std::fabs(got - want) <= 1e-10);
    }
}

TEST_CASE("poincare constant matches the closed-form discrete eigenvalue") {
    for (auto [nx, ny, lx, ly] : {std::tuple{32, 32, 1.0, 1.0}, std::tuple{48, 24, 1.0, 2.0},
                                  std::tuple{24, 24, 2.0, 2.0}}) {
        Grid g = build_grid(nx, ny, lx, ly);
        const double cp = poincare_constant(g, 1e-10);
        // Exact first eigenvalue of the discrete Dirichlet Laplacian with the
        // half-cell closure: the product sine mode is an exact eigenvector.
        const double lx1 = 4.0 / (g.hx * g.hx) * std::pow(std::sin(M_PI * g.hx / (2 * lx)), 2);
        const double ly1 = 4.0 / (g.hy * g.hy) * std::pow(std::sin(M_PI * g.hy / (2 * ly)), 2);
        CHECK(cp == doctest::Approx(std::sqrt(lx1 + ly1)).epsilon(1e-7));
    }
}

TEST_CASE("poincare constant converges to the continuum value at second order") {
    const double exact = M_PI * std::sqrt(2.0);
    double err[3];
    int k = 0;
    for (int n : {16, 32, 64}) {
        Grid g = build_grid(n, n, 1.0, 1.0);
        err[k++] = std::fabs(poincare_constant(g, 1e-10) - exact);
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.15));
    CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("poincare constant decreases under domain inclusion") {
    Grid g11 = build_grid(32, 32, 1.0, 1.0);
    Grid g12 = build_grid(32, 64, 1.0, 2.0);
    Grid g22 = build_grid(64, 64, 2.0, 2.0);
    const double c11 = poincare_constant(g11, 1e-9);
    const double c12 = poincare_constant(g12, 1e-9);
    const double c22 = poincare_constant(g22, 1e-9);
    CHECK(c12 < c11);
    CHECK(c22 < c12);
    CHECK(c12 == doctest::Approx(M_PI * std::sqrt(1.25)).epsilon(1e-3));
    CHECK(c22 == doctest::Approx(M_PI / std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("dirichlet energy equals the face-difference sum") {
    Grid g = build_grid(12, 10, 1.0, 1.5);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ScalarField v(g);
    for (double &x : v.data())
        x = dist(rng);
    // Independent evaluation: interior face differences plus half-cell wall
    // terms with zero trace.
    double s = 0;
    for (int j = 0; j < g.ny; ++j) {
        s += 2.0 * v(0, j) * v(0, j) / (g.hx * g.hx);
        s += 2.0 * v(g.nx - 1, j) * v(g.nx - 1, j) / (g.hx * g.hx);
        for (int i = 1; i < g.nx; ++i)
            s += std::pow((v(i, j) - v(i - 1, j)) / g.hx, 2);
    }
    for (int i = 0; i < g.nx; ++i) {
        s += 2.0 * v(i, 0) * v(i, 0) / (g.hy * g.hy);
        s += 2.0 * v(i, g.ny - 1) * v(i, g.ny - 1) / (g.hy * g.hy);
        for (int j = 1; j < g.ny; ++j)
            s += std::pow((v(i, j) - v(i, j - 1)) / g.hy, 2);
    }
    s *= g.cell_area();
    CHECK(dirichlet_energy(v) == doctest::Approx(s).epsilon(1e-12));
}

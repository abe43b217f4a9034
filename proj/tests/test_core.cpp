#include <doctest.h>

#include <cmath>

#include "obrb/elliptic.hpp"
#include "obrb/errors.hpp"
#include "obrb/funcspec.hpp"
#include "obrb/grid.hpp"
#include "obrb/initial.hpp"
#include "obrb/params.hpp"

using namespace obrb;

TEST_CASE("build_grid computes spacings") {
    Grid g = build_grid(64, 64, 1.0, 1.0);
    CHECK(g.hx == doctest::Approx(1.0 / 64).epsilon(1e-15));
    CHECK(g.hy == doctest::Approx(1.0 / 64).epsilon(1e-15));
    CHECK(g.area == doctest::Approx(1.0));

    Grid r = build_grid(4, 8, 2.0, 1.0);
    CHECK(r.hx == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.hy == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("build_grid rejects bad input") {
    CHECK_THROWS_AS(build_grid(2, 4, 1.0, 1.0), invalid_argument_error);
    CHECK_THROWS_AS(build_grid(8, 3, 1.0, 1.0), invalid_argument_error);
    CHECK_THROWS_AS(build_grid(8, 8, -1.0, 1.0), invalid_argument_error);
    CHECK_THROWS_AS(build_grid(8, 8, 1.0, 0.0), invalid_argument_error);
}

TEST_CASE("grid round trip reproduces lengths") {
    for (auto [nx, ny, lx, ly] : {std::tuple{64, 64, 1.0, 1.0}, std::tuple{48, 96, 2.0, 3.0},
                                  std::tuple{5, 7, 0.3, 1.7}}) {
        Grid g = build_grid(nx, ny, lx, ly);
        CHECK(std::fabs(g.hx * g.nx - lx) <= 4 * std::numeric_limits<double>::epsilon() * lx);
        CHECK(std::fabs(g.hy * g.ny - ly) <= 4 * std::numeric_limits<double>::epsilon() * ly);
    }
}

TEST_CASE("alpha_from_gamma") {
    CHECK(alpha_from_gamma(5.0 / 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(alpha_from_gamma(1.4) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK_THROWS_AS(alpha_from_gamma(2.5), invalid_argument_error);
    CHECK_THROWS_AS(alpha_from_gamma(1.0), invalid_argument_error);
}

TEST_CASE("params validation enforces the alpha hypothesis") {
    Params p;
    p.g_spec = FuncSpec::parse("linear_y(-1)");
    p.thetaB_spec = FuncSpec::parse("constant(1)");
    p.alpha = 0.5;
    CHECK_NOTHROW(p.validate());
    for (double bad : {-0.1, 0.0, 1.0, 1.2}) {
        p.alpha = bad;
        CHECK_THROWS_AS(p.validate(), invalid_argument_error);
    }
    p.alpha = 0.5;
    p.mu = 0.0;
    CHECK_THROWS_AS(p.validate(), invalid_argument_error);
}

TEST_CASE("make_potential linear built-ins are exact and centered") {
    Grid g = build_grid(32, 32, 1.0, 1.0);
    ScalarField gy = make_potential(g, "linear_y(-1)");
    for (int j = 0; j < g.ny; ++j)
        CHECK(gy(5, j) == doctest::Approx(-(g.yc(j) - 0.5)).epsilon(1e-15));
    double m = 0;
    for (double v : gy.data())
        m += v;
    CHECK(std::fabs(m / gy.data().size()) <= 1e-12);

    ScalarField gx = make_potential(g, "linear_x(2)");
    for (int i = 0; i < g.nx; ++i)
        CHECK(gx(i, 3) == doctest::Approx(2.0 * (g.xc(i) - 0.5)).epsilon(1e-15));
}

TEST_CASE("make_potential harmonic_xy: analytic mean cross-checked by quadrature") {
    Grid g = build_grid(40, 40, 1.0, 1.0);
    // Oracle: the raw product x*y has mean 1/4 on the unit square; discrete
    // midpoint quadrature reproduces that integral exactly for bilinears.
    double quad = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            quad += g.xc(i) * g.yc(j);
    quad *= g.cell_area();
    CHECK(quad == doctest::Approx(0.25).epsilon(1e-13));

    ScalarField f = make_potential(g, "harmonic_xy(1)");
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(f(i, j) == doctest::Approx(g.xc(i) * g.yc(j) - 0.25).epsilon(1e-14));
    double m = 0;
    for (double v : f.data())
        m += v;
    CHECK(std::fabs(m / f.data().size()) <= 1e-12);
}

TEST_CASE("potential built-ins are discretely harmonic in the interior") {
    Grid g = build_grid(24, 24, 1.0, 1.0);
    for (const char *spec : {"linear_y(-1)", "linear_x(3)", "harmonic_xy(1)",
                             "linear_y(1) + harmonic_xy(0.5)"}) {
        ScalarField f = make_potential(g, spec);
        const double ihx2 = 1.0 / (g.hx * g.hx);
        const double ihy2 = 1.0 / (g.hy * g.hy);
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i) {
                const double lap = (f(i - 1, j) - 2 * f(i, j) + f(i + 1, j)) * ihx2 +
                                   (f(i, j - 1) - 2 * f(i, j) + f(i, j + 1)) * ihy2;
                CHECK(std::fabs(lap) <= 1e-9);
            }
    }
}

TEST_CASE("make_potential rejects unknown names and constant parts") {
    Grid g = build_grid(8, 8, 1.0, 1.0);
    CHECK_THROWS_AS(make_potential(g, "vortex(1)"), invalid_argument_error);
    CHECK_THROWS_AS(make_potential(g, "linear_y(1) + constant(2)"), invalid_argument_error);
    CHECK_THROWS_AS(make_potential(g, "linear_y"), invalid_argument_error);
}

TEST_CASE("vector fields keep wall-normal components exactly zero") {
    Grid g = build_grid(16, 16, 1.0, 1.0);
    VectorField u(g);
    CHECK(u.normal_boundary_zero());

    VectorField r = random_divfree_velocity(g, 2.0, 42);
    CHECK(r.normal_boundary_zero());
    CHECK(std::max(r.max_abs_ux(), r.max_abs_uy()) == doctest::Approx(2.0).epsilon(1e-13));
    // The streamfunction construction is exactly divergence-free.
    CHECK(max_abs_divergence(r) <= 1e-11 * 2.0 / g.hx);

    VectorField e = eigenmode_velocity(g, 1.0);
    CHECK(e.normal_boundary_zero());
    CHECK(max_abs_divergence(e) <= 1e-12 / g.hx);
}

TEST_CASE("scalar field ghost layers") {
    Grid g = build_grid(8, 8, 1.0, 1.0);
    ScalarField f(g, 3.0);
    BoundaryTrace b = BoundaryTrace::constant(g, 1.0);
    f.set_dirichlet_ghosts(b);
    // Ghost reconstructs the wall value: (ghost + interior)/2 = trace.
    CHECK(0.5 * (f.ghost(Edge::west)[2] + f(0, 2)) == doctest::Approx(1.0));
    f.set_neumann_ghosts();
    CHECK(f.ghost(Edge::north)[4] == doctest::Approx(f(4, g.ny - 1)));
    CHECK(f.all_finite());
}

TEST_CASE("funcspec parse round trip and errors") {
    FuncSpec s = FuncSpec::parse("constant(0.5) + linear_y(-1)");
    Grid g = build_grid(8, 8, 1.0, 1.0);
    CHECK(s.eval(0.25, 0.0, g) == doctest::Approx(1.0)); // 1 - y at y = 0
    CHECK(s.eval(0.25, 1.0, g) == doctest::Approx(0.0));
    CHECK_THROWS_AS(FuncSpec::parse("sin(1)"), invalid_argument_error);
    CHECK_THROWS_AS(FuncSpec::parse("linear_y(abc)"), invalid_argument_error);
}

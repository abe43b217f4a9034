#include "obrb/initial.hpp"

#include <cmath>
#include <random>

#include "obrb/checkpoint.hpp"
#include "obrb/equilibrium.hpp"
#include "obrb/errors.hpp"

namespace obrb {

namespace {

constexpr std::uint64_t kU0Tag = 0xa5a5f00d15ea5e05ULL;
constexpr std::uint64_t kTheta0Tag = 0x7e7a7b0cd5e55eedULL;

// Node-based streamfunction -> exactly divergence-free MAC velocity with zero
// wall-normal components.
VectorField curl_of_nodes(const Grid &g, const std::vector<double> &psi) {
    VectorField u(g);
    auto at = [&](int i, int j) { return psi[static_cast<std::size_t>(j) * (g.nx + 1) + i]; };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            u.ux(i, j) = (at(i, j + 1) - at(i, j)) / g.hy;
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u.uy(i, j) = -(at(i + 1, j) - at(i, j)) / g.hx;
    u.clamp_normal_boundary();
    return u;
}

void normalize_amplitude(VectorField &u, double amplitude) {
    const double m = std::max(u.max_abs_ux(), u.max_abs_uy());
    if (m > 0.0)
        u *= amplitude / m;
}

} // namespace

VectorField random_divfree_velocity(const Grid &g, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ kU0Tag);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int modes = 3;
    std::vector<double> a(static_cast<std::size_t>(modes) * modes);
    for (double &c : a)
        c = dist(rng);
    std::vector<double> psi(static_cast<std::size_t>(g.nx + 1) * (g.ny + 1), 0.0);
    for (int j = 0; j <= g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) {
            const double x = g.xf(i), y = g.yf(j);
            double v = 0;
            for (int k = 1; k <= modes; ++k)
                for (int l = 1; l <= modes; ++l) {
                    const double sx = std::sin(k * M_PI * x / g.lx);
                    const double sy = std::sin(l * M_PI * y / g.ly);
                    v += a[static_cast<std::size_t>(k - 1) * modes + (l - 1)] * sx * sx * sy * sy;
                }
            psi[static_cast<std::size_t>(j) * (g.nx + 1) + i] = v;
        }
    }
    VectorField u = curl_of_nodes(g, psi);
    normalize_amplitude(u, amplitude);
    return u;
}

VectorField eigenmode_velocity(const Grid &g, double amplitude) {
    std::vector<double> psi(static_cast<std::size_t>(g.nx + 1) * (g.ny + 1), 0.0);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const double sx = std::sin(M_PI * g.xf(i) / g.lx);
            const double sy = std::sin(M_PI * g.yf(j) / g.ly);
            psi[static_cast<std::size_t>(j) * (g.nx + 1) + i] = sx * sx * sy * sy;
        }
    VectorField u = curl_of_nodes(g, psi);
    normalize_amplitude(u, amplitude);
    return u;
}

ScalarField build_theta0(const Theta0Spec &spec, const Problem &problem, std::uint64_t seed) {
    const Grid &g = problem.grid;
    if (!spec.file.empty())
        return checkpoint_read(spec.file, &g).theta;

    ScalarField th(g);
    std::mt19937_64 rng(seed ^ kTheta0Tag);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (const Theta0Spec::Entry &e : spec.entries) {
        switch (e.term) {
        case Theta0Spec::Term::constant:
        case Theta0Spec::Term::linear_x:
        case Theta0Spec::Term::linear_y:
        case Theta0Spec::Term::harmonic_xy: {
            FuncSpec::Kind kind = FuncSpec::Kind::constant;
            if (e.term == Theta0Spec::Term::linear_x)
                kind = FuncSpec::Kind::linear_x;
            else if (e.term == Theta0Spec::Term::linear_y)
                kind = FuncSpec::Kind::linear_y;
            else if (e.term == Theta0Spec::Term::harmonic_xy)
                kind = FuncSpec::Kind::harmonic_xy;
            FuncSpec fs({{kind, e.coeff}});
            th += sample_at_centers(g, fs);
            break;
        }
        case Theta0Spec::Term::bump:
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double sx = std::sin(M_PI * g.xc(i) / g.lx);
                    const double sy = std::sin(M_PI * g.yc(j) / g.ly);
                    th(i, j) += e.coeff * sx * sx * sy * sy;
                }
            break;
        case Theta0Spec::Term::random:
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    th(i, j) += e.coeff * dist(rng);
            break;
        case Theta0Spec::Term::equilibrium: {
            EquilibriumSolution eq = aligned_equilibrium(problem);
            ScalarField scaled = eq.thetas;
            scaled *= e.coeff;
            th += scaled;
            break;
        }
        }
    }
    return th;
}

VectorField build_u0(const U0Spec &spec, const Problem &problem, std::uint64_t seed) {
    const Grid &g = problem.grid;
    switch (spec.kind) {
    case U0Spec::Kind::zero: return VectorField(g);
    case U0Spec::Kind::random_divfree: return random_divfree_velocity(g, spec.amplitude, seed);
    case U0Spec::Kind::eigenmode: return eigenmode_velocity(g, spec.amplitude);
    case U0Spec::Kind::file: return checkpoint_read(spec.file, &g).u;
    }
    return VectorField(g);
}

SimState build_initial_state(const RunConfig &config, const Problem &problem) {
    SimState s(problem.grid);
    s.theta = build_theta0(config.theta0, problem, config.params.seed);
    s.u = build_u0(config.u0, problem, config.params.seed);
    return s;
}

} // namespace obrb

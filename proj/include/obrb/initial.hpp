#pragma once

#include "obrb/config.hpp"
#include "obrb/problem.hpp"
#include "obrb/state.hpp"

namespace obrb {

/// Seeded random divergence-free velocity: the discrete curl of a random
/// smooth streamfunction built from sin^2 modes, which vanishes to second
/// order at the walls. Exactly divergence-free and no-penetration by
/// construction; scaled so max |u| = amplitude.
VectorField random_divfree_velocity(const Grid &g, double amplitude, std::uint64_t seed);

/// Single-cell swirl from the streamfunction sin^2(pi x/lx) sin^2(pi y/ly),
/// scaled so max |u| = amplitude.
VectorField eigenmode_velocity(const Grid &g, double amplitude);

ScalarField build_theta0(const Theta0Spec &spec, const Problem &problem, std::uint64_t seed);
VectorField build_u0(const U0Spec &spec, const Problem &problem, std::uint64_t seed);

SimState build_initial_state(const RunConfig &config, const Problem &problem);

} // namespace obrb

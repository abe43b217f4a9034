#pragma once

#include <cstdint>

#include "obrb/field.hpp"

namespace obrb {

/// Evolving state of a simulation: time, velocity, temperature deviation.
struct SimState {
    double t = 0.0;
    std::int64_t step = 0;
    VectorField u;
    ScalarField theta;

    SimState() = default;
    explicit SimState(const Grid &g) : u(g), theta(g) {}
};

} // namespace obrb

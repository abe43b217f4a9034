#pragma once

#include "obrb/field.hpp"
#include "obrb/grid.hpp"
#include "obrb/nonlocal.hpp"
#include "obrb/params.hpp"

namespace obrb {

/// Immutable per-run data: grid, boundary closure, potential, parameters.
struct Problem {
    Grid grid;
    BoundaryClosure closure;
    ScalarField g_potential;
    Params params;
};

/// Assembles closure and potential from the descriptors in params.
Problem make_problem(const Grid &g, const Params &params);

} // namespace obrb

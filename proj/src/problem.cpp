#include "obrb/problem.hpp"

namespace obrb {

Problem make_problem(const Grid &g, const Params &params) {
    Problem p;
    p.grid = g;
    p.params = params;
    p.closure = make_closure(g, params.thetaB_spec, params.alpha);
    p.g_potential = make_potential(g, params.g_spec);
    return p;
}

} // namespace obrb

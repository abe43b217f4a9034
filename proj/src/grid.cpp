#include "obrb/grid.hpp"

#include <string>

#include "obrb/errors.hpp"

namespace obrb {

Grid build_grid(int nx, int ny, double lx, double ly) {
    if (nx < 4 || ny < 4)
        throw invalid_argument_error("build_grid: cell counts must be >= 4, got nx=" +
                                     std::to_string(nx) + " ny=" + std::to_string(ny));
    if (!(lx > 0.0) || !(ly > 0.0))
        throw invalid_argument_error("build_grid: domain lengths must be positive, got lx=" +
                                     std::to_string(lx) + " ly=" + std::to_string(ly));
    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.hx = lx / nx;
    g.hy = ly / ny;
    g.area = lx * ly;
    return g;
}

} // namespace obrb

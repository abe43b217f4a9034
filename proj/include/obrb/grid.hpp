#pragma once

#include <cstddef>

namespace obrb {

/// Uniform rectangular grid on (0,lx) x (0,ly) with a MAC staggered layout:
/// scalars live at cell centers, velocity components at cell faces.
struct Grid {
    int nx = 0, ny = 0;    // cell counts
    double lx = 0, ly = 0; // domain lengths
    double hx = 0, hy = 0; // spacings, lx/nx and ly/ny
    double area = 0;       // |domain| = lx*ly

    // cell-center coordinates
    double xc(int i) const { return (i + 0.5) * hx; }
    double yc(int j) const { return (j + 0.5) * hy; }
    // face coordinates (x-face i sits at x = i*hx, y-face j at y = j*hy)
    double xf(int i) const { return i * hx; }
    double yf(int j) const { return j * hy; }

    std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
    double cell_area() const { return hx * hy; }

    bool same_as(const Grid &o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
};

/// Builds a grid, rejecting counts below 4 or non-positive lengths.
Grid build_grid(int nx, int ny, double lx, double ly);

} // namespace obrb

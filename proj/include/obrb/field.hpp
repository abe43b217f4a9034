#pragma once

#include <array>
#include <vector>

#include "obrb/grid.hpp"

namespace obrb {

enum class Edge { west = 0, east = 1, south = 2, north = 3 };

/// Boundary data sampled at the midpoints of boundary cell faces:
/// west/east carry ny values (index j), south/north carry nx values (index i).
struct BoundaryTrace {
    std::vector<double> west, east, south, north;

    static BoundaryTrace zeros(const Grid &g);
    static BoundaryTrace constant(const Grid &g, double value);

    double min_value() const;
    double max_value() const;
    double max_abs() const;

    BoundaryTrace &operator+=(double s);
    BoundaryTrace &operator*=(double s);
};

/// Cell-centered scalar field with a one-layer ghost ring per edge.
/// Interior values are stored row-major (index j*nx + i); ghost layers are
/// derived data refreshed from a boundary closure before stencil sweeps.
class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const Grid &g, double fill = 0.0);

    const Grid &grid() const { return grid_; }

    double &operator()(int i, int j) { return v_[static_cast<std::size_t>(j) * grid_.nx + i]; }
    double operator()(int i, int j) const { return v_[static_cast<std::size_t>(j) * grid_.nx + i]; }

    std::vector<double> &data() { return v_; }
    const std::vector<double> &data() const { return v_; }

    std::vector<double> &ghost(Edge e) { return ghost_[static_cast<int>(e)]; }
    const std::vector<double> &ghost(Edge e) const { return ghost_[static_cast<int>(e)]; }

    /// Ghost = 2*b - interior, so the linear reconstruction hits b at the wall.
    void set_dirichlet_ghosts(const BoundaryTrace &b);
    /// Ghost mirrors the adjacent interior value (zero normal gradient).
    void set_neumann_ghosts();

    double min_value() const;
    double max_value() const;
    double max_abs() const;
    bool all_finite() const;

    ScalarField &operator+=(const ScalarField &o);
    ScalarField &operator-=(const ScalarField &o);
    ScalarField &operator+=(double s);
    ScalarField &operator*=(double s);

  private:
    Grid grid_;
    std::vector<double> v_;
    std::array<std::vector<double>, 4> ghost_;
};

/// MAC velocity field: ux on x-faces ((nx+1) x ny), uy on y-faces (nx x (ny+1)).
/// Wall-normal components (ux at i=0,nx; uy at j=0,ny) are kept exactly zero.
class VectorField {
  public:
    VectorField() = default;
    explicit VectorField(const Grid &g);

    const Grid &grid() const { return grid_; }

    double &ux(int i, int j) { return ux_[static_cast<std::size_t>(j) * (grid_.nx + 1) + i]; }
    double ux(int i, int j) const { return ux_[static_cast<std::size_t>(j) * (grid_.nx + 1) + i]; }
    double &uy(int i, int j) { return uy_[static_cast<std::size_t>(j) * grid_.nx + i]; }
    double uy(int i, int j) const { return uy_[static_cast<std::size_t>(j) * grid_.nx + i]; }

    std::vector<double> &ux_data() { return ux_; }
    const std::vector<double> &ux_data() const { return ux_; }
    std::vector<double> &uy_data() { return uy_; }
    const std::vector<double> &uy_data() const { return uy_; }

    /// Zeroes the wall-normal entries (no-penetration part of no-slip).
    void clamp_normal_boundary();

    double max_abs_ux() const;
    double max_abs_uy() const;
    bool all_finite() const;
    bool normal_boundary_zero() const;

    VectorField &operator+=(const VectorField &o);
    VectorField &operator-=(const VectorField &o);
    VectorField &operator*=(double s);

  private:
    Grid grid_;
    std::vector<double> ux_, uy_;
};

// Discrete quadrature: cell inner product hx*hy*sum, L2 norms, divergence.

double cell_inner(const ScalarField &a, const ScalarField &b);
double cell_l2(const ScalarField &a);

/// MAC L2 norm over interior faces (wall-normal faces carry zero).
double vec_l2(const VectorField &u);
double vec_inner(const VectorField &a, const VectorField &b);

/// Divergence at cell centers: (ux_E - ux_W)/hx + (uy_N - uy_S)/hy.
ScalarField divergence(const VectorField &u);
double max_abs_divergence(const VectorField &u);

} // namespace obrb

#include "obrb/field.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace obrb {

BoundaryTrace BoundaryTrace::zeros(const Grid &g) {
    BoundaryTrace b;
    b.west.assign(g.ny, 0.0);
    b.east.assign(g.ny, 0.0);
    b.south.assign(g.nx, 0.0);
    b.north.assign(g.nx, 0.0);
    return b;
}

BoundaryTrace BoundaryTrace::constant(const Grid &g, double value) {
    BoundaryTrace b = zeros(g);
    std::fill(b.west.begin(), b.west.end(), value);
    std::fill(b.east.begin(), b.east.end(), value);
    std::fill(b.south.begin(), b.south.end(), value);
    std::fill(b.north.begin(), b.north.end(), value);
    return b;
}

namespace {
template <class F> double edge_reduce(const BoundaryTrace &b, F f, double init) {
    double r = init;
    for (const auto *edge : {&b.west, &b.east, &b.south, &b.north})
        for (double v : *edge)
            r = f(r, v);
    return r;
}
} // namespace

double BoundaryTrace::min_value() const {
    return edge_reduce(*this, [](double a, double b) { return std::min(a, b); },
                       std::numeric_limits<double>::infinity());
}

double BoundaryTrace::max_value() const {
    return edge_reduce(*this, [](double a, double b) { return std::max(a, b); },
                       -std::numeric_limits<double>::infinity());
}

double BoundaryTrace::max_abs() const {
    return edge_reduce(*this, [](double a, double b) { return std::max(a, std::fabs(b)); }, 0.0);
}

BoundaryTrace &BoundaryTrace::operator+=(double s) {
    for (auto *edge : {&west, &east, &south, &north})
        for (double &v : *edge)
            v += s;
    return *this;
}

BoundaryTrace &BoundaryTrace::operator*=(double s) {
    for (auto *edge : {&west, &east, &south, &north})
        for (double &v : *edge)
            v *= s;
    return *this;
}

ScalarField::ScalarField(const Grid &g, double fill) : grid_(g) {
    v_.assign(g.cells(), fill);
    ghost_[0].assign(g.ny, fill); // west
    ghost_[1].assign(g.ny, fill); // east
    ghost_[2].assign(g.nx, fill); // south
    ghost_[3].assign(g.nx, fill); // north
}

void ScalarField::set_dirichlet_ghosts(const BoundaryTrace &b) {
    const int nx = grid_.nx, ny = grid_.ny;
    for (int j = 0; j < ny; ++j) {
        ghost_[0][j] = 2.0 * b.west[j] - (*this)(0, j);
        ghost_[1][j] = 2.0 * b.east[j] - (*this)(nx - 1, j);
    }
    for (int i = 0; i < nx; ++i) {
        ghost_[2][i] = 2.0 * b.south[i] - (*this)(i, 0);
        ghost_[3][i] = 2.0 * b.north[i] - (*this)(i, ny - 1);
    }
}

void ScalarField::set_neumann_ghosts() {
    const int nx = grid_.nx, ny = grid_.ny;
    for (int j = 0; j < ny; ++j) {
        ghost_[0][j] = (*this)(0, j);
        ghost_[1][j] = (*this)(nx - 1, j);
    }
    for (int i = 0; i < nx; ++i) {
        ghost_[2][i] = (*this)(i, 0);
        ghost_[3][i] = (*this)(i, ny - 1);
    }
}

double ScalarField::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : v_)
        m = std::min(m, v);
    return m;
}

double ScalarField::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : v_)
        m = std::max(m, v);
    return m;
}

double ScalarField::max_abs() const {
    double m = 0;
    for (double v : v_)
        m = std::max(m, std::fabs(v));
    return m;
}

bool ScalarField::all_finite() const {
    for (double v : v_)
        if (!std::isfinite(v))
            return false;
    return true;
}

ScalarField &ScalarField::operator+=(const ScalarField &o) {
    assert(grid_.same_as(o.grid_));
    for (std::size_t k = 0; k < v_.size(); ++k)
        v_[k] += o.v_[k];
    return *this;
}

ScalarField &ScalarField::operator-=(const ScalarField &o) {
    assert(grid_.same_as(o.grid_));
    for (std::size_t k = 0; k < v_.size(); ++k)
        v_[k] -= o.v_[k];
    return *this;
}

ScalarField &ScalarField::operator+=(double s) {
    for (double &v : v_)
        v += s;
    return *this;
}

ScalarField &ScalarField::operator*=(double s) {
    for (double &v : v_)
        v *= s;
    return *this;
}

VectorField::VectorField(const Grid &g) : grid_(g) {
    ux_.assign(static_cast<std::size_t>(g.nx + 1) * g.ny, 0.0);
    uy_.assign(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0.0);
}

void VectorField::clamp_normal_boundary() {
    const int nx = grid_.nx, ny = grid_.ny;
    for (int j = 0; j < ny; ++j) {
        ux(0, j) = 0.0;
        ux(nx, j) = 0.0;
    }
    for (int i = 0; i < nx; ++i) {
        uy(i, 0) = 0.0;
        uy(i, ny) = 0.0;
    }
}

double VectorField::max_abs_ux() const {
    double m = 0;
    for (double v : ux_)
        m = std::max(m, std::fabs(v));
    return m;
}

double VectorField::max_abs_uy() const {
    double m = 0;
    for (double v : uy_)
        m = std::max(m, std::fabs(v));
    return m;
}

bool VectorField::all_finite() const {
    for (double v : ux_)
        if (!std::isfinite(v))
            return false;
    for (double v : uy_)
        if (!std::isfinite(v))
            return false;
    return true;
}

bool VectorField::normal_boundary_zero() const {
    const int nx = grid_.nx, ny = grid_.ny;
    for (int j = 0; j < ny; ++j)
        if (ux(0, j) != 0.0 || ux(nx, j) != 0.0)
            return false;
    for (int i = 0; i < nx; ++i)
        if (uy(i, 0) != 0.0 || uy(i, ny) != 0.0)
            return false;
    return true;
}

VectorField &VectorField::operator+=(const VectorField &o) {
    assert(grid_.same_as(o.grid_));
    for (std::size_t k = 0; k < ux_.size(); ++k)
        ux_[k] += o.ux_[k];
    for (std::size_t k = 0; k < uy_.size(); ++k)
        uy_[k] += o.uy_[k];
    return *this;
}

VectorField &VectorField::operator-=(const VectorField &o) {
    assert(grid_.same_as(o.grid_));
    for (std::size_t k = 0; k < ux_.size(); ++k)
        ux_[k] -= o.ux_[k];
    for (std::size_t k = 0; k < uy_.size(); ++k)
        uy_[k] -= o.uy_[k];
    return *this;
}

VectorField &VectorField::operator*=(double s) {
    for (double &v : ux_)
        v *= s;
    for (double &v : uy_)
        v *= s;
    return *this;
}

double cell_inner(const ScalarField &a, const ScalarField &b) {
    assert(a.grid().same_as(b.grid()));
    const auto &va = a.data();
    const auto &vb = b.data();
    double s = 0;
    for (std::size_t k = 0; k < va.size(); ++k)
        s += va[k] * vb[k];
    return s * a.grid().cell_area();
}

double cell_l2(const ScalarField &a) { return std::sqrt(cell_inner(a, a)); }

double vec_inner(const VectorField &a, const VectorField &b) {
    assert(a.grid().same_as(b.grid()));
    const auto &ga = a.grid();
    double s = 0;
    for (int j = 0; j < ga.ny; ++j)
        for (int i = 1; i < ga.nx; ++i)
            s += a.ux(i, j) * b.ux(i, j);
    for (int j = 1; j < ga.ny; ++j)
        for (int i = 0; i < ga.nx; ++i)
            s += a.uy(i, j) * b.uy(i, j);
    return s * ga.cell_area();
}

double vec_l2(const VectorField &u) { return std::sqrt(vec_inner(u, u)); }

ScalarField divergence(const VectorField &u) {
    const Grid &g = u.grid();
    ScalarField d(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            d(i, j) = (u.ux(i + 1, j) - u.ux(i, j)) / g.hx + (u.uy(i, j + 1) - u.uy(i, j)) / g.hy;
    return d;
}

double max_abs_divergence(const VectorField &u) { return divergence(u).max_abs(); }

} // namespace obrb

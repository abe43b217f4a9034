#pragma once

#include <string>
#include <vector>

#include "obrb/field.hpp"
#include "obrb/grid.hpp"

namespace obrb {

/// Closed-form field descriptor: a sum of built-in primitives, each harmonic
/// on rectangles so harmonicity of sums holds analytically.
///
///   constant(c)       c
///   linear_x(c)       c*(x - lx/2)
///   linear_y(c)       c*(y - ly/2)
///   harmonic_xy(c)    c*(x*y - lx*ly/4)
///
/// The linear and harmonic_xy primitives have exact zero mean on the domain,
/// so a descriptor without a constant term is an admissible potential.
class FuncSpec {
  public:
    enum class Kind { constant, linear_x, linear_y, harmonic_xy };

    struct Term {
        Kind kind;
        double coeff;
    };

    FuncSpec() = default;
    explicit FuncSpec(std::vector<Term> terms) : terms_(std::move(terms)) {}

    /// Parses "name(arg) + name(arg) + ..."; throws invalid_argument_error on
    /// unknown names or malformed syntax.
    static FuncSpec parse(const std::string &text);

    double eval(double x, double y, const Grid &g) const;
    /// Analytic gradient (used only as a cross-check; solvers difference fields).
    void grad(double x, double y, const Grid &g, double &gx, double &gy) const;

    double mean_exact() const { return constant_part(); }
    double constant_part() const;
    bool zero_mean() const;

    const std::vector<Term> &terms() const { return terms_; }
    std::string to_string() const;

  private:
    std::vector<Term> terms_;
};

/// Samples a descriptor at cell centers.
ScalarField sample_at_centers(const Grid &g, const FuncSpec &spec);

/// Samples a descriptor at boundary-face midpoints.
BoundaryTrace sample_at_boundary(const Grid &g, const FuncSpec &spec);

/// Builds the gravitational potential from a descriptor: every term must be
/// zero-mean (no constant part), which also guarantees discrete zero mean and
/// a discretely harmonic interior. Throws on unknown names / constant parts.
ScalarField make_potential(const Grid &g, const FuncSpec &spec);
ScalarField make_potential(const Grid &g, const std::string &spec_text);

} // namespace obrb

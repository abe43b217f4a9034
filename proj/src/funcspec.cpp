#include "obrb/funcspec.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "obrb/errors.hpp"

namespace obrb {

namespace {

std::string trim(const std::string &s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

} // namespace

// Shared by FuncSpec::parse and the initial-condition parsers.
bool parse_spec_term(const std::string &term, std::string &name, double &arg, bool &has_arg) {
    std::string t = trim(term);
    std::size_t open = t.find('(');
    if (open == std::string::npos) {
        name = t;
        has_arg = false;
        arg = 0.0;
        return !name.empty();
    }
    if (t.back() != ')')
        return false;
    name = trim(t.substr(0, open));
    std::string inner = trim(t.substr(open + 1, t.size() - open - 2));
    if (name.empty() || inner.empty())
        return false;
    try {
        std::size_t used = 0;
        arg = std::stod(inner, &used);
        if (used != inner.size())
            return false;
    } catch (const std::exception &) {
        return false;
    }
    has_arg = true;
    return true;
}

std::vector<std::string> split_spec_terms(const std::string &text) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(')
            ++depth;
        if (c == ')')
            --depth;
        if (c == '+' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

FuncSpec FuncSpec::parse(const std::string &text) {
    std::vector<Term> terms;
    for (const std::string &piece : split_spec_terms(text)) {
        std::string name;
        double arg = 0;
        bool has_arg = false;
        if (!parse_spec_term(piece, name, arg, has_arg) || !has_arg)
            throw invalid_argument_error("bad field descriptor term: '" + trim(piece) + "'");
        Kind kind;
        if (name == "constant")
            kind = Kind::constant;
        else if (name == "linear_x")
            kind = Kind::linear_x;
        else if (name == "linear_y")
            kind = Kind::linear_y;
        else if (name == "harmonic_xy")
            kind = Kind::harmonic_xy;
        else
            throw invalid_argument_error("unknown field descriptor '" + name + "'");
        terms.push_back({kind, arg});
    }
    return FuncSpec(std::move(terms));
}

double FuncSpec::eval(double x, double y, const Grid &g) const {
    double v = 0;
    for (const Term &t : terms_) {
        switch (t.kind) {
        case Kind::constant: v += t.coeff; break;
        case Kind::linear_x: v += t.coeff * (x - 0.5 * g.lx); break;
        case Kind::linear_y: v += t.coeff * (y - 0.5 * g.ly); break;
        case Kind::harmonic_xy: v += t.coeff * (x * y - 0.25 * g.lx * g.ly); break;
        }
    }
    return v;
}

void FuncSpec::grad(double x, double y, const Grid &, double &gx, double &gy) const {
    gx = 0;
    gy = 0;
    for (const Term &t : terms_) {
        switch (t.kind) {
        case Kind::constant: break;
        case Kind::linear_x: gx += t.coeff; break;
        case Kind::linear_y: gy += t.coeff; break;
        case Kind::harmonic_xy:
            gx += t.coeff * y;
            gy += t.coeff * x;
            break;
        }
    }
}

double FuncSpec::constant_part() const {
    double c = 0;
    for (const Term &t : terms_)
        if (t.kind == Kind::constant)
            c += t.coeff;
    return c;
}

bool FuncSpec::zero_mean() const { return constant_part() == 0.0; }

std::string FuncSpec::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const Term &t : terms_) {
        if (!first)
            os << " + ";
        first = false;
        switch (t.kind) {
        case Kind::constant: os << "constant(" << t.coeff << ")"; break;
        case Kind::linear_x: os << "linear_x(" << t.coeff << ")"; break;
        case Kind::linear_y: os << "linear_y(" << t.coeff << ")"; break;
        case Kind::harmonic_xy: os << "harmonic_xy(" << t.coeff << ")"; break;
        }
    }
    if (first)
        os << "constant(0)";
    return os.str();
}

ScalarField sample_at_centers(const Grid &g, const FuncSpec &spec) {
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f(i, j) = spec.eval(g.xc(i), g.yc(j), g);
    return f;
}

BoundaryTrace sample_at_boundary(const Grid &g, const FuncSpec &spec) {
    BoundaryTrace b = BoundaryTrace::zeros(g);
    for (int j = 0; j < g.ny; ++j) {
        b.west[j] = spec.eval(0.0, g.yc(j), g);
        b.east[j] = spec.eval(g.lx, g.yc(j), g);
    }
    for (int i = 0; i < g.nx; ++i) {
        b.south[i] = spec.eval(g.xc(i), 0.0, g);
        b.north[i] = spec.eval(g.xc(i), g.ly, g);
    }
    return b;
}

ScalarField make_potential(const Grid &g, const FuncSpec &spec) {
    if (!spec.zero_mean())
        throw invalid_argument_error(
            "potential descriptor must have zero mean; drop the constant(" +
            std::to_string(spec.constant_part()) + ") part");
    return sample_at_centers(g, spec);
}

ScalarField make_potential(const Grid &g, const std::string &spec_text) {
    return make_potential(g, FuncSpec::parse(spec_text));
}

} // namespace obrb

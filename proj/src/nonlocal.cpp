#include "obrb/nonlocal.hpp"

#include <cmath>

#include "obrb/errors.hpp"

namespace obrb {

double mean(const ScalarField &f) {
    double s = 0;
    for (double v : f.data())
        s += v;
    return s / static_cast<double>(f.data().size());
}

ScalarField lambda_apply(const ScalarField &z, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw invalid_argument_error("lambda_apply: alpha must lie in [0,1)");
    ScalarField out = z;
    const double shift = alpha / (1.0 + alpha) * mean(z);
    out += -shift;
    return out;
}

ScalarField lambda_inverse(const ScalarField &w, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw invalid_argument_error("lambda_inverse: alpha must lie in [0,1)");
    ScalarField out = w;
    out += alpha * mean(w);
    return out;
}

double lambda_energy(const ScalarField &z, double alpha) {
    // <Lambda z, z> = ||z||^2 - alpha/(1+alpha) * |domain| * mean(z)^2
    const double m = mean(z);
    const double n2 = cell_inner(z, z);
    return 0.5 * (n2 - alpha / (1.0 + alpha) * z.grid().area * m * m);
}

BoundaryClosure make_closure(const Grid &g, const FuncSpec &thetaB_spec, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw invalid_argument_error("make_closure: alpha must lie in [0,1)");
    BoundaryClosure c;
    c.alpha = alpha;
    c.spec = thetaB_spec;
    // Built-in descriptors are harmonic, so the closed form is its own
    // harmonic extension and the discrete interior residual vanishes.
    c.thetaB = sample_at_centers(g, thetaB_spec);
    c.trace = sample_at_boundary(g, thetaB_spec);
    c.thetaB.set_dirichlet_ghosts(c.trace);
    return c;
}

ScalarField to_calT(const ScalarField &theta, const BoundaryClosure &closure) {
    ScalarField out = theta;
    const double m = mean(theta);
    out += closure.alpha * m;
    out -= closure.thetaB;
    // calT has zero trace whenever theta satisfies the boundary condition
    out.set_dirichlet_ghosts(BoundaryTrace::zeros(theta.grid()));
    return out;
}

ScalarField from_calT(const ScalarField &calT, const BoundaryClosure &closure) {
    ScalarField sum = calT;
    sum += closure.thetaB;
    const double shift = closure.alpha / (1.0 + closure.alpha) * mean(sum);
    sum += -shift;
    BoundaryTrace trace = closure.trace;
    trace += -shift; // trace(theta) = thetaB - alpha*mean(theta)
    sum.set_dirichlet_ghosts(trace);
    return sum;
}

BoundaryTrace boundary_value(const ScalarField &theta, const BoundaryClosure &closure) {
    BoundaryTrace b = closure.trace;
    b += -closure.alpha * mean(theta);
    return b;
}

} // namespace obrb

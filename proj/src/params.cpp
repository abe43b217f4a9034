#include "obrb/params.hpp"

#include <string>

#include "obrb/errors.hpp"

namespace obrb {

void Params::validate() const {
    if (!(mu > 0.0))
        throw invalid_argument_error("mu must be positive, got " + std::to_string(mu));
    if (!(kappa > 0.0))
        throw invalid_argument_error("kappa must be positive, got " + std::to_string(kappa));
    if (!(alpha > 0.0 && alpha < 1.0))
        throw invalid_argument_error("alpha = " + std::to_string(alpha) +
                                     " violates hypothesis (UU): 0 < alpha < 1 required");
    if (!(dt_cfl > 0.0 && dt_cfl <= 1.0))
        throw invalid_argument_error("dt_cfl must lie in (0,1], got " + std::to_string(dt_cfl));
    if (!(dt_max > 0.0))
        throw invalid_argument_error("dt_max must be positive");
    if (!(lin_tol > 0.0))
        throw invalid_argument_error("lin_tol must be positive");
}

double alpha_from_gamma(double gamma) {
    if (!(gamma > 1.0 && gamma < 2.0))
        throw invalid_argument_error(
            "gamma = " + std::to_string(gamma) +
            " out of range: gamma in (1,2) is required so that alpha = gamma - 1 "
            "satisfies hypothesis (UU): 0 < alpha < 1");
    return gamma - 1.0;
}

} // namespace obrb

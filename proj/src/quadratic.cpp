#include "introscore/quadratic.hpp"

#include <cmath>

#include "introscore/errors.hpp"

namespace introscore {

QuadraticCoeffs quad_coeffs(std::span<const FactorObservation> factors,
                            const Prior& prior) {
  check_prior(prior);
  check_factors(factors);

  QuadraticCoeffs coeffs;
  const auto accumulate = [&coeffs](double slope, double intercept,
                                    double sigma, double value) {
    const double inv_var = 1.0 / (sigma * sigma);
    const double shifted = value - intercept;
    coeffs.a1 += slope * slope * inv_var / 2.0;
    coeffs.a2 -= slope * shifted * inv_var;
    coeffs.a3 += shifted * shifted * inv_var / 2.0;
  };

  for (const auto& factor : factors) {
    accumulate(factor.params.slope, factor.params.intercept,
               factor.params.sigma, factor.value);
  }
  if (prior.kind == PriorKind::kNormal) {
    // N(mu, sigma^2) on I is the likelihood of pseudo-observation mu with
    // slope 1 and intercept 0.
    accumulate(1.0, 0.0, prior.sigma, prior.mu);
    coeffs.prior_included = true;
  }
  return coeffs;
}

MapEstimate map_closed_form(const QuadraticCoeffs& coeffs) {
  if (!(coeffs.a1 > 0.0)) {
    throw NumericError("flat posterior, MAP undefined: quadratic coefficient "
                       "a1 is zero");
  }
  const double unconstrained = -coeffs.a2 / (2.0 * coeffs.a1);
  if (unconstrained < 0.0) return {0.0, true};
  if (unconstrained > 1.0) return {1.0, true};
  return {unconstrained, false};
}

}  // namespace introscore

#pragma once

#include <span>

#include "introscore/bayes.hpp"

namespace introscore {

/// Coefficients of the quadratic form Q(I) = a1*I^2 + a2*I + a3 such that
/// the posterior is proportional to exp(-Q(I)) on [0,1]. A normal prior is
/// folded in as a pseudo-factor (slope 1, intercept 0, observation mu); a
/// uniform prior contributes nothing.
struct QuadraticCoeffs {
  double a1 = 0.0;  // sum_k slope_k^2 / (2 sigma_k^2), >= 0
  double a2 = 0.0;  // -sum_k slope_k (F_k - intercept_k) / sigma_k^2
  double a3 = 0.0;  // sum_k (F_k - intercept_k)^2 / (2 sigma_k^2)
  bool prior_included = false;
};

QuadraticCoeffs quad_coeffs(std::span<const FactorObservation> factors,
                            const Prior& prior);

/// Closed-form MAP: the unconstrained minimizer of Q is u = -a2 / (2 a1),
/// clamped to [0,1]; on_boundary is true iff u fell outside. Throws
/// NumericError when a1 = 0 (flat quadratic, MAP undefined).
MapEstimate map_closed_form(const QuadraticCoeffs& coeffs);

}  // namespace introscore

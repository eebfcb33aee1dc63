#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "introscore/profile.hpp"

namespace introscore {

enum class PriorKind { kUniform, kNormal };

/// Prior over the introversion degree. Support is always [0,1]; the normal
/// kind is truncated to it.
struct Prior {
  PriorKind kind = PriorKind::kUniform;
  double mu = 0.5;     // normal only
  double sigma = 0.0;  // normal only, > 0

  static Prior uniform() { return {}; }
  static Prior normal(double mu, double sigma) {
    return {PriorKind::kNormal, mu, sigma};
  }
};

/// Gaussian likelihood of one observed factor: F_k ~ N(slope * I + intercept,
/// sigma^2).
struct FactorParams {
  int factor_id = 0;  // 1..12, matching the feature order
  double slope = 0.0;
  double intercept = 0.0;
  double sigma = 0.0;  // > 0
};

struct FactorObservation {
  FactorParams params;
  double value = 0.0;  // observed F_k, on the normalized feature scale
};

void check_prior(const Prior& prior);
void check_factor_params(const FactorParams& params);
void check_factors(std::span<const FactorObservation> factors);

struct CredibleInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Normalized posterior density on a uniform grid over [0,1], with summaries.
struct Posterior {
  std::vector<double> grid;
  std::vector<double> density;
  double map = 0.0;
  bool map_on_boundary = false;
  double mean = 0.0;
  double variance = 0.0;
  CredibleInterval credible_interval_95;
};

struct MapEstimate {
  double value = 0.0;
  bool on_boundary = false;
};

struct McSummary {
  double mean = 0.0;
  double variance = 0.0;
  double map_estimate = 0.0;
  double se_mean = 0.0;
  double ess = 0.0;
  std::size_t n_samples = 0;
  bool degenerate = false;  // effective sample size below 10
};

/// Unnormalized log posterior:
///   log P(I) + sum_k [ -0.5*log(2*pi*sigma_k^2)
///                      - (F_k - slope_k*I - intercept_k)^2 / (2*sigma_k^2) ]
/// for I in [0,1]; -infinity outside the truncated support.
double log_posterior_unnorm(double introversion,
                            std::span<const FactorObservation> factors,
                            const Prior& prior);

/// Evaluates the posterior on an n-point uniform grid (max-shifted before
/// exponentiation), normalizes by the trapezoid rule, and summarizes: MAP
/// (grid argmax refined by golden-section search), mean, variance, and the
/// 95% equal-tailed credible interval via inverse-CDF interpolation.
Posterior posterior_grid(std::span<const FactorObservation> factors,
                         const Prior& prior, int n_points = 1001);

/// Self-normalized importance sampling with the prior (truncated to [0,1])
/// as proposal. Deterministic given the seed. The MAP estimate is the
/// highest-posterior sample refined by a local golden-section search.
McSummary posterior_mc(std::span<const FactorObservation> factors,
                       const Prior& prior, std::size_t n_samples,
                       std::uint64_t seed);

/// Maximizes the log posterior over [0,1] by golden-section search.
/// on_boundary is true iff the maximizer is 0 or 1 within 1e-9 (the value is
/// then snapped to the boundary exactly). Throws NumericError when the
/// posterior is flat (uniform prior with no slope information).
MapEstimate map_numeric(std::span<const FactorObservation> factors,
                        const Prior& prior);

}  // namespace introscore

#pragma once

#include <array>
#include <vector>

#include "introscore/profile.hpp"
#include "introscore/rng.hpp"

namespace introscore {

/// Weights of the linear introversion score. Magnitudes are nonnegative;
/// the sign of each term is fixed by kFeatures and never stored. noise_sigma
/// is the scale of the random error term, sampled only on request.
struct LinearWeights {
  std::array<double, kFeatureCount> magnitudes{};
  double noise_sigma = 0.0;
  double intercept = 0.0;  // stays 0 unless a fit requested one
};

/// Throws ValidationError if any magnitude is negative or non-finite, or
/// noise_sigma is negative.
void check_weights(const LinearWeights& weights);

/// I = sum_i sign_i * w_i * x_i (+ intercept), summed in fixed index order.
/// When noise_sigma > 0 and a random source is supplied, one zero-mean
/// normal draw with that standard deviation is added; otherwise the error
/// term is 0. The result is intentionally not clamped to [0,1].
double score(const FeatureVector& features, const LinearWeights& weights,
             Rng* noise = nullptr);

struct PartialEffects {
  std::array<double, kFeatureCount> contributions{};  // sign_i * w_i * x_i
  double intercept = 0.0;
  double total = 0.0;  // equals the deterministic score
};

/// Per-term signed contributions, for weight-interpretation reports.
PartialEffects partial_effects(const FeatureVector& features,
                               const LinearWeights& weights);

struct FitDiagnostics {
  double r_squared = 0.0;
  double residual_sigma = 0.0;  // scale estimate for the error term
  std::vector<int> sign_violations;  // 1-based ids whose fitted sign contradicts the hypothesis
  bool condition_warning = false;
  std::array<double, kFeatureCount> effective{};  // signed fitted coefficients
};

struct OlsOptions {
  bool include_intercept = false;
  double condition_warning_threshold = 1e8;
};

struct OlsFit {
  LinearWeights weights;
  FitDiagnostics diagnostics;
};

/// Least-squares calibration of the weights. Fits unconstrained effective
/// coefficients, stores their magnitudes, and records every term whose
/// fitted sign contradicts the hypothesized signature instead of clamping.
/// Throws NumericError when underdetermined (n < params + 1) or the design
/// is rank-deficient.
OlsFit fit_ols(const std::vector<FeatureVector>& features,
               const std::vector<double>& labels, const OlsOptions& options = {});

}  // namespace introscore

#include "introscore/linear.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "introscore/errors.hpp"

namespace introscore {

void check_weights(const LinearWeights& weights) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double w = weights.magnitudes[i];
    if (!(std::isfinite(w) && w >= 0.0)) {
      throw ValidationError("weight " + std::string(kFeatures[i].weight_key) +
                            " must be a nonnegative finite magnitude");
    }
  }
  if (!(std::isfinite(weights.noise_sigma) && weights.noise_sigma >= 0.0)) {
    throw ValidationError("noise_sigma must be >= 0 and finite");
  }
  if (!std::isfinite(weights.intercept)) {
    throw ValidationError("intercept must be finite");
  }
}

double score(const FeatureVector& features, const LinearWeights& weights,
             Rng* noise) {
  check_weights(weights);
  double total = weights.intercept;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    total += term_sign(i) * weights.magnitudes[i] * features[i];
  }
  if (weights.noise_sigma > 0.0 && noise != nullptr) {
    total += noise->normal(0.0, weights.noise_sigma);
  }
  return total;
}

PartialEffects partial_effects(const FeatureVector& features,
                               const LinearWeights& weights) {
  check_weights(weights);
  PartialEffects effects;
  effects.intercept = weights.intercept;
  double total = weights.intercept;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    effects.contributions[i] = term_sign(i) * weights.magnitudes[i] * features[i];
    total += effects.contributions[i];
  }
  effects.total = total;
  return effects;
}

OlsFit fit_ols(const std::vector<FeatureVector>& features,
               const std::vector<double>& labels, const OlsOptions& options) {
  const std::size_t n = features.size();
  if (labels.size() != n) {
    throw ValidationError("feature/label count mismatch");
  }
  const std::size_t n_params = kFeatureCount + (options.include_intercept ? 1 : 0);
  if (n < n_params + 1) {
    std::ostringstream msg;
    msg << "underdetermined calibration: " << n << " rows for " << n_params
        << " coefficients (need at least " << (n_params + 1) << ")";
    throw NumericError(msg.str());
  }

  Eigen::MatrixXd design(static_cast<Eigen::Index>(n),
                         static_cast<Eigen::Index>(n_params));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          features[r][c];
    }
    if (options.include_intercept) {
      design(static_cast<Eigen::Index>(r), kFeatureCount) = 1.0;
    }
    y(static_cast<Eigen::Index>(r)) = labels[r];
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& singular = svd.singularValues();
  const double s_max = singular(0);
  const double s_min = singular(singular.size() - 1);
  if (!(s_min > s_max * 1e-12)) {
    throw NumericError("rank-deficient design: a regressor column is (nearly) "
                       "linearly dependent on the others");
  }

  const Eigen::VectorXd coef = svd.solve(y);
  const Eigen::VectorXd residuals = y - design * coef;
  const double ssr = residuals.squaredNorm();
  const double label_mean = y.mean();
  const double sst = (y.array() - label_mean).matrix().squaredNorm();

  OlsFit fit;
  fit.diagnostics.condition_warning =
      s_max / s_min > options.condition_warning_threshold;
  fit.diagnostics.residual_sigma =
      std::sqrt(ssr / static_cast<double>(n - n_params));
  if (sst > 0.0) {
    fit.diagnostics.r_squared = 1.0 - ssr / sst;
  } else {
    fit.diagnostics.r_squared = ssr == 0.0 ? 1.0 : 0.0;
  }

  // Coefficients at rounding-noise scale carry no sign information.
  const double sign_tol = 1e-10 * std::max(1.0, coef.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double c = coef(static_cast<Eigen::Index>(i));
    fit.diagnostics.effective[i] = c;
    fit.weights.magnitudes[i] = std::abs(c);
    if (std::abs(c) > sign_tol &&
        (c > 0.0 ? +1 : -1) != kFeatures[i].sign) {
      fit.diagnostics.sign_violations.push_back(kFeatures[i].id);
    }
  }
  if (options.include_intercept) {
    fit.weights.intercept = coef(kFeatureCount);
  }
  fit.weights.noise_sigma = fit.diagnostics.residual_sigma;
  return fit;
}

}  // namespace introscore

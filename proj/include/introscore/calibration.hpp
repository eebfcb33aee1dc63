#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "introscore/bayes.hpp"
#include "introscore/profile.hpp"

namespace introscore {

struct LabeledRow {
  FeatureVector features;
  double label = 0.0;  // true introversion degree in [0,1]
};

struct LabeledCohort {
  std::vector<LabeledRow> rows;
  std::string provenance;  // "synthetic" or "external"
};

/// The five factors of the reference posterior model: solo share,
/// conference rate, (inverted) job rating, organization type, depth.
inline constexpr std::array<int, 5> kDefaultFactorIds{1, 2, 3, 4, 6};

struct CalibrationOptions {
  // Floor on the residual standard deviation; keeps noise-free fits from
  // producing zero-variance likelihoods.
  double sigma_floor = 1e-6;
};

/// Per-factor simple least squares of the observed feature on the label:
///   slope = cov(F, I) / var(I), intercept = mean(F) - slope * mean(I),
///   sigma = residual standard deviation (n-2 denominator, floored).
/// Throws NumericError on zero label variance or fewer than 3 rows.
std::vector<FactorParams> fit_factor_params(const LabeledCohort& cohort,
                                            std::span<const int> factor_ids,
                                            const CalibrationOptions& options = {});

/// Uniform kind passes through; normal kind is moment-matched (sample mean,
/// n-1 standard deviation). Throws ValidationError on empty labels and
/// NumericError when a normal fit has zero variance.
Prior fit_prior(std::span<const double> labels, PriorKind kind);

}  // namespace introscore

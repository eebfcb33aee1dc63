#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "introscore/bayes.hpp"
#include "introscore/calibration.hpp"
#include "introscore/linear.hpp"

namespace introscore {

/// Recipe for a cohort with known ground truth: labels drawn from the prior,
/// features drawn from the factor likelihoods around them.
struct GenConfig {
  std::size_t n = 0;
  Prior prior;
  std::vector<FactorParams> factor_params;
  std::uint64_t seed = 0;
  bool clamp_features = true;   // keep noisy features inside [0,1]
  double neutral_fill = 0.5;    // value for features no factor models
};

void check_gen_config(const GenConfig& cfg);

/// Draws n labels from cfg.prior (normal prior truncated to [0,1] by
/// rejection), then each listed factor as slope*I + intercept + N(0, sigma).
/// Row i uses substream i of the seed, so any evaluation order produces the
/// same cohort.
LabeledCohort generate_cohort(const GenConfig& cfg);

struct RecoveryReport {
  double rmse = 0.0;
  std::optional<double> pearson_r;  // absent when undefined (n < 2 or zero variance)
  double mean_bias = 0.0;
  std::size_t n = 0;
  std::string estimator_name;
};

/// Scores estimates against the cohort's ground-truth labels.
RecoveryReport recovery_report(const LabeledCohort& cohort,
                               std::span<const double> estimates,
                               std::string estimator_name);

enum class Estimator { kPosteriorMean, kMapClosedForm, kMapNumeric };

const char* estimator_name(Estimator estimator);

/// Runs a posterior estimator on every row, reading each modeled factor's
/// observation from the row's features.
std::vector<double> estimate_cohort(const LabeledCohort& cohort,
                                    std::span<const FactorParams> factor_params,
                                    const Prior& prior, Estimator estimator,
                                    int grid_points = 1001);

/// Deterministic linear score per row.
std::vector<double> estimate_cohort_linear(const LabeledCohort& cohort,
                                           const LinearWeights& weights);

}  // namespace introscore

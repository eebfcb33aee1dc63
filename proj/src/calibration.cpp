#include "introscore/calibration.hpp"

#include <cmath>
#include <sstream>

#include "introscore/errors.hpp"

namespace introscore {

std::vector<FactorParams> fit_factor_params(const LabeledCohort& cohort,
                                            std::span<const int> factor_ids,
                                            const CalibrationOptions& options) {
  const std::size_t n = cohort.rows.size();
  if (n < 3) {
    throw NumericError("factor calibration needs at least 3 labeled rows");
  }
  for (const int id : factor_ids) {
    if (id < 1 || id > static_cast<int>(kFeatureCount)) {
      std::ostringstream msg;
      msg << "factor_id " << id << " outside 1.." << kFeatureCount;
      throw ValidationError(msg.str());
    }
  }

  double label_mean = 0.0;
  for (const auto& row : cohort.rows) label_mean += row.label;
  label_mean /= static_cast<double>(n);
  double label_var = 0.0;
  for (const auto& row : cohort.rows) {
    const double d = row.label - label_mean;
    label_var += d * d;
  }
  if (!(label_var > 0.0)) {
    throw NumericError("labels have zero variance; factor slopes are "
                       "unidentifiable");
  }

  std::vector<FactorParams> result;
  result.reserve(factor_ids.size());
  for (const int id : factor_ids) {
    const std::size_t col = static_cast<std::size_t>(id - 1);
    double feat_mean = 0.0;
    for (const auto& row : cohort.rows) feat_mean += row.features[col];
    feat_mean /= static_cast<double>(n);

    double cov = 0.0;
    for (const auto& row : cohort.rows) {
      cov += (row.label - label_mean) * (row.features[col] - feat_mean);
    }
    const double slope = cov / label_var;
    const double intercept = feat_mean - slope * label_mean;

    double ssr = 0.0;
    for (const auto& row : cohort.rows) {
      const double r = row.features[col] - slope * row.label - intercept;
      ssr += r * r;
    }
    const double sigma = std::sqrt(ssr / static_cast<double>(n - 2));

    FactorParams params;
    params.factor_id = id;
    params.slope = slope;
    params.intercept = intercept;
    params.sigma = std::max(sigma, options.sigma_floor);
    result.push_back(params);
  }
  return result;
}

Prior fit_prior(std::span<const double> labels, PriorKind kind) {
  if (labels.empty()) {
    throw ValidationError("cannot fit a prior to an empty label set");
  }
  if (kind == PriorKind::kUniform) return Prior::uniform();
  if (labels.size() < 2) {
    throw NumericError("normal prior fit needs at least 2 labels");
  }
  double mean = 0.0;
  for (const double v : labels) mean += v;
  mean /= static_cast<double>(labels.size());
  double ss = 0.0;
  for (const double v : labels) {
    const double d = v - mean;
    ss += d * d;
  }
  if (!(ss > 0.0)) {
    throw NumericError("labels have zero variance; normal prior sigma is "
                       "undefined");
  }
  const double sd = std::sqrt(ss / static_cast<double>(labels.size() - 1));
  return Prior::normal(mean, sd);
}

}  // namespace introscore

#include "introscore/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "introscore/errors.hpp"
#include "introscore/quadratic.hpp"
#include "introscore/rng.hpp"

namespace introscore {

void check_gen_config(const GenConfig& cfg) {
  check_prior(cfg.prior);
  std::array<bool, kFeatureCount> seen{};
  for (const auto& params : cfg.factor_params) {
    check_factor_params(params);
    auto& slot = seen[static_cast<std::size_t>(params.factor_id - 1)];
    if (slot) {
      std::ostringstream msg;
      msg << "factor_id " << params.factor_id << " listed twice";
      throw ValidationError(msg.str());
    }
    slot = true;
  }
  if (!(std::isfinite(cfg.neutral_fill) && cfg.neutral_fill >= 0.0 &&
        cfg.neutral_fill <= 1.0)) {
    throw ValidationError("neutral_fill must lie in [0,1]");
  }
}

LabeledCohort generate_cohort(const GenConfig& cfg) {
  check_gen_config(cfg);
  const Rng base(cfg.seed);

  LabeledCohort cohort;
  cohort.provenance = "synthetic";
  cohort.rows.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    Rng rng = base.substream(i);
    LabeledRow& row = cohort.rows[i];

    if (cfg.prior.kind == PriorKind::kUniform) {
      row.label = rng.uniform01();
    } else {
      bool accepted = false;
      for (int attempt = 0; attempt < 100000 && !accepted; ++attempt) {
        const double draw = rng.normal(cfg.prior.mu, cfg.prior.sigma);
        if (draw >= 0.0 && draw <= 1.0) {
          row.label = draw;
          accepted = true;
        }
      }
      if (!accepted) {
        throw NumericError("normal prior places almost no mass on [0,1]; "
                           "rejection sampling failed");
      }
    }

    row.features.values.fill(cfg.neutral_fill);
    for (const auto& params : cfg.factor_params) {
      double value = params.slope * row.label + params.intercept +
                     rng.normal(0.0, params.sigma);
      if (cfg.clamp_features) value = std::clamp(value, 0.0, 1.0);
      row.features.values[static_cast<std::size_t>(params.factor_id - 1)] =
          value;
    }
  }
  return cohort;
}

RecoveryReport recovery_report(const LabeledCohort& cohort,
                               std::span<const double> estimates,
                               std::string estimator_name) {
  const std::size_t n = cohort.rows.size();
  if (n == 0) throw ValidationError("recovery report needs a non-empty cohort");
  if (estimates.size() != n) {
    std::ostringstream msg;
    msg << "estimate count " << estimates.size() << " does not match cohort size "
        << n;
    throw ValidationError(msg.str());
  }

  double sse = 0.0;
  double bias = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double err = estimates[i] - cohort.rows[i].label;
    sse += err * err;
    bias += err;
  }

  RecoveryReport report;
  report.n = n;
  report.estimator_name = std::move(estimator_name);
  report.rmse = std::sqrt(sse / static_cast<double>(n));
  report.mean_bias = bias / static_cast<double>(n);

  if (n >= 2) {
    double mean_est = 0.0;
    double mean_lab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mean_est += estimates[i];
      mean_lab += cohort.rows[i].label;
    }
    mean_est /= static_cast<double>(n);
    mean_lab /= static_cast<double>(n);
    double cov = 0.0;
    double var_est = 0.0;
    double var_lab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double de = estimates[i] - mean_est;
      const double dl = cohort.rows[i].label - mean_lab;
      cov += de * dl;
      var_est += de * de;
      var_lab += dl * dl;
    }
    if (var_est > 0.0 && var_lab > 0.0) {
      report.pearson_r = cov / std::sqrt(var_est * var_lab);
    }
  }
  return report;
}

const char* estimator_name(Estimator estimator) {
  switch (estimator) {
    case Estimator::kPosteriorMean: return "posterior_mean";
    case Estimator::kMapClosedForm: return "map_closed_form";
    case Estimator::kMapNumeric: return "map_numeric";
  }
  throw ValidationError("unknown estimator");
}

std::vector<double> estimate_cohort(const LabeledCohort& cohort,
                                    std::span<const FactorParams> factor_params,
                                    const Prior& prior, Estimator estimator,
                                    int grid_points) {
  std::vector<double> estimates;
  estimates.reserve(cohort.rows.size());
  std::vector<FactorObservation> obs(factor_params.size());
  for (std::size_t k = 0; k < factor_params.size(); ++k) {
    obs[k].params = factor_params[k];
  }
  for (const auto& row : cohort.rows) {
    for (auto& o : obs) {
      o.value =
          row.features.values[static_cast<std::size_t>(o.params.factor_id - 1)];
    }
    switch (estimator) {
      case Estimator::kPosteriorMean:
        estimates.push_back(posterior_grid(obs, prior, grid_points).mean);
        break;
      case Estimator::kMapClosedForm:
        estimates.push_back(map_closed_form(quad_coeffs(obs, prior)).value);
        break;
      case Estimator::kMapNumeric:
        estimates.push_back(map_numeric(obs, prior).value);
        break;
    }
  }
  return estimates;
}

std::vector<double> estimate_cohort_linear(const LabeledCohort& cohort,
                                           const LinearWeights& weights) {
  check_weights(weights);
  std::vector<double> estimates;
  estimates.reserve(cohort.rows.size());
  for (const auto& row : cohort.rows) {
    estimates.push_back(score(row.features, weights));
  }
  return estimates;
}

}  // namespace introscore

#include "introscore/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "introscore/errors.hpp"
#include "introscore/rng.hpp"

namespace introscore {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kBoundarySnap = 1e-9;

// Golden-section maximization of f over [a, b]; returns the midpoint of the
// final bracket. Assumes f is unimodal on the interval.
template <typename F>
double golden_max(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.61803398874989484820;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

double log_likelihood(double introversion,
                      std::span<const FactorObservation> factors) {
  double total = 0.0;
  for (const auto& factor : factors) {
    const auto& p = factor.params;
    const double residual = factor.value - p.slope * introversion - p.intercept;
    total += -0.5 * (kLog2Pi + 2.0 * std::log(p.sigma)) -
             residual * residual / (2.0 * p.sigma * p.sigma);
  }
  return total;
}

bool informative(std::span<const FactorObservation> factors, const Prior& prior) {
  if (prior.kind == PriorKind::kNormal) return true;
  return std::any_of(factors.begin(), factors.end(),
                     [](const FactorObservation& f) { return f.params.slope != 0.0; });
}

MapEstimate snap_boundary(double value) {
  if (value <= kBoundarySnap) return {0.0, true};
  if (value >= 1.0 - kBoundarySnap) return {1.0, true};
  return {value, false};
}

double draw_from_prior(Rng& rng, const Prior& prior) {
  if (prior.kind == PriorKind::kUniform) return rng.uniform01();
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double draw = rng.normal(prior.mu, prior.sigma);
    if (draw >= 0.0 && draw <= 1.0) return draw;
  }
  throw NumericError("normal prior places almost no mass on [0,1]; "
                     "rejection sampling failed");
}

}  // namespace

void check_prior(const Prior& prior) {
  if (prior.kind == PriorKind::kNormal) {
    if (!(std::isfinite(prior.mu) && prior.mu >= 0.0 && prior.mu <= 1.0)) {
      throw ValidationError("normal prior mu must lie in [0,1]");
    }
    if (!(std::isfinite(prior.sigma) && prior.sigma > 0.0)) {
      throw ValidationError("normal prior sigma must be > 0 and finite");
    }
  }
}

void check_factor_params(const FactorParams& params) {
  if (params.factor_id < 1 || params.factor_id > static_cast<int>(kFeatureCount)) {
    std::ostringstream msg;
    msg << "factor_id " << params.factor_id << " outside 1.."
        << kFeatureCount;
    throw ValidationError(msg.str());
  }
  if (!(std::isfinite(params.sigma) && params.sigma > 0.0)) {
    std::ostringstream msg;
    msg << "factor " << params.factor_id << ": sigma must be > 0 and finite";
    throw ValidationError(msg.str());
  }
  if (!std::isfinite(params.slope) || !std::isfinite(params.intercept)) {
    std::ostringstream msg;
    msg << "factor " << params.factor_id << ": slope/intercept must be finite";
    throw ValidationError(msg.str());
  }
}

void check_factors(std::span<const FactorObservation> factors) {
  for (const auto& factor : factors) {
    check_factor_params(factor.params);
    if (!std::isfinite(factor.value)) {
      std::ostringstream msg;
      msg << "factor " << factor.params.factor_id
          << ": observed value must be finite";
      throw ValidationError(msg.str());
    }
  }
}

double log_posterior_unnorm(double introversion,
                            std::span<const FactorObservation> factors,
                            const Prior& prior) {
  check_prior(prior);
  check_factors(factors);
  if (!(introversion >= 0.0 && introversion <= 1.0)) {
    return -std::numeric_limits<double>::infinity();
  }
  double log_prior = 0.0;  // uniform density is 1 on the support
  if (prior.kind == PriorKind::kNormal) {
    const double z = (introversion - prior.mu) / prior.sigma;
    log_prior = -0.5 * (kLog2Pi + 2.0 * std::log(prior.sigma)) - 0.5 * z * z;
  }
  return log_prior + log_likelihood(introversion, factors);
}

Posterior posterior_grid(std::span<const FactorObservation> factors,
                         const Prior& prior, int n_points) {
  check_prior(prior);
  check_factors(factors);
  if (n_points < 2) {
    throw ValidationError("posterior grid needs at least 2 points");
  }

  const std::size_t n = static_cast<std::size_t>(n_points);
  Posterior posterior;
  posterior.grid.resize(n);
  posterior.density.resize(n);

  std::vector<double> log_post(n);
  const double step = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    posterior.grid[i] = static_cast<double>(i) * step;
    log_post[i] = log_posterior_unnorm(posterior.grid[i], factors, prior);
    if (std::isnan(log_post[i])) {
      throw NumericError("posterior evaluation produced NaN");
    }
  }
  posterior.grid.back() = 1.0;

  const auto max_it = std::max_element(log_post.begin(), log_post.end());
  const double log_max = *max_it;
  const double log_min = *std::min_element(log_post.begin(), log_post.end());
  for (std::size_t i = 0; i < n; ++i) {
    posterior.density[i] = std::exp(log_post[i] - log_max);
  }

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    integral += 0.5 * (posterior.density[i] + posterior.density[i + 1]) * step;
  }
  if (!(integral > 0.0) || !std::isfinite(integral)) {
    throw NumericError("posterior density failed to normalize");
  }
  for (auto& d : posterior.density) {
    d /= integral;
    if (!std::isfinite(d)) throw NumericError("posterior density is not finite");
  }

  // Mean and variance by the same trapezoid rule.
  double mean = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    mean += 0.5 * step *
            (posterior.grid[i] * posterior.density[i] +
             posterior.grid[i + 1] * posterior.density[i + 1]);
  }
  double variance = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d0 = posterior.grid[i] - mean;
    const double d1 = posterior.grid[i + 1] - mean;
    variance += 0.5 * step *
                (d0 * d0 * posterior.density[i] + d1 * d1 * posterior.density[i + 1]);
  }
  posterior.mean = mean;
  posterior.variance = std::max(variance, 0.0);

  // Equal-tailed 95% interval from the interpolated inverse CDF.
  std::vector<double> cdf(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    cdf[i] = cdf[i - 1] +
             0.5 * (posterior.density[i] + posterior.density[i - 1]) * step;
  }
  const double cdf_total = cdf.back();
  const auto quantile = [&](double q) {
    const double target = q * cdf_total;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.begin()) return posterior.grid.front();
    if (it == cdf.end()) return posterior.grid.back();
    const std::size_t hi = static_cast<std::size_t>(it - cdf.begin());
    const std::size_t lo = hi - 1;
    const double span = cdf[hi] - cdf[lo];
    const double t = span > 0.0 ? (target - cdf[lo]) / span : 0.0;
    return posterior.grid[lo] + t * (posterior.grid[hi] - posterior.grid[lo]);
  };
  posterior.credible_interval_95 = {quantile(0.025), quantile(0.975)};

  // MAP: grid argmax refined by golden-section search between its
  // neighbors. A flat posterior has the whole support as argmax; report its
  // center, which is itself a maximizer.
  if (log_max - log_min < 1e-12) {
    posterior.map = 0.5;
    posterior.map_on_boundary = false;
    return posterior;
  }
  const std::size_t idx =
      static_cast<std::size_t>(max_it - log_post.begin());
  const double lo = posterior.grid[idx == 0 ? 0 : idx - 1];
  const double hi = posterior.grid[std::min(idx + 1, n - 1)];
  const auto objective = [&](double x) {
    return log_posterior_unnorm(x, factors, prior);
  };
  double best = golden_max(objective, lo, hi, 1e-9);
  for (const double candidate : {posterior.grid[idx], lo, hi}) {
    if (objective(candidate) > objective(best)) best = candidate;
  }
  const MapEstimate snapped = snap_boundary(best);
  posterior.map = snapped.value;
  posterior.map_on_boundary = snapped.on_boundary;
  return posterior;
}

McSummary posterior_mc(std::span<const FactorObservation> factors,
                       const Prior& prior, std::size_t n_samples,
                       std::uint64_t seed) {
  check_prior(prior);
  check_factors(factors);
  if (n_samples == 0) {
    throw ValidationError("posterior_mc needs at least 1 sample");
  }

  Rng rng(seed);
  std::vector<double> samples(n_samples);
  std::vector<double> log_weights(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    samples[i] = draw_from_prior(rng, prior);
    // Proposal equals the (truncated) prior, so only the likelihood weighs.
    log_weights[i] = log_likelihood(samples[i], factors);
  }

  const double log_shift = *std::max_element(log_weights.begin(), log_weights.end());
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  double sum_wx = 0.0;
  std::vector<double> weights(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    weights[i] = std::exp(log_weights[i] - log_shift);
    sum_w += weights[i];
    sum_w2 += weights[i] * weights[i];
    sum_wx += weights[i] * samples[i];
  }
  if (!(sum_w > 0.0)) throw NumericError("all importance weights vanished");

  McSummary summary;
  summary.n_samples = n_samples;
  summary.mean = sum_wx / sum_w;
  double var = 0.0;
  double se2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double w_norm = weights[i] / sum_w;
    const double centered = samples[i] - summary.mean;
    var += w_norm * centered * centered;
    se2 += w_norm * w_norm * centered * centered;
  }
  summary.variance = var;
  summary.se_mean = std::sqrt(se2);
  summary.ess = sum_w * sum_w / sum_w2;
  summary.degenerate = summary.ess < 10.0;

  // Highest-posterior sample, refined between its order-statistic neighbors.
  const auto objective = [&](double x) {
    return log_posterior_unnorm(x, factors, prior);
  };
  std::size_t best_idx = 0;
  double best_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double lp = objective(samples[i]);
    if (lp > best_log) {
      best_log = lp;
      best_idx = i;
    }
  }
  const double best_sample = samples[best_idx];
  double lo = 0.0;
  double hi = 1.0;
  for (const double s : samples) {
    if (s < best_sample && s > lo) lo = s;
    if (s > best_sample && s < hi) hi = s;
  }
  double refined = golden_max(objective, lo, hi, 1e-9);
  if (objective(best_sample) > objective(refined)) refined = best_sample;
  summary.map_estimate = refined;
  return summary;
}

MapEstimate map_numeric(std::span<const FactorObservation> factors,
                        const Prior& prior) {
  check_prior(prior);
  check_factors(factors);
  if (!informative(factors, prior)) {
    throw NumericError("flat posterior, MAP undefined: uniform prior with no "
                       "slope information");
  }
  const auto objective = [&](double x) {
    return log_posterior_unnorm(x, factors, prior);
  };
  double best = golden_max(objective, 0.0, 1.0, 1e-10);
  for (const double endpoint : {0.0, 1.0}) {
    if (objective(endpoint) > objective(best)) best = endpoint;
  }
  return snap_boundary(best);
}

}  // namespace introscore

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "introscore/bayes.hpp"
#include "introscore/errors.hpp"
#include "introscore/quadratic.hpp"
#include "introscore/rng.hpp"

using namespace introscore;

namespace {

FactorObservation factor(int id, double slope, double intercept, double sigma,
                         double value) {
  return {{id, slope, intercept, sigma}, value};
}

double trapezoid(const std::vector<double>& grid,
                 const std::vector<double>& density) {
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    integral += 0.5 * (density[i] + density[i + 1]) * (grid[i + 1] - grid[i]);
  }
  return integral;
}

std::vector<FactorObservation> random_instance(Rng& rng, int n_factors) {
  std::vector<FactorObservation> factors;
  const double truth = rng.uniform(0.2, 0.8);
  for (int k = 0; k < n_factors; ++k) {
    const double slope = (rng.uniform01() < 0.5 ? -1.0 : 1.0) *
                         rng.uniform(0.3, 1.0);
    const double intercept = rng.uniform(0.0, 0.2);
    const double sigma = rng.uniform(0.05, 0.5);
    const double value = slope * truth + intercept + rng.normal(0.0, sigma);
    factors.push_back(factor(1 + k % 12, slope, intercept, sigma, value));
  }
  return factors;
}

}  // namespace

TEST_CASE("log posterior is 0 on the support for a uniform prior, no factors") {
  const std::vector<FactorObservation> none;
  for (const double i : {0.0, 0.3, 1.0}) {
    CHECK(log_posterior_unnorm(i, none, Prior::uniform()) == 0.0);
  }
}

TEST_CASE("log posterior is -infinity outside the truncated support") {
  const std::vector<FactorObservation> factors{factor(1, 1, 0, 1, 0.6)};
  CHECK(std::isinf(log_posterior_unnorm(1.5, factors, Prior::uniform())));
  CHECK(log_posterior_unnorm(1.5, factors, Prior::uniform()) < 0);
  CHECK(std::isinf(log_posterior_unnorm(-0.1, factors, Prior::normal(0.5, 0.2))));
}

TEST_CASE("zero residual leaves only the Gaussian normalization constant") {
  const std::vector<FactorObservation> factors{factor(1, 1, 0, 1, 0.6)};
  const double expected = -0.5 * std::log(2.0 * M_PI);  // about -0.91894
  CHECK(log_posterior_unnorm(0.6, factors, Prior::uniform()) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(-0.91894).epsilon(1e-5));
}

TEST_CASE("factor contributions add") {
  const auto f1 = factor(1, 0.8, 0.1, 0.2, 0.5);
  const auto f2 = factor(2, -0.7, 0.9, 0.3, 0.4);
  const std::vector<FactorObservation> both{f1, f2};
  const std::vector<FactorObservation> just1{f1};
  const std::vector<FactorObservation> just2{f2};
  const double i = 0.37;
  CHECK(log_posterior_unnorm(i, both, Prior::uniform()) ==
        doctest::Approx(log_posterior_unnorm(i, just1, Prior::uniform()) +
                        log_posterior_unnorm(i, just2, Prior::uniform()))
            .epsilon(1e-14));
}

TEST_CASE("normal prior adds its log density") {
  const std::vector<FactorObservation> none;
  const Prior prior = Prior::normal(0.5, 0.1);
  const double at_mode = -0.5 * std::log(2.0 * M_PI * 0.01);
  CHECK(log_posterior_unnorm(0.5, none, prior) ==
        doctest::Approx(at_mode).epsilon(1e-12));
  const double z = (0.3 - 0.5) / 0.1;
  CHECK(log_posterior_unnorm(0.3, none, prior) ==
        doctest::Approx(at_mode - 0.5 * z * z).epsilon(1e-12));
}

TEST_CASE("parameter validation names the offender") {
  CHECK_THROWS_WITH_AS(check_factor_params({2, 1.0, 0.0, 0.0}),
                       doctest::Contains("factor 2"), ValidationError);
  CHECK_THROWS_AS(check_factor_params({0, 1.0, 0.0, 0.1}), ValidationError);
  CHECK_THROWS_AS(check_factor_params({13, 1.0, 0.0, 0.1}), ValidationError);
  CHECK_THROWS_AS(check_factor_params({1, std::nan(""), 0.0, 0.1}),
                  ValidationError);
  const std::vector<FactorObservation> bad_value{
      factor(3, 1, 0, 0.1, std::nan(""))};
  CHECK_THROWS_WITH_AS(check_factors(bad_value), doctest::Contains("factor 3"),
                       ValidationError);

  CHECK_THROWS_AS(check_prior(Prior::normal(0.5, 0.0)), ValidationError);
  CHECK_THROWS_AS(check_prior(Prior::normal(1.5, 0.1)), ValidationError);
  CHECK_NOTHROW(check_prior(Prior::uniform()));
  CHECK_NOTHROW(check_prior(Prior::normal(0.0, 2.0)));
}

TEST_CASE("posterior_grid on a flat posterior") {
  const std::vector<FactorObservation> none;
  const auto posterior = posterior_grid(none, Prior::uniform(), 1001);
  REQUIRE(posterior.grid.size() == 1001);
  CHECK(posterior.grid.front() == 0.0);
  CHECK(posterior.grid.back() == 1.0);
  for (const double d : posterior.density) {
    REQUIRE(d == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(trapezoid(posterior.grid, posterior.density) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(posterior.mean == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(posterior.variance == doctest::Approx(1.0 / 12.0).epsilon(1e-6));
  CHECK(posterior.credible_interval_95.lo == doctest::Approx(0.025).epsilon(1e-6));
  CHECK(posterior.credible_interval_95.hi == doctest::Approx(0.975).epsilon(1e-6));
  CHECK(posterior.map == 0.5);
  CHECK_FALSE(posterior.map_on_boundary);
}

TEST_CASE("posterior_grid locates a single-factor mode") {
  const std::vector<FactorObservation> factors{factor(1, 1, 0, 1, 0.6)};
  const auto posterior = posterior_grid(factors, Prior::uniform());
  CHECK(std::abs(posterior.map - 0.6) <= 1e-6);
  CHECK_FALSE(posterior.map_on_boundary);
  CHECK(trapezoid(posterior.grid, posterior.density) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("posterior_grid matches a Gaussian oracle when the peak is sharp") {
  // sigma small enough that truncation mass is negligible: posterior is
  // N(0.5, 0.05^2) to high accuracy.
  const std::vector<FactorObservation> factors{factor(1, 1, 0, 0.05, 0.5)};
  const auto posterior = posterior_grid(factors, Prior::uniform(), 10001);
  CHECK(posterior.mean == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(posterior.variance == doctest::Approx(0.0025).epsilon(1e-4));
  CHECK(posterior.credible_interval_95.lo ==
        doctest::Approx(0.5 - 1.959963985 * 0.05).epsilon(1e-4));
  CHECK(posterior.credible_interval_95.hi ==
        doctest::Approx(0.5 + 1.959963985 * 0.05).epsilon(1e-4));
}

TEST_CASE("truncated normal prior integrates to 1 and matches the erf oracle") {
  const std::vector<FactorObservation> none;
  const auto posterior = posterior_grid(none, Prior::normal(0.5, 0.1), 10001);
  CHECK(posterior.mean == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(trapezoid(posterior.grid, posterior.density) ==
        doctest::Approx(1.0).epsilon(1e-9));

  // Normalized density at the mode: phi(0)/(sigma * Z) with
  // Z = Phi(5) - Phi(-5) computed from std::erf.
  const double z_mass = 0.5 * (std::erf(5.0 / std::sqrt(2.0)) -
                               std::erf(-5.0 / std::sqrt(2.0)));
  const double expected_peak =
      (1.0 / (0.1 * std::sqrt(2.0 * M_PI))) / z_mass;
  const double peak = posterior.density[posterior.density.size() / 2];
  CHECK(peak == doctest::Approx(expected_peak).epsilon(1e-6));
}

TEST_CASE("posterior_grid integral hits 1e-9 across grid sizes") {
  Rng rng(12345);
  for (const int points : {101, 1001, 10001}) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto factors = random_instance(rng, 1 + rep);
      const auto posterior = posterior_grid(factors, Prior::uniform(), points);
      CAPTURE(points);
      CHECK(std::abs(trapezoid(posterior.grid, posterior.density) - 1.0) <=
            1e-9);
    }
  }
}

TEST_CASE("golden refinement beats the raw grid argmax at every resolution") {
  // Mode deliberately off-grid for all the sizes below.
  const double mode = 0.613;
  const std::vector<FactorObservation> factors{factor(1, 1, 0, 1, mode)};
  for (const int points : {101, 201, 401, 801}) {
    const auto posterior = posterior_grid(factors, Prior::uniform(), points);
    const auto max_it =
        std::max_element(posterior.density.begin(), posterior.density.end());
    const double argmax =
        posterior.grid[static_cast<std::size_t>(max_it - posterior.density.begin())];
    const double spacing = 1.0 / (points - 1);
    CAPTURE(points);
    CHECK(std::abs(argmax - mode) <= 0.5 * spacing + 1e-9);
    CHECK(std::abs(posterior.map - mode) <= 1e-7);
    CHECK(std::abs(posterior.map - mode) <= std::abs(argmax - mode) + 1e-9);
  }
}

TEST_CASE("posterior_grid reports a boundary MAP") {
  const std::vector<FactorObservation> factors{factor(1, 1, 0, 0.1, 1.5)};
  const auto posterior = posterior_grid(factors, Prior::uniform());
  CHECK(posterior.map == 1.0);
  CHECK(posterior.map_on_boundary);
}

TEST_CASE("posterior_grid rejects tiny grids") {
  const std::vector<FactorObservation> none;
  CHECK_THROWS_AS(posterior_grid(none, Prior::uniform(), 1), ValidationError);
  CHECK_NOTHROW(posterior_grid(none, Prior::uniform(), 2));
}

TEST_CASE("posterior_mc agrees with the grid mean within 3 standard errors") {
  const std::vector<FactorObservation> factors{factor(1, 1, 0, 1, 0.6)};
  const auto grid = posterior_grid(factors, Prior::uniform(), 10001);
  const auto mc = posterior_mc(factors, Prior::uniform(), 100000, 777);
  CHECK(std::abs(mc.mean - grid.mean) <= 3.0 * mc.se_mean);
  CHECK(mc.n_samples == 100000);
  CHECK(mc.ess > 10.0);
  CHECK_FALSE(mc.degenerate);
  CHECK(mc.ess <= 100000.0 + 1e-6);
}

TEST_CASE("posterior_mc is deterministic given the seed") {
  const std::vector<FactorObservation> factors{factor(2, -0.7, 0.9, 0.2, 0.5)};
  const auto a = posterior_mc(factors, Prior::normal(0.4, 0.2), 20000, 42);
  const auto b = posterior_mc(factors, Prior::normal(0.4, 0.2), 20000, 42);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  CHECK(a.map_estimate == b.map_estimate);
  CHECK(a.se_mean == b.se_mean);
  CHECK(a.ess == b.ess);

  const auto c = posterior_mc(factors, Prior::normal(0.4, 0.2), 20000, 43);
  CHECK(a.mean != c.mean);
}

TEST_CASE("posterior_mc rejects zero samples and flags degeneracy") {
  const std::vector<FactorObservation> factors{factor(1, 1, 0, 1, 0.6)};
  CHECK_THROWS_AS(posterior_mc(factors, Prior::uniform(), 0, 1),
                  ValidationError);

  // A near-delta likelihood starves the uniform proposal: almost all weight
  // concentrates on the closest sample.
  const std::vector<FactorObservation> sharp{factor(1, 1, 0, 1e-5, 0.5)};
  const auto summary = posterior_mc(sharp, Prior::uniform(), 1000, 9);
  CHECK(summary.degenerate);
  CHECK(summary.ess < 10.0);
}

TEST_CASE("posterior_mc MAP lands near the true mode") {
  const std::vector<FactorObservation> factors{factor(1, 1, 0, 0.1, 0.35)};
  const auto mc = posterior_mc(factors, Prior::uniform(), 50000, 31);
  CHECK(std::abs(mc.map_estimate - 0.35) <= 1e-3);
}

TEST_CASE("map_numeric matches the closed-form oracle") {
  const std::vector<FactorObservation> factors{factor(1, 1, 0, 0.1, 0.35)};
  const auto estimate = map_numeric(factors, Prior::uniform());
  CHECK(std::abs(estimate.value - 0.35) <= 1e-6);
  CHECK_FALSE(estimate.on_boundary);
}

TEST_CASE("map_numeric snaps to the boundary for an exterior peak") {
  const std::vector<FactorObservation> factors{factor(1, 1, 0, 0.1, 1.5)};
  const auto estimate = map_numeric(factors, Prior::uniform());
  CHECK(estimate.value == 1.0);
  CHECK(estimate.on_boundary);

  const std::vector<FactorObservation> low{factor(1, 1, 0.5, 0.1, 0.1)};
  const auto at_zero = map_numeric(low, Prior::uniform());
  CHECK(at_zero.value == 0.0);
  CHECK(at_zero.on_boundary);
}

TEST_CASE("map_numeric rejects flat posteriors") {
  const std::vector<FactorObservation> none;
  CHECK_THROWS_WITH_AS(map_numeric(none, Prior::uniform()),
                       doctest::Contains("flat posterior"), NumericError);

  const std::vector<FactorObservation> no_info{factor(1, 0, 0.5, 0.1, 0.5)};
  CHECK_THROWS_AS(map_numeric(no_info, Prior::uniform()), NumericError);

  // A normal prior alone pins the mode.
  const auto with_prior = map_numeric(none, Prior::normal(0.3, 0.1));
  CHECK(std::abs(with_prior.value - 0.3) <= 1e-6);
}

TEST_CASE("map_numeric agrees with the quadratic closed form on random instances") {
  Rng rng(8675309);
  int interior = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const auto factors = random_instance(rng, 1 + rep % 5);
    const auto coeffs = quad_coeffs(factors, Prior::uniform());
    const auto closed = map_closed_form(coeffs);
    const auto numeric = map_numeric(factors, Prior::uniform());
    CHECK(std::abs(closed.value - numeric.value) <= 1e-6);
    CHECK(closed.on_boundary == numeric.on_boundary);
    if (!closed.on_boundary) ++interior;
  }
  CHECK(interior >= 25);
}

TEST_CASE("scaling every sigma by a common factor leaves the MAP in place") {
  Rng rng(13579);
  for (int rep = 0; rep < 20; ++rep) {
    auto factors = random_instance(rng, 3);
    const auto base = map_numeric(factors, Prior::uniform());
    for (const double c : {0.5, 2.0, 10.0}) {
      auto scaled = factors;
      for (auto& f : scaled) f.params.sigma *= c;
      const auto moved = map_numeric(scaled, Prior::uniform());
      CHECK(std::abs(moved.value - base.value) <= 1e-6);
    }
  }
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bnswarm/rng.hpp"
#include "bnswarm/survival.hpp"

using namespace bnswarm;

namespace {

std::vector<Observation> weibull_sample(double lambda, double k, int n, std::uint64_t seed,
                                        double censor_at = 0.0) {
  Rng rng(seed);
  std::vector<Observation> obs(n);
  for (Observation& o : obs) {
    const double t = lambda * std::pow(rng.exponential(), 1.0 / k);
    if (censor_at > 0.0 && t > censor_at) {
      o = {censor_at, true};
    } else {
      o = {t, false};
    }
  }
  return obs;
}

}  // namespace

TEST_CASE("Kaplan-Meier on uncensored data is the empirical CDF") {
  const std::vector<Observation> obs = {{5, false}, {3, false}, {8, false},
                                        {3, false}, {9, false}, {1, false}};
  const KmCurve curve = kaplan_meier(obs);
  REQUIRE(curve.steps.size() == 5);
  const double times[] = {1, 3, 5, 8, 9};
  const double cdf[] = {1.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6, 1.0};
  const int at_risk[] = {6, 5, 3, 2, 1};
  for (int i = 0; i < 5; ++i) {
    CHECK(curve.steps[i].time == times[i]);
    CHECK(std::abs(curve.steps[i].cdf - cdf[i]) < 1e-12);
    CHECK(curve.steps[i].at_risk == at_risk[i]);
  }
  CHECK(curve.n_events == 6);
  CHECK(curve.n_censored == 0);
}

TEST_CASE("censored three-point case matches the product-limit formula") {
  // Events at 1 and 3 around a censoring at 2:
  // S(1) = 4/5, S(3) = 4/5 * (1 - 1/3) = 8/15.
  const std::vector<Observation> obs = {
      {1, false}, {2, true}, {3, false}, {4, true}, {5, false}};
  const KmCurve curve = kaplan_meier(obs);
  REQUIRE(curve.steps.size() == 3);
  CHECK(std::abs(curve.steps[0].cdf - (1.0 - 4.0 / 5.0)) < 1e-12);
  CHECK(std::abs(curve.steps[1].cdf - (1.0 - 8.0 / 15.0)) < 1e-12);
  CHECK(std::abs(curve.steps[2].cdf - 1.0) < 1e-12);
  CHECK(curve.n_events == 3);
  CHECK(curve.n_censored == 2);
}

TEST_CASE("ties process events before censorings") {
  const std::vector<Observation> obs = {{2, false}, {2, true}, {3, false}};
  const KmCurve curve = kaplan_meier(obs);
  REQUIRE(curve.steps.size() == 2);
  CHECK(curve.steps[0].at_risk == 3);
  CHECK(std::abs(curve.steps[0].cdf - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(curve.steps[1].cdf - 1.0) < 1e-12);
}

TEST_CASE("weibull mean reproduces the analytic cases") {
  CHECK(std::abs(weibull_mean(123.0, 1.0) - 123.0) < 1e-10);
  CHECK(std::abs(weibull_mean(1.0, 2.0) - std::sqrt(std::numbers::pi) / 2.0) < 1e-10);
}

TEST_CASE("least-squares fit recovers synthetic parameters") {
  const double lambda = 120.0, k = 1.4;
  const WeibullFit fit = fit_weibull(weibull_sample(lambda, k, 2000, 321));
  CHECK_FALSE(fit.degenerate);
  CHECK(std::abs(fit.lambda - lambda) / lambda < 0.03);
  CHECK(std::abs(fit.k - k) / k < 0.05);
  CHECK(fit.mean_fpt == doctest::Approx(weibull_mean(fit.lambda, fit.k)).epsilon(1e-12));
}

TEST_CASE("fit tolerates right-censoring") {
  const double lambda = 120.0, k = 1.4;
  const WeibullFit fit = fit_weibull(weibull_sample(lambda, k, 2000, 654, 150.0));
  CHECK_FALSE(fit.degenerate);
  CHECK(fit.n_censored > 0);
  CHECK(std::abs(fit.lambda - lambda) / lambda < 0.10);
  CHECK(std::abs(fit.k - k) / k < 0.10);
}

TEST_CASE("too-sparse curves degrade to the flagged sentinel") {
  const std::vector<Observation> censored_only = {{10, true}, {10, true}, {10, true}};
  const WeibullFit fit = fit_weibull(censored_only);
  CHECK(fit.degenerate);
  CHECK(std::isnan(fit.lambda));
  CHECK(std::isnan(fit.k));
  CHECK(std::isinf(fit.mean_fpt));
  CHECK(fit.n_censored == 3);

  const std::vector<Observation> two_events = {{5, false}, {9, false}, {10, true}};
  CHECK(fit_weibull(two_events).degenerate);
}

TEST_CASE("censored MLE agrees with the generator") {
  const double lambda = 120.0, k = 1.4;
  const WeibullMle mle = weibull_mle(weibull_sample(lambda, k, 2000, 987, 200.0));
  CHECK(std::abs(mle.lambda - lambda) / lambda < 0.05);
  CHECK(std::abs(mle.k - k) / k < 0.05);
  const std::vector<Observation> all_censored = {{10, true}, {20, true}};
  CHECK_THROWS_AS(weibull_mle(all_censored), std::invalid_argument);
}

TEST_CASE("least squares and MLE land near each other") {
  const auto obs = weibull_sample(90.0, 1.1, 1500, 222, 120.0);
  const WeibullFit ls = fit_weibull(obs);
  const WeibullMle mle = weibull_mle(obs);
  CHECK(std::abs(ls.lambda - mle.lambda) / mle.lambda < 0.10);
  CHECK(std::abs(ls.k - mle.k) / mle.k < 0.10);
}

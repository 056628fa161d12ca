#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bnswarm/rng.hpp"
#include "bnswarm/stats.hpp"

using namespace bnswarm;

// Reference p-values and statistics below were computed independently with
// scipy 1.x on the literal datasets in each test.

TEST_CASE("Shapiro-Wilk flags a skewed catalog sample") {
  const std::vector<double> x = {148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236};
  const ShapiroWilk sw = shapiro_wilk(x);
  CHECK(sw.w == doctest::Approx(0.7888146948631716).epsilon(1e-4));
  CHECK(sw.p_value == doctest::Approx(0.006703814061898823).epsilon(0.05));
  CHECK(sw.p_value < 0.05);
}

TEST_CASE("Shapiro-Wilk accepts near-normal data") {
  const std::vector<double> skewed = {2.1, 3.7, 1.4, 5.9, 2.8, 3.3, 4.1, 2.2, 6.5, 3.9,
                                      2.6, 4.8, 3.1, 1.9, 5.2, 3.5, 2.4, 4.4, 3.0, 7.3};
  const ShapiroWilk a = shapiro_wilk(skewed);
  CHECK(a.w == doctest::Approx(0.9482463902757243).epsilon(1e-4));
  CHECK(a.p_value == doctest::Approx(0.3412544472050578).epsilon(0.05));

  const std::vector<double> scores = {-1.867, -1.408, -1.131, -0.921, -0.745,
                                      -0.590, -0.448, -0.315, -0.187, -0.062,
                                      0.062,  0.187,  0.315,  0.448,  0.590,
                                      0.745,  0.921,  1.131,  1.408,  1.867};
  const ShapiroWilk b = shapiro_wilk(scores);
  CHECK(b.w == doctest::Approx(0.9970247622597439).epsilon(1e-4));
  CHECK(b.p_value > 0.99);
}

TEST_CASE("Shapiro-Wilk rejects unusable input") {
  CHECK_THROWS_AS(shapiro_wilk({1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(shapiro_wilk({3.0, 3.0, 3.0, 3.0}), std::invalid_argument);
}

TEST_CASE("Welch t-test matches the reference") {
  const std::vector<double> a = {1.1, 2.2, 3.1, 4.9, 5.0};
  const std::vector<double> b = {2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
  const TTest t = welch_t_test(a, b);
  CHECK(t.t == doctest::Approx(-1.1513441817760133).epsilon(1e-10));
  CHECK(t.df == doctest::Approx(8.900069935584455).epsilon(1e-10));
  CHECK(t.p_value == doctest::Approx(0.27958101834365917).epsilon(1e-9));
}

TEST_CASE("Mann-Whitney exact tail matches the reference") {
  const MannWhitney small = mann_whitney_u({1, 2, 3, 4}, {3.5, 4.5, 5.5, 6.5, 7.5});
  CHECK(small.exact);
  CHECK(small.u == 1.0);
  CHECK(small.p_value == doctest::Approx(0.031746031746031744).epsilon(1e-12));

  const MannWhitney mid = mann_whitney_u({10, 12, 14, 16, 18}, {11, 13, 15, 17, 19});
  CHECK(mid.exact);
  CHECK(mid.u == 10.0);
  CHECK(mid.p_value == doctest::Approx(0.6904761904761905).epsilon(1e-12));
}

TEST_CASE("Mann-Whitney switches to the corrected normal approximation") {
  std::vector<double> a, b;
  for (int i = 1; i <= 30; ++i) a.push_back(i);
  for (int i = 8; i < 38; ++i) b.push_back(i + 0.5);
  const MannWhitney big = mann_whitney_u(a, b);
  CHECK_FALSE(big.exact);
  CHECK(big.u == 253.0);
  CHECK(big.p_value == doctest::Approx(0.003670893392450653).epsilon(1e-9));
}

TEST_CASE("Bonferroni thresholds are exact divisions") {
  CHECK(bonferroni_threshold(0.05, 100) == 0.0005);
  CHECK(bonferroni_threshold(0.05, 6) == 0.05 / 6);
  CHECK(std::abs(bonferroni_threshold(0.05, 6) - 0.0083) < 5e-5);
}

TEST_CASE("two-sample t power matches the noncentral reference") {
  CHECK(power_two_sample_t(20, 1.2, 0.05) ==
        doctest::Approx(0.9588268143625424).epsilon(1e-8));
  CHECK(power_two_sample_t(20, 0.0, 0.05) == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("Pearson and the fitted line match the reference") {
  const std::vector<double> x = {1, 2, 3, 4, 5, 6};
  const std::vector<double> y = {2.5, 4.9, 7.6, 9.8, 12.6, 15.1};
  const Regression reg = pearson_correlation(x, y);
  CHECK(reg.r == doctest::Approx(0.9996820761372922).epsilon(1e-10));
  CHECK(reg.slope == doctest::Approx(2.5228571428571427).epsilon(1e-10));
  CHECK(reg.intercept == doctest::Approx(-0.08).epsilon(1e-9));
  CHECK_THROWS_AS(pearson_correlation({1, 1, 1, 1}, {1, 2, 3, 4}), std::domain_error);
  CHECK_THROWS_AS(pearson_correlation({1, 2}, {1, 2}), std::invalid_argument);
}

TEST_CASE("KS uniformity test separates flat from shifted samples") {
  Rng rng(31);
  std::vector<double> flat(5000);
  for (double& x : flat) x = rng.uniform(0.0, 1.0);
  CHECK(ks_uniform(flat, 0.0, 1.0).p_value > 0.01);

  std::vector<double> squeezed(5000);
  for (double& x : squeezed) x = 0.5 + 0.5 * rng.uniform01() * rng.uniform01();
  CHECK(ks_uniform(squeezed, 0.0, 1.0).p_value < 1e-6);

  std::vector<double> grid(25);
  for (int i = 0; i < 25; ++i) grid[i] = 0.03 + (0.97 - 0.03) * i / 24.0;
  CHECK(ks_uniform(grid, 0.0, 1.0).d == doctest::Approx(0.03).epsilon(1e-9));
}

TEST_CASE("compare() picks the right branch and direction") {
  // Clean normal-ish samples with a big gap: Welch branch, A better (lower).
  const std::vector<double> low = {10.1, 11.2, 9.8, 10.5, 10.9, 11.0, 10.2, 9.9, 10.7, 10.4};
  const std::vector<double> high = {20.3, 21.1, 19.7, 20.9, 20.2, 21.4, 19.9, 20.6, 20.8, 20.1};
  const ComparisonVerdict ab = compare(low, high, 1);
  CHECK(ab.label == Verdict::Better);
  CHECK(ab.test == "t-test");
  const ComparisonVerdict ba = compare(high, low, 1);
  CHECK(ba.label == Verdict::Worse);

  // Same location: similar.
  CHECK(compare(low, low, 1).label == Verdict::Similar);

  // A sentinel +inf score forces the rank branch and counts as worse.
  std::vector<double> withinf = high;
  withinf[3] = std::numeric_limits<double>::infinity();
  const ComparisonVerdict inf_v = compare(withinf, low, 1);
  CHECK(inf_v.test == "mann-whitney");
  CHECK(inf_v.label == Verdict::Worse);

  // Bonferroni correction can flip significant into similar.
  const std::vector<double> close_a = {10.0, 10.5, 11.0, 10.2, 10.8, 10.4};
  const std::vector<double> close_b = {11.0, 11.5, 12.0, 11.2, 11.8, 11.4};
  const ComparisonVerdict raw = compare(close_a, close_b, 1);
  const ComparisonVerdict corrected = compare(close_a, close_b, 10000);
  CHECK(raw.threshold == 0.05);
  CHECK(corrected.threshold == 0.05 / 10000);
  CHECK(raw.label == Verdict::Better);
  CHECK(corrected.label == Verdict::Similar);
}

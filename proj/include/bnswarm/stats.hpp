#pragma once

#include <string>
#include <vector>

namespace bnswarm {

struct ShapiroWilk {
  double w = 0.0;
  double p_value = 0.0;
};

// Shapiro-Wilk normality test (Royston's 1995 algorithm, AS R94). Valid for
// 3 <= n <= 5000; throws std::invalid_argument outside that range or when the
// sample has zero range.
ShapiroWilk shapiro_wilk(std::vector<double> sample);

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p_value = 0.0;  // two-sided
};

// Welch's unequal-variance two-sample t-test.
TTest welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct MannWhitney {
  double u = 0.0;        // U statistic of the first sample
  double p_value = 0.0;  // two-sided
  bool exact = false;    // exact distribution used (small samples, no ties)
};

// Two-sided Mann-Whitney U test. Uses the exact null distribution when both
// groups have at most 25 values and there are no cross-ties; otherwise the
// normal approximation with tie and continuity corrections.
MannWhitney mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);

enum class Verdict { Worse, Similar, Better };
const char* verdict_name(Verdict v);

struct ComparisonVerdict {
  Verdict label = Verdict::Similar;  // for the first sample; lower is better
  std::string test;                  // "t-test" or "mann-whitney"
  double p_value = 0.0;
  double threshold = 0.0;  // Bonferroni-corrected significance level
};

inline double bonferroni_threshold(double alpha, int n_comparisons) {
  return alpha / n_comparisons;
}

// Compares two performance samples (lower values are better). Both samples
// are gated through Shapiro-Wilk at the 5% level; two normal samples get
// Welch's t-test, anything else the Mann-Whitney U test. Significance is
// judged against 0.05 / n_comparisons. Needs n >= 3 per sample.
ComparisonVerdict compare(const std::vector<double>& a, const std::vector<double>& b,
                          int n_comparisons);

struct Regression {
  double r = 0.0;  // Pearson correlation
  double slope = 0.0;
  double intercept = 0.0;
};

// Pearson correlation with the ordinary least-squares line. Throws
// std::domain_error when either input has zero variance.
Regression pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

// Achieved power of a two-sided two-sample t-test with n subjects per group
// and a true difference of effect_sd pooled standard deviations, via the
// noncentral t distribution. Reporting utility only.
double power_two_sample_t(int n, double effect_sd, double alpha);

// One-sample Kolmogorov-Smirnov test against the uniform distribution on
// [lo, hi]; asymptotic p-value.
struct KsTest {
  double d = 0.0;
  double p_value = 0.0;
};
KsTest ks_uniform(std::vector<double> sample, double lo, double hi);

}  // namespace bnswarm

#include "bnswarm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/non_central_t.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace bnswarm {

namespace {

// Wichura's AS 241 (PPND16): quantile of the standard normal.
double normal_quantile(double p) {
  if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("normal_quantile: p outside (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            ((((((1.42151175831644588870e-15 * r + 1.84631831751005468180e-6) * r +
                 7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r +
               1.36929880922735805310e-1) * r + 5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ShapiroWilk shapiro_wilk(std::vector<double> sample) {
  const int n = static_cast<int>(sample.size());
  if (n < 3 || n > 5000) {
    throw std::invalid_argument("shapiro_wilk: sample size must be in [3, 5000]");
  }
  std::sort(sample.begin(), sample.end());
  if (sample.back() - sample.front() <= 0.0) {
    throw std::invalid_argument("shapiro_wilk: sample has zero range");
  }

  // Royston's approximation to the normal-scores weights.
  std::vector<double> m(n);
  double ssq_m = 0.0;
  for (int i = 0; i < n; ++i) {
    m[i] = normal_quantile((i + 1 - 0.375) / (n + 0.25));
    ssq_m += m[i] * m[i];
  }
  const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> a(n);
  const double root_ssq = std::sqrt(ssq_m);
  double a_n = m[n - 1] / root_ssq +
               ((((-2.706056 * rsn + 4.434685) * rsn - 2.071190) * rsn - 0.147981) * rsn +
                0.221157) * rsn;
  int first = 1;  // 0-based index of the first plain weight
  double phi;
  if (n > 5) {
    const double a_n1 = m[n - 2] / root_ssq +
                        ((((-3.582633 * rsn + 5.682633) * rsn - 1.752461) * rsn -
                          0.293762) * rsn + 0.042981) * rsn;
    first = 2;
    phi = (ssq_m - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
          (1.0 - 2.0 * a_n * a_n - 2.0 * a_n1 * a_n1);
    a[n - 1] = a_n;
    a[n - 2] = a_n1;
    a[0] = -a_n;
    a[1] = -a_n1;
  } else if (n > 3) {
    phi = (ssq_m - 2.0 * m[n - 1] * m[n - 1]) / (1.0 - 2.0 * a_n * a_n);
    a[n - 1] = a_n;
    a[0] = -a_n;
  } else {
    phi = 1.0;
    a[n - 1] = std::numbers::sqrt2 / 2.0;  // exact weight for n = 3
    a[0] = -a[n - 1];
  }
  const double root_phi = std::sqrt(phi);
  for (int i = first; i < n - first; ++i) a[i] = m[i] / root_phi;

  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double numerator = 0.0;
  double ssq_dev = 0.0;
  for (int i = 0; i < n; ++i) {
    numerator += a[i] * sample[i];
    ssq_dev += (sample[i] - mean) * (sample[i] - mean);
  }
  double w = numerator * numerator / ssq_dev;
  w = std::min(w, 1.0);

  double p;
  if (n == 3) {
    constexpr double pi6 = 1.90985931710274;    // 6/pi
    constexpr double stqr = 1.047197551196598;  // asin(sqrt(3/4))
    p = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
  } else if (n <= 11) {
    const double gamma = -2.273 + 0.459 * n;
    const double lw = -std::log(gamma - std::log1p(-w));
    const double mu = 0.5440 - 0.39978 * n + 0.025054 * n * n - 0.0006714 * n * n * n;
    const double sigma = std::exp(1.3822 - 0.77857 * n + 0.062767 * n * n -
                                  0.0020322 * n * n * n);
    p = normal_upper_tail((lw - mu) / sigma);
  } else {
    const double u = std::log(static_cast<double>(n));
    const double lw = std::log1p(-w);
    const double mu = -1.5861 - 0.31082 * u - 0.083751 * u * u + 0.0038915 * u * u * u;
    const double sigma = std::exp(-0.4803 - 0.082676 * u + 0.0030302 * u * u);
    p = normal_upper_tail((lw - mu) / sigma);
  }
  return ShapiroWilk{w, p};
}

TTest welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("welch_t_test: need at least 2 values per sample");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / na;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / nb;
  double va = 0.0, vb = 0.0;
  for (double x : a) va += (x - ma) * (x - ma);
  for (double x : b) vb += (x - mb) * (x - mb);
  va /= na - 1.0;
  vb /= nb - 1.0;
  const double se2 = va / na + vb / nb;
  if (se2 <= 0.0) {
    // Both samples constant: identical means give p = 1, otherwise maximal
    // evidence of a difference.
    return TTest{0.0, na + nb - 2.0, ma == mb ? 1.0 : 0.0};
  }
  const double t = (ma - mb) / std::sqrt(se2);
  const double df = se2 * se2 /
                    (va * va / (na * na * (na - 1.0)) + vb * vb / (nb * nb * (nb - 1.0)));
  boost::math::students_t_distribution<double> dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return TTest{t, df, p};
}

MannWhitney mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  if (n < 1 || m < 1) throw std::invalid_argument("mann_whitney_u: empty sample");

  // Midranks over the pooled sample.
  std::vector<std::pair<double, int>> pooled;  // (value, 0 for a / 1 for b)
  pooled.reserve(n + m);
  for (double x : a) pooled.emplace_back(x, 0);
  for (double x : b) pooled.emplace_back(x, 1);
  std::sort(pooled.begin(), pooled.end());

  const int total = n + m;
  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  bool any_tie = false;
  int i = 0;
  while (i < total) {
    int j = i;
    while (j < total && pooled[j].first == pooled[i].first) ++j;
    const int t = j - i;
    if (t > 1) {
      any_tie = true;
      tie_term += static_cast<double>(t) * t * t - t;
    }
    const double midrank = 0.5 * (i + 1 + j);  // average of ranks i+1 .. j
    for (int q = i; q < j; ++q) {
      if (pooled[q].second == 0) rank_sum_a += midrank;
    }
    i = j;
  }
  const double u1 = rank_sum_a - 0.5 * n * (n + 1);
  const double u2 = static_cast<double>(n) * m - u1;

  if (!any_tie && n <= 25 && m <= 25) {
    // Exact null distribution: the count of arrangements with statistic u is
    // the number of partitions of u into at most n parts, each at most m,
    // i.e. the q^u coefficient of the Gaussian binomial C(n+m, n)_q. Build it
    // as prod_i (1 - q^(m+i)) / (1 - q^i); every intermediate coefficient is
    // an integer below 2^53 for these sizes, so doubles hold them exactly.
    const int u_max = n * m;
    std::vector<double> dp(u_max + 1, 0.0);
    dp[0] = 1.0;
    for (int i = 1; i <= n; ++i) {
      for (int u = u_max; u >= m + i; --u) dp[u] -= dp[u - (m + i)];
      for (int u = i; u <= u_max; ++u) dp[u] += dp[u - i];
    }
    const double total_ways = std::accumulate(dp.begin(), dp.end(), 0.0);
    const int u_small = static_cast<int>(std::min(u1, u2));
    double tail = 0.0;
    for (int u = 0; u <= u_small; ++u) tail += dp[u];
    const double p = std::min(1.0, 2.0 * tail / total_ways);
    return MannWhitney{u1, p, true};
  }

  const double mu = 0.5 * n * m;
  const double nn = static_cast<double>(total);
  double var = n * m / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var <= 0.0) return MannWhitney{u1, 1.0, false};  // everything tied
  const double cc = u1 > mu ? -0.5 : (u1 < mu ? 0.5 : 0.0);  // continuity correction
  const double z = (u1 - mu + cc) / std::sqrt(var);
  const double p = std::min(1.0, 2.0 * normal_upper_tail(std::abs(z)));
  return MannWhitney{u1, p, false};
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Worse: return "worse";
    case Verdict::Similar: return "similar";
    default: return "better";
  }
}

ComparisonVerdict compare(const std::vector<double>& a, const std::vector<double>& b,
                          int n_comparisons) {
  if (a.size() < 3 || b.size() < 3) {
    throw std::invalid_argument("compare: need at least 3 values per sample");
  }
  if (n_comparisons < 1) throw std::invalid_argument("compare: n_comparisons must be >= 1");

  const auto has_range = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi > *lo;
  };
  const auto all_finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  // Sentinel scores (+inf for controllers that never found anything) force the
  // rank-based branch; only clean finite samples are offered to Shapiro-Wilk.
  bool both_normal = false;
  if (all_finite(a) && all_finite(b) && has_range(a) && has_range(b)) {
    both_normal = shapiro_wilk(a).p_value >= 0.05 && shapiro_wilk(b).p_value >= 0.05;
  }

  ComparisonVerdict verdict;
  verdict.threshold = bonferroni_threshold(0.05, n_comparisons);
  double loc_a, loc_b;
  if (both_normal) {
    verdict.test = "t-test";
    verdict.p_value = welch_t_test(a, b).p_value;
    loc_a = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    loc_b = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
  } else {
    verdict.test = "mann-whitney";
    verdict.p_value = mann_whitney_u(a, b).p_value;
    loc_a = median_of(a);
    loc_b = median_of(b);
  }
  if (verdict.p_value >= verdict.threshold || loc_a == loc_b) {
    verdict.label = Verdict::Similar;
  } else {
    verdict.label = loc_a < loc_b ? Verdict::Better : Verdict::Worse;
  }
  return verdict;
}

Regression pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("pearson_correlation: need equal lengths >= 3");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw std::domain_error("pearson_correlation: zero-variance input");
  }
  Regression reg;
  reg.r = sxy / std::sqrt(sxx * syy);
  reg.slope = sxy / sxx;
  reg.intercept = my - reg.slope * mx;
  return reg;
}

double power_two_sample_t(int n, double effect_sd, double alpha) {
  if (n < 2) throw std::invalid_argument("power_two_sample_t: need n >= 2 per group");
  const double df = 2.0 * n - 2.0;
  boost::math::students_t_distribution<double> central(df);
  const double t_crit = boost::math::quantile(boost::math::complement(central, alpha / 2.0));
  const double ncp = effect_sd * std::sqrt(n / 2.0);
  if (ncp == 0.0) return alpha;  // size of the test
  boost::math::non_central_t_distribution<double> noncentral(df, ncp);
  return boost::math::cdf(boost::math::complement(noncentral, t_crit)) +
         boost::math::cdf(noncentral, -t_crit);
}

KsTest ks_uniform(std::vector<double> sample, double lo, double hi) {
  if (sample.empty() || hi <= lo) throw std::invalid_argument("ks_uniform: bad input");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = std::clamp((sample[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max(d, (i + 1) / n - f);
    d = std::max(d, f - i / n);
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    p += 2.0 * sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return KsTest{d, std::clamp(p, 0.0, 1.0)};
}

}  // namespace bnswarm

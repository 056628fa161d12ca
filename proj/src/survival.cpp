#include "bnswarm/survival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bnswarm {

KmCurve kaplan_meier(const std::vector<Observation>& data) {
  if (data.empty()) throw std::invalid_argument("kaplan_meier: empty dataset");

  std::vector<Observation> sorted = data;
  std::sort(sorted.begin(), sorted.end(), [](const Observation& a, const Observation& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.censored < b.censored;  // events ahead of censorings at ties
  });

  KmCurve curve;
  double survival = 1.0;
  int at_risk = static_cast<int>(sorted.size());
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double t = sorted[i].time;
    int events = 0;
    int censorings = 0;
    while (i < sorted.size() && sorted[i].time == t) {
      if (sorted[i].censored) ++censorings; else ++events;
      ++i;
    }
    if (events > 0) {
      survival *= 1.0 - static_cast<double>(events) / at_risk;
      curve.steps.push_back(KmStep{t, 1.0 - survival, events, at_risk});
    }
    at_risk -= events + censorings;
    curve.n_events += events;
    curve.n_censored += censorings;
  }
  curve.all_censored = curve.n_events == 0;
  return curve;
}

double weibull_mean(double lambda, double k) {
  return lambda * std::tgamma(1.0 + 1.0 / k);
}

namespace {

struct FitPoint {
  double log_x;
  double y;  // target CDF value
};

WeibullFit degenerate_fit(const KmCurve& curve) {
  WeibullFit fit;
  fit.lambda = std::numeric_limits<double>::quiet_NaN();
  fit.k = std::numeric_limits<double>::quiet_NaN();
  fit.mean_fpt = std::numeric_limits<double>::infinity();
  fit.residual = std::numeric_limits<double>::quiet_NaN();
  fit.n_events = curve.n_events;
  fit.n_censored = curve.n_censored;
  fit.degenerate = true;
  return fit;
}

double sse_at(const std::vector<FitPoint>& pts, double log_lambda, double log_k) {
  const double k = std::exp(log_k);
  double sse = 0.0;
  for (const auto& p : pts) {
    const double t = std::exp(k * (p.log_x - log_lambda));
    const double r = -std::expm1(-t) - p.y;
    sse += r * r;
  }
  return sse;
}

}  // namespace

WeibullFit fit_weibull(const KmCurve& curve) {
  // A fit is only as good as the mass the estimator observed: when nearly
  // everything is censored the curve pins down a sliver of the CDF and the
  // fitted mean is pure extrapolation. Below one event in ten the data
  // reports the sentinel instead of a number nobody should trust.
  const int total = curve.n_events + curve.n_censored;
  if (curve.n_events * 10 < total) return degenerate_fit(curve);

  // Fit targets: the midpoint between consecutive CDF plateau values at each
  // event time, which sits halfway up the jump of the step estimator.
  std::vector<FitPoint> pts;
  double prev = 0.0;
  for (const auto& step : curve.steps) {
    const double y = 0.5 * (prev + step.cdf);
    prev = step.cdf;
    if (step.time > 0.0 && y > 0.0 && y < 1.0) {
      pts.push_back(FitPoint{std::log(step.time), y});
    }
  }
  if (pts.size() < 3) return degenerate_fit(curve);

  // Linearised start: ln(-ln(1-F)) = k ln x - k ln lambda.
  double sx = 0.0, sz = 0.0, sxx = 0.0, sxz = 0.0;
  for (const auto& p : pts) {
    const double z = std::log(-std::log1p(-p.y));
    sx += p.log_x;
    sz += z;
    sxx += p.log_x * p.log_x;
    sxz += p.log_x * z;
  }
  const double m = static_cast<double>(pts.size());
  const double denom = m * sxx - sx * sx;
  double k0 = denom != 0.0 ? (m * sxz - sx * sz) / denom : 1.0;
  k0 = std::clamp(k0, 0.05, 50.0);
  double log_k = std::log(k0);
  double log_lambda = (sx - sz / k0) / m;  // -intercept / slope

  // Levenberg-Marquardt on (ln lambda, ln k).
  double sse = sse_at(pts, log_lambda, log_k);
  double mu = 1e-3;
  bool converged = false;
  for (int iter = 0; iter < 200 && !converged; ++iter) {
    const double k = std::exp(log_k);
    double a00 = 0.0, a01 = 0.0, a11 = 0.0, g0 = 0.0, g1 = 0.0;
    for (const auto& p : pts) {
      const double t = std::exp(k * (p.log_x - log_lambda));
      const double f = -std::expm1(-t);
      const double r = f - p.y;
      const double e = std::exp(-t);
      const double j0 = -k * t * e;                       // d f / d ln lambda
      const double j1 = k * t * (p.log_x - log_lambda) * e;  // d f / d ln k
      a00 += j0 * j0;
      a01 += j0 * j1;
      a11 += j1 * j1;
      g0 += j0 * r;
      g1 += j1 * r;
    }
    bool stepped = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      const double d00 = a00 * (1.0 + mu);
      const double d11 = a11 * (1.0 + mu);
      const double det = d00 * d11 - a01 * a01;
      if (det == 0.0 || !std::isfinite(det)) break;
      const double step0 = (-g0 * d11 + g1 * a01) / det;
      const double step1 = (-g1 * d00 + g0 * a01) / det;
      const double cand_ll = log_lambda + step0;
      const double cand_lk = std::clamp(log_k + step1, std::log(1e-3), std::log(1e3));
      const double cand_sse = sse_at(pts, cand_ll, cand_lk);
      if (cand_sse <= sse) {
        if (std::abs(step0) < 1e-12 && std::abs(step1) < 1e-12) converged = true;
        log_lambda = cand_ll;
        log_k = cand_lk;
        sse = cand_sse;
        mu = std::max(mu / 3.0, 1e-12);
        stepped = true;
        break;
      }
      mu *= 4.0;
    }
    if (!stepped) converged = true;  // no downhill direction left
  }
  if (!converged) {
    throw std::runtime_error("fit_weibull: no convergence after 200 iterations, residual " +
                             std::to_string(sse));
  }

  WeibullFit fit;
  fit.lambda = std::exp(log_lambda);
  fit.k = std::exp(log_k);
  fit.mean_fpt = weibull_mean(fit.lambda, fit.k);
  fit.residual = sse;
  fit.n_events = curve.n_events;
  fit.n_censored = curve.n_censored;
  return fit;
}

WeibullFit fit_weibull(const std::vector<Observation>& data) {
  return fit_weibull(kaplan_meier(data));
}

WeibullMle weibull_mle(const std::vector<Observation>& data) {
  double max_x = 0.0;
  int events = 0;
  double sum_log_events = 0.0;
  for (const auto& obs : data) {
    if (obs.time <= 0.0) throw std::invalid_argument("weibull_mle: non-positive time");
    max_x = std::max(max_x, obs.time);
    if (!obs.censored) {
      ++events;
      sum_log_events += std::log(obs.time);
    }
  }
  if (events == 0) throw std::invalid_argument("weibull_mle: no uncensored events");

  // Profile likelihood in k after eliminating lambda:
  //   g(k) = sum(x^k ln x)/sum(x^k) - 1/k - mean(ln x over events) = 0.
  // Times are rescaled by their maximum so x^k stays representable at
  // large k; the rescale adds ln(max_x) back to the weighted-log term.
  const auto profile = [&](double k) {
    double s = 0.0, s_log = 0.0;
    for (const auto& obs : data) {
      const double u = obs.time / max_x;
      const double uk = std::pow(u, k);
      s += uk;
      s_log += uk * std::log(u);
    }
    return (s_log / s + std::log(max_x)) - 1.0 / k - sum_log_events / events;
  };

  double lo = 1e-3, hi = 1.0;
  while (profile(hi) < 0.0 && hi < 1e3) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (profile(mid) < 0.0) lo = mid; else hi = mid;
  }
  const double k = 0.5 * (lo + hi);

  double s = 0.0;
  for (const auto& obs : data) s += std::pow(obs.time / max_x, k);
  const double lambda = max_x * std::pow(s / events, 1.0 / k);
  return WeibullMle{lambda, k};
}

}  // namespace bnswarm

#pragma once

#include <vector>

namespace bnswarm {

// One pooled first-passage observation. A censored entry means the robot had
// not reached the target when the trial ended, so only a lower bound on its
// passage time is known.
struct Observation {
  double time = 0.0;  // seconds, > 0
  bool censored = false;
};

struct KmStep {
  double time = 0.0;  // event time
  double cdf = 0.0;   // value of 1 - S right of this time
  int events = 0;     // deaths at this time
  int at_risk = 0;    // subjects at risk just before this time
};

struct KmCurve {
  std::vector<KmStep> steps;  // ascending event times; empty when all censored
  int n_events = 0;
  int n_censored = 0;
  bool all_censored = false;  // CDF identically zero
};

// Product-limit estimator of the first-passage CDF. Ties between an event and
// a censoring at the same time count the censored subject as still at risk
// (events first, the usual convention).
KmCurve kaplan_meier(const std::vector<Observation>& data);

struct WeibullFit {
  double lambda = 0.0;    // scale
  double k = 0.0;         // shape
  double mean_fpt = 0.0;  // lambda * Gamma(1 + 1/k); +inf when degenerate
  double residual = 0.0;  // sum of squared CDF residuals at the fit points
  int n_events = 0;
  int n_censored = 0;
  // Too few interior CDF points to fit (e.g. everything censored). The
  // mean_fpt sentinel is +inf so downstream ranking still works.
  bool degenerate = false;
};

// Least-squares fit of 1 - exp(-(x/lambda)^k) against the estimator's step
// midpoints, seeded by the ln(-ln(1-F)) linearisation. Needs at least three
// steps with midpoints strictly inside (0, 1); otherwise returns a
// degenerate fit instead of failing, so a worthless controller simply scores
// +inf.
WeibullFit fit_weibull(const KmCurve& curve);

// Convenience: estimator plus fit in one call.
WeibullFit fit_weibull(const std::vector<Observation>& data);

// Mean of a Weibull(lambda, k) variable.
double weibull_mean(double lambda, double k);

// Censored maximum-likelihood estimate, used only to cross-check the
// least-squares fit. Returns {lambda, k}; throws std::invalid_argument when
// there are no events.
struct WeibullMle {
  double lambda = 0.0;
  double k = 0.0;
};
WeibullMle weibull_mle(const std::vector<Observation>& data);

}  // namespace bnswarm

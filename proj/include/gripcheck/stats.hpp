// Exact one-sided binomial confidence bounds. The lower bound L for k
// successes in n trials solves P(Bin(n, L) >= k) = 1 - confidence, computed
// through the regularized incomplete beta function I_p(k, n-k+1) and a
// bisection that is monotone and fully deterministic.
#pragma once

#include <cmath>
#include <stdexcept>

namespace gripcheck {

namespace stats_detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) break;
  }
  return h;
}

}  // namespace stats_detail

// I_x(a, b), regularized. a, b > 0; x in [0, 1].
inline double reg_incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw std::invalid_argument("reg_incomplete_beta: a, b must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * stats_detail::beta_cf(a, b, x) / a;
  return 1.0 - front * stats_detail::beta_cf(b, a, 1.0 - x) / b;
}

// Exact Clopper-Pearson lower confidence bound for a binomial proportion,
// one-sided at the given confidence (default 95%). k = 0 gives 0.
inline double clopper_pearson_lower(unsigned k, unsigned n, double confidence = 0.95) {
  if (n == 0) return 0.0;
  if (k > n) throw std::invalid_argument("clopper_pearson_lower: k > n");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("clopper_pearson_lower: confidence must be in (0,1)");
  if (k == 0) return 0.0;
  const double alpha = 1.0 - confidence;
  const double a = double(k);
  const double b = double(n - k) + 1.0;
  // I_p(a, b) = P(X >= k | p) rises monotonically from 0 to 1 in p.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (reg_incomplete_beta(a, b, mid) < alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace gripcheck

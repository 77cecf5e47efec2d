#include "fairaug/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fairaug/error.hpp"

namespace fairaug::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("mean of an empty series");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

MeanStd mean_std(std::span<const double> xs) {
  if (xs.size() < 2) throw DomainError("standard deviation needs at least 2 values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b);
// valid (fast-converging) for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 100000;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw DomainError("incomplete beta continued fraction did not converge");
}

// I_x(a, b) with y = 1 - x supplied separately to keep precision when
// x is close to 1.
double ibeta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

// P(T > |t|).
double upper_tail(double t, double dof) {
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  const double x = dof / (dof + t2);
  const double y = t2 / (dof + t2);
  return 0.5 * ibeta(dof / 2.0, 0.5, x, y);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta needs x in [0, 1]");
  return ibeta(a, b, x, 1.0 - x);
}

double t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw DomainError("t distribution needs dof > 0");
  if (std::isnan(t)) throw DomainError("t_cdf of NaN");
  if (t == 0.0) return 0.5;
  const double tail = upper_tail(t, dof);
  return t > 0.0 ? 1.0 - tail : tail;
}

double t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw DomainError("t distribution needs dof > 0");
  if (t == 0.0) return 1.0;
  return std::clamp(2.0 * upper_tail(t, dof), 0.0, 1.0);
}

Correlation pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("pearson: series lengths differ");
  if (xs.size() < 3) throw DomainError("pearson needs at least 3 pairs");
  const double mx = mean(xs), my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (sxx == 0.0 || syy == 0.0 || constant(xs) || constant(ys)) {
    throw DomainError("pearson: constant series");
  }
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(xs.size() - 2);
  const double one_minus_r2 = 1.0 - r * r;
  double p = 0.0;
  if (one_minus_r2 > 0.0) {
    p = t_two_sided_p(r * std::sqrt(dof / one_minus_r2), dof);
  }
  return {r, p};
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("paired t-test: lengths differ");
  if (a.size() < 2) throw DomainError("paired t-test needs at least 2 pairs");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const auto [m, sd] = mean_std(d);
  TTestResult r;
  r.dof = static_cast<int>(d.size() - 1);
  r.mean_diff = m;
  if (sd == 0.0) {
    if (m == 0.0) {
      r.t_statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), m);
      r.p_value = 0.0;
    }
    return r;
  }
  r.t_statistic = m / (sd / std::sqrt(static_cast<double>(d.size())));
  r.p_value = t_two_sided_p(r.t_statistic, r.dof);
  return r;
}

}  // namespace fairaug::stats

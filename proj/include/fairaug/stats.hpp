#pragma once

#include <span>

namespace fairaug::stats {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1 denominator)
};

// Throws DomainError when xs has fewer than 2 values.
MeanStd mean_std(std::span<const double> xs);
double mean(std::span<const double> xs);

struct Correlation {
  double r = 0.0;
  double p_value = 1.0;  // two-sided, Student t with n - 2 dof
};

// Product-moment correlation. Throws DomainError for n < 3, unequal
// lengths or a constant series.
Correlation pearson(std::span<const double> xs, std::span<const double> ys);

struct TTestResult {
  double t_statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  double mean_diff = 0.0;
};

// Two-sided paired t-test on d = a - b. Zero-variance differences give
// t = 0, p = 1 when the mean difference is zero, otherwise t = +/-inf, p = 0.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// CDF of Student's t with `dof` degrees of freedom.
double t_cdf(double t, double dof);

// P(|T| >= |t|).
double t_two_sided_p(double t, double dof);

}  // namespace fairaug::stats

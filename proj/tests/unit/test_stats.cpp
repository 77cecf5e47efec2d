#include <doctest.h>

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fairaug/error.hpp"
#include "fairaug/stats.hpp"

using namespace fairaug;
using stats::mean_std;

namespace {

// Reference values in long double with Boost's t distribution for tails.
double ref_two_sided(double t, double dof) {
  boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

struct RefPearson {
  double r, p;
};

RefPearson ref_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const long double mx = sx / n, my = sy / n;
  long double cxy = 0, cxx = 0, cyy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cxy += (x[i] - mx) * (y[i] - my);
    cxx += (x[i] - mx) * (x[i] - mx);
    cyy += (y[i] - my) * (y[i] - my);
  }
  const double r = static_cast<double>(cxy / std::sqrt(cxx * cyy));
  const double t = r * std::sqrt((n - 2) / (1 - r * r));
  return {r, ref_two_sided(t, static_cast<double>(n - 2))};
}

}  // namespace

TEST_CASE("mean and sample std") {
  const std::vector<double> ones{1, 1, 1};
  CHECK(mean_std(ones).mean == 1.0);
  CHECK(mean_std(ones).std == 0.0);
  const std::vector<double> two{0, 2};
  CHECK(mean_std(two).mean == 1.0);
  CHECK(mean_std(two).std == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const std::vector<double> eight{2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(mean_std(eight).mean == 5.0);
  CHECK(mean_std(eight).std == doctest::Approx(std::sqrt(32.0 / 7.0)).epsilon(1e-15));
  CHECK(mean_std(eight).std == doctest::Approx(2.138).epsilon(1e-3));
  const std::vector<double> one{4};
  CHECK_THROWS_AS(mean_std(one), DomainError);
}

TEST_CASE("t_cdf closed forms") {
  for (double dof : {1.0, 2.0, 7.0, 30.0, 1000.0}) CHECK(stats::t_cdf(0.0, dof) == 0.5);
  for (double t : {-20.0, -3.0, -1.0, -0.25, 0.1, 1.0, 2.5, 40.0}) {
    CHECK(std::fabs(stats::t_cdf(t, 1) - (0.5 + std::atan(t) / std::numbers::pi)) <= 1e-10);
    // dof 2 also has a closed form.
    CHECK(std::fabs(stats::t_cdf(t, 2) - (0.5 + t / (2 * std::sqrt(2 + t * t)))) <= 1e-10);
  }
  CHECK(stats::t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(stats::t_cdf(2.228, 10) == doctest::Approx(0.975).epsilon(1e-4));
}

TEST_CASE("t_cdf against the reference oracle") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> t(-12, 12);
  for (int i = 0; i < 2000; ++i) {
    const double dof = 1 + static_cast<double>(gen() % 200);
    const double x = t(gen);
    boost::math::students_t dist(dof);
    CHECK(std::fabs(stats::t_cdf(x, dof) - boost::math::cdf(dist, x)) <= 1e-10);
  }
}

TEST_CASE("property: t_cdf symmetry and monotonicity") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> t(0, 50);
  for (int i = 0; i < 1000; ++i) {
    const double dof = 1 + static_cast<double>(gen() % 500);
    const double x = t(gen);
    CHECK(std::fabs(stats::t_cdf(-x, dof) + stats::t_cdf(x, dof) - 1.0) <= 1e-10);
  }
  for (double dof : {1.0, 3.0, 12.0}) {
    double prev = stats::t_cdf(-10.0, dof);
    for (double x = -9.9; x < 10.0; x += 0.1) {
      const double cur = stats::t_cdf(x, dof);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("incomplete beta edge values") {
  CHECK(stats::incomplete_beta(2, 3, 0) == 0.0);
  CHECK(stats::incomplete_beta(2, 3, 1) == 1.0);
  // I_x(1, 1) = x, I_x(a, 1) = x^a.
  CHECK(stats::incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(stats::incomplete_beta(3, 1, 0.5) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK_THROWS_AS(stats::incomplete_beta(0, 1, 0.5), DomainError);
  CHECK_THROWS_AS(stats::incomplete_beta(1, 1, 1.5), DomainError);
}

TEST_CASE("pearson examples") {
  std::vector<double> x{1, 2, 3, 4, 5.5}, y, z;
  for (double v : x) {
    y.push_back(3 * v + 2);
    z.push_back(-v);
  }
  const auto pos = stats::pearson(x, y);
  CHECK(pos.r == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pos.p_value == doctest::Approx(0.0));
  CHECK(stats::pearson(x, z).r == -1.0);
  const std::vector<double> flat{2, 2, 2, 2, 2};
  CHECK_THROWS_AS(stats::pearson(x, flat), DomainError);
  const std::vector<double> two{1, 2};
  CHECK_THROWS_AS(stats::pearson(two, two), DomainError);
}

TEST_CASE("pearson and paired t against the reference oracle") {
  std::mt19937_64 gen(29);
  std::normal_distribution<double> nd(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + gen() % 40;
    std::vector<double> x(n), y(n);
    const double rho = std::uniform_real_distribution<double>(-0.9, 0.9)(gen);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = nd(gen);
      y[i] = rho * x[i] + nd(gen);
    }
    const auto got = stats::pearson(x, y);
    const auto ref = ref_pearson(x, y);
    CHECK(std::fabs(got.r - ref.r) <= 1e-12);
    CHECK(std::fabs(got.p_value - ref.p) <= 1e-9);

    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = 0.8 + 0.05 * nd(gen);
      b[i] = a[i] - 0.01 - 0.02 * nd(gen);
    }
    const auto tt = stats::paired_t_test(a, b);
    long double md = 0;
    for (std::size_t i = 0; i < n; ++i) md += a[i] - b[i];
    md /= n;
    long double ss = 0;
    for (std::size_t i = 0; i < n; ++i) ss += (a[i] - b[i] - md) * (a[i] - b[i] - md);
    const double t_ref = static_cast<double>(md / (std::sqrt(ss / (n - 1)) / std::sqrt((long double)n)));
    CHECK(std::fabs(tt.t_statistic - t_ref) <= 1e-12 * std::max(1.0, std::fabs(t_ref)));
    CHECK(std::fabs(tt.p_value - ref_two_sided(t_ref, n - 1.0)) <= 1e-9);
    CHECK(tt.dof == static_cast<int>(n - 1));
  }
}

TEST_CASE("property: pearson is invariant under positive affine maps") {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> nd(0, 1);
  std::uniform_real_distribution<double> scale(0.5, 4), shift(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(20), y(20), x2(20);
    for (int i = 0; i < 20; ++i) {
      x[i] = nd(gen);
      y[i] = x[i] + nd(gen);
    }
    const double a = scale(gen), c = shift(gen);
    for (int i = 0; i < 20; ++i) x2[i] = a * x[i] + c;
    CHECK(std::fabs(stats::pearson(x, y).r - stats::pearson(x2, y).r) <= 1e-12);
  }
}

TEST_CASE("paired t-test conventions") {
  const std::vector<double> a{0.5, 0.6, 0.7}, d1{1.5, 1.6, 1.7};
  const auto same = stats::paired_t_test(a, a);
  CHECK(same.t_statistic == 0.0);
  CHECK(same.p_value == 1.0);
  const std::vector<double> p{2, 3, 4, 5}, q{1, 2, 3, 4};
  const auto shifted = stats::paired_t_test(p, q);
  CHECK(shifted.t_statistic == std::numeric_limits<double>::infinity());
  CHECK(shifted.p_value == 0.0);
  CHECK(stats::paired_t_test(q, p).t_statistic == -std::numeric_limits<double>::infinity());
  const std::vector<double> one{1};
  CHECK_THROWS_AS(stats::paired_t_test(one, one), DomainError);
  CHECK_THROWS_AS(stats::paired_t_test(a, p), DomainError);

  // Textbook pairs: d = {2, 4, 1, 3, 5} -> mean 3, sd sqrt(2.5), t = 3 / (sqrt(2.5)/sqrt(5)).
  const std::vector<double> before{10, 12, 9, 11, 14}, after{8, 8, 8, 8, 9};
  const auto r = stats::paired_t_test(before, after);
  CHECK(r.t_statistic == doctest::Approx(3.0 / std::sqrt(0.5)).epsilon(1e-14));
  CHECK(r.p_value == doctest::Approx(ref_two_sided(r.t_statistic, 4)).epsilon(1e-12));
}

TEST_CASE("property: paired t is antisymmetric") {
  std::mt19937_64 gen(37);
  std::normal_distribution<double> nd(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 10;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = nd(gen);
      b[i] = nd(gen);
    }
    CHECK(stats::paired_t_test(a, b).t_statistic == -stats::paired_t_test(b, a).t_statistic);
  }
}

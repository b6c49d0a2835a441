#include "doctest.h"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "riskdiff/core.hpp"

using namespace riskdiff;

TEST_CASE("design and table invariants") {
  CHECK_THROWS_AS(TrialDesign(0, 5), std::domain_error);
  CHECK_THROWS_AS(TrialDesign(3, -1), std::domain_error);
  CHECK(TrialDesign(8, 19).space_size() == 180);
  CHECK(TrialDesign(1, 1).space_size() == 4);

  TrialDesign d(4, 6);
  CHECK(table_valid({0, 0}, d));
  CHECK(table_valid({4, 6}, d));
  CHECK_FALSE(table_valid({5, 0}, d));
  CHECK_FALSE(table_valid({0, 7}, d));
  CHECK_THROWS_AS(require_valid({-1, 0}, d), std::domain_error);
}

TEST_CASE("null point admissibility") {
  CHECK(NullPoint{0.5, 0.0}.admissible());
  CHECK(NullPoint{0.3, 0.3}.admissible());
  CHECK_FALSE(NullPoint{0.2, 0.3}.admissible());
  CHECK_FALSE(NullPoint{0.95, -0.1}.admissible());
  CHECK(NullPoint{1.0, 1.0}.admissible());
  CHECK_THROWS_AS(Margin(-0.1), std::domain_error);
  CHECK_THROWS_AS(Margin(1.0), std::domain_error);
}

TEST_CASE("joint pmf examples") {
  TrialDesign d(3, 4);
  // all mass on the single admissible table at (p_t, delta) = (1, 1)
  CHECK(joint_pmf({3, 0}, d, {1.0, 1.0}) == 1.0);

  // product of two Binomial(2, 0.5) pmfs at 1: (2*0.25)*(2*0.25) = 0.25
  TrialDesign d2(2, 2);
  CHECK(joint_pmf({1, 1}, d2, {0.5, 0.0}) == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(joint_pmf({1, 1}, d2, {0.2, 0.5}), std::domain_error);
  CHECK_THROWS_AS(joint_pmf({5, 1}, d2, {0.5, 0.0}), std::domain_error);
}

TEST_CASE("pmf sums to one over the sample space") {
  for (int nt = 1; nt <= 6; ++nt) {
    for (int nc = 1; nc <= 6; ++nc) {
      TrialDesign d(nt, nc);
      const auto tables = enumerate_space(d);
      for (int i = 0; i <= 20; ++i) {
        const double delta = -1.0 + 2.0 * i / 20.0;
        for (int j = 0; j <= 20; ++j) {
          const double lo = std::max(0.0, delta);
          const double hi = std::min(1.0, 1.0 + delta);
          const double p_t = lo + (hi - lo) * j / 20.0;
          double sum = 0.0;
          for (const auto& t : tables) {
            const double v = joint_pmf(t, d, {p_t, delta});
            REQUIRE(v >= 0.0);
            sum += v;
          }
          REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("enumerate_space ordering and cardinality") {
  TrialDesign d(1, 1);
  const auto s = enumerate_space(d);
  REQUIRE(s.size() == 4);
  CHECK(s[0] == ObservedTable{0, 0});
  CHECK(s[1] == ObservedTable{0, 1});
  CHECK(s[2] == ObservedTable{1, 0});
  CHECK(s[3] == ObservedTable{1, 1});

  CHECK(enumerate_space(TrialDesign(8, 19)).size() == 180);
  CHECK_THROWS_AS(TrialDesign(0, 3), std::domain_error);

  // no duplicates, index round-trip
  for (int nt = 1; nt <= 5; ++nt)
    for (int nc = 1; nc <= 5; ++nc) {
      TrialDesign dd(nt, nc);
      const auto v = enumerate_space(dd);
      std::set<std::pair<int, int>> seen;
      for (size_t i = 0; i < v.size(); ++i) {
        seen.insert({v[i].x_t, v[i].x_c});
        CHECK(table_index(v[i], dd) == static_cast<int>(i));
        CHECK(table_at(static_cast<int>(i), dd) == v[i]);
      }
      CHECK(seen.size() == v.size());
    }
}

TEST_CASE("normal cdf basics") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  for (double z : {0.5, 1.0, 2.0, 5.0})
    CHECK(std_normal_cdf(-z) + std_normal_cdf(z) ==
          doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std_normal_cdf(std::numeric_limits<double>::infinity()) == 1.0);
  CHECK(std_normal_cdf(-std::numeric_limits<double>::infinity()) == 0.0);

  // reference values (Abramowitz-Stegun style, 1e-12 contract)
  CHECK(std_normal_cdf(1.0) == doctest::Approx(0.841344746068543).epsilon(1e-12));
  CHECK(std_normal_cdf(-2.0) == doctest::Approx(0.0227501319481792).epsilon(1e-12));
  CHECK(std_normal_cdf(8.0) == doctest::Approx(1.0).epsilon(1e-15));

  double prev = -1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double z = -8.0 + 16.0 * i / 10000.0;
    const double p = std_normal_cdf(z);
    REQUIRE(p >= prev);
    prev = p;
  }
}

TEST_CASE("normal quantile contract") {
  CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::isinf(std_normal_quantile(0.0)));
  CHECK(std_normal_quantile(0.0) < 0.0);
  CHECK(std::isinf(std_normal_quantile(1.0)));
  CHECK(std_normal_quantile(1.0) > 0.0);
  CHECK_THROWS_AS(std_normal_quantile(-0.1), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.5), std::domain_error);

  // bisection on the cdf as the oracle
  auto bisect = [](double p) {
    double a = -10.0, b = 10.0;
    while (b - a > 1e-12) {
      const double m = 0.5 * (a + b);
      (std_normal_cdf(m) < p ? a : b) = m;
    }
    return 0.5 * (a + b);
  };
  CHECK(std_normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
  for (double p : {0.001, 0.025, 0.1, 0.3, 0.5, 0.7, 0.9, 0.975, 0.999})
    CHECK(std_normal_quantile(p) == doctest::Approx(bisect(p)).epsilon(1e-9));
}

TEST_CASE("quantile/cdf roundtrip") {
  // Inside |z| <= 5.4 the 1e-9 roundtrip bound is attainable; beyond it the
  // double representation of the cdf itself moves the inverse by up to
  // ulp(p)/pdf(z) (about 1.8e-8 at z = 6), so the bound widens accordingly.
  for (int i = 0; i <= 2400; ++i) {
    const double z = -6.0 + i * 0.005;
    const double p = std_normal_cdf(z);
    if (p <= 0.0 || p >= 1.0) continue;
    const double back = std_normal_quantile(p);
    const double pdf = std::exp(-0.5 * z * z) * 0.3989422804014327;
    const double floor_err = 0.5 * std::ldexp(1.0, -52) / pdf;
    if (std::fabs(z) <= 5.4)
      REQUIRE(std::fabs(back - z) <= 1e-9);
    else
      REQUIRE(std::fabs(back - z) <= 1e-9 + floor_err);
  }
}

TEST_CASE("binomial pmf rows") {
  const auto row = binomial_pmf_row(10, 0.3);
  double sum = 0.0;
  for (double v : row) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(row[3] == doctest::Approx(0.266827932).epsilon(1e-8));

  // extreme p stays finite and normalized
  const auto hi = binomial_pmf_row(500, 0.999);
  double s2 = 0.0;
  for (double v : hi) s2 += v;
  CHECK(s2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(binomial_pmf_row(7, 0.0)[0] == 1.0);
  CHECK(binomial_pmf_row(7, 1.0)[7] == 1.0);
}

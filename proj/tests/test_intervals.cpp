#include "doctest.h"

#include <cmath>

#include "riskdiff/intervals.hpp"
#include "riskdiff/stats.hpp"

using namespace riskdiff;

TEST_CASE("correction term identities") {
  TrialDesign d(8, 19);
  Margin m(0.10);
  EcScore score({5, 10}, d, m);

  // at delta = delta0 the sigma ratio is one
  const double pe = score.exact_p();
  const double probit_pe = std_normal_quantile(1.0 - pe);
  CHECK(score.correction(0.10) ==
        doctest::Approx(score.z_margin() - probit_pe).epsilon(1e-12));
  CHECK(std::fabs(pe - 0.200) < 5e-4);

  // assembled from the rounded table inputs p_asy = 0.172, p_exact = 0.200
  const double rounded = std_normal_quantile(1 - 0.172) -
                         std_normal_quantile(1 - 0.200);
  CHECK(score.correction(0.10) == doctest::Approx(rounded).epsilon(0.02));
}

TEST_CASE("exact-corrected score hits the probit identity at the margin") {
  TrialDesign d(15, 15);
  // Chan's margin for the Fries data
  {
    Margin m(0.1);
    EcScore s({8, 3}, d, m);
    CHECK(s.value(0.1) ==
          doctest::Approx(std_normal_quantile(1.0 - s.exact_p()))
              .epsilon(1e-12));
    CHECK(s.value(0.1) == doctest::Approx(2.39).epsilon(0.02));
  }
  {
    Margin m(0.0);
    EcScore s({8, 3}, d, m);
    CHECK(z_ec({8, 3}, d, m, 0.0) ==
          doctest::Approx(std_normal_quantile(1.0 - s.exact_p()))
              .epsilon(1e-12));
  }
  // Example 1: z_ec at the margin equals probit(1 - 0.200)
  {
    TrialDesign d2(8, 19);
    Margin m(0.10);
    const double z = z_ec({5, 10}, d2, m, 0.10);
    CHECK(std::fabs(z - std_normal_quantile(1 - 0.200442)) < 1e-3);
  }
}

TEST_CASE("degenerate variance raises") {
  TrialDesign d(6, 6);
  Margin m(0.1);
  // delta = 1 forces the restricted estimate to (1, 0): sigma == 0
  CHECK_THROWS_AS(ec_correction({3, 3}, d, m, 1.0), DegenerateVarianceError);
  CHECK_THROWS_AS(z_ec({3, 3}, d, m, -1.0), DegenerateVarianceError);
}

TEST_CASE("wald interval") {
  TrialDesign d(12, 12);
  const auto sym = ci_wald({6, 6}, d, 0.05);
  CHECK(sym.lower == doctest::Approx(-sym.upper).epsilon(1e-12));

  const auto point = ci_wald({12, 12}, d, 0.05);
  CHECK(point.lower == 0.0);
  CHECK(point.upper == 0.0);

  // Kim et al.: Wald declares noninferiority at the 5% margin
  const auto kim = ci_wald({173, 174}, TrialDesign(181, 181), 0.05);
  CHECK(kim.lower > -0.05);
}

TEST_CASE("miettinen-nurminen interval") {
  TrialDesign d(8, 19);
  // theorem consistency on Example 1 at alpha/2 = 0.25
  const auto mn = ci_mn({5, 10}, d, 0.5);
  CHECK(p_asy({5, 10}, d, Margin(0.10)) < 0.25);
  CHECK(mn.lower > -0.10);
  CHECK(mn.monotone_ok);

  // residual check: Z_{-lower} equals the normal quantile
  for (auto [xt, xc] : {std::pair{3, 5}, {6, 12}, {2, 17}}) {
    const auto ci = ci_mn({xt, xc}, d, 0.05);
    if (ci.lower > -1.0 && ci.lower < 1.0) {
      const double res = z_delta({xt, xc}, d, -ci.lower);
      CHECK(res == doctest::Approx(std_normal_quantile(0.975)).epsilon(1e-4));
    }
    if (ci.upper > -1.0 && ci.upper < 1.0) {
      const double res = z_delta({xt, xc}, d, -ci.upper);
      CHECK(res == doctest::Approx(std_normal_quantile(0.025)).epsilon(1e-4));
    }
  }

  // The 1x1 all-failure table solves -d/(1+d) = z^2 analytically; the
  // interval is wide but does not saturate.
  const auto tiny = ci_mn({0, 0}, TrialDesign(1, 1), 0.05);
  const double zq = std_normal_quantile(0.975);
  CHECK(tiny.lower ==
        doctest::Approx(-zq * zq / (1 + zq * zq)).epsilon(1e-4));
  CHECK(tiny.upper == doctest::Approx(zq * zq / (1 + zq * zq)).epsilon(1e-4));
}

TEST_CASE("chan-zhang interval") {
  // Example 2: p_cz = 0.030 > 0.025 so the lower bound sits at or below
  // the margin
  TrialDesign d(6, 6);
  const auto cz = ci_cz({5, 2}, d, 0.05);
  CHECK(cz.lower <= -0.12);

  // scan consistency at a finer step
  GridConfig fine;
  fine.delta_step = 5e-4;
  const auto cz2 = ci_cz({5, 2}, d, 0.05, fine);
  CHECK(std::fabs(cz.lower - cz2.lower) < 2e-3);
  CHECK(std::fabs(cz.upper - cz2.upper) < 2e-3);
}

TEST_CASE("fries interval comparison") {
  TrialDesign d(15, 15);
  Margin m(0.0);
  const auto ec = ci_ec({8, 3}, d, m, 0.05);
  const auto cz = ci_cz({8, 3}, d, 0.05);
  const auto mn = ci_mn({8, 3}, d, 0.05);
  const auto wd = ci_wald({8, 3}, d, 0.05);

  CHECK(ec.upper < cz.upper);
  CHECK(std::round(ec.lower * 1000) == std::round(cz.lower * 1000));

  // EC, CZ, MN contain zero; Wald does not
  CHECK(ec.lower < 0.0);
  CHECK(cz.lower < 0.0);
  CHECK(mn.lower < 0.0);
  CHECK(wd.lower > 0.0);
}

TEST_CASE("theorem biconditionals at the ten-percent level") {
  // Complements the acceptance sweep (alpha 0.05 and 0.5) with alpha = 0.1
  // on smaller designs.
  const double alpha = 0.1;
  for (int nt = 1; nt <= 5; ++nt) {
    for (int nc = 1; nc <= 5; ++nc) {
      TrialDesign d(nt, nc);
      const auto czlow = cz_lower_all(d, alpha);
      for (double d0 : {0.0, 0.1}) {
        Margin m(d0);
        const auto pe = p_exact_all(d, m);
        const auto pcz = p_cz_all(d, m, {}, &pe);
        for (int i = 0; i < d.space_size(); ++i) {
          const auto t = table_at(i, d);
          REQUIRE((p_asy(t, d, m) <= alpha / 2) ==
                  (ci_mn(t, d, alpha).lower > -d0));
          REQUIRE((pcz[i] <= alpha / 2) == (czlow[i] > -d0));
          const auto ec = ci_ec(t, d, m, alpha);
          REQUIRE((pe[i].value <= alpha / 2) == (ec.lower > -d0));

          // MN and EC agree whenever the correction vanishes at both bounds
          const EcScore score(t, d, m);
          auto corr_at = [&](double bound) {
            if (bound <= -1.0 || bound >= 1.0) return 1.0;
            try {
              return score.correction(-bound);
            } catch (const DegenerateVarianceError&) {
              return 1.0;
            }
          };
          if (std::fabs(corr_at(ec.lower)) < 1e-9 &&
              std::fabs(corr_at(ec.upper)) < 1e-9) {
            const auto mn = ci_mn(t, d, alpha);
            REQUIRE(std::fabs(ec.lower - mn.lower) < 1e-6);
            REQUIRE(std::fabs(ec.upper - mn.upper) < 1e-6);
          }
        }
      }
    }
  }
}

TEST_CASE("exact-corrected interval decisions") {
  // Example 2: EC rejects while CZ accepts at alpha/2 = 0.025
  TrialDesign d(6, 6);
  Margin m(0.12);
  const auto ec = ci_ec({5, 2}, d, m, 0.05);
  CHECK(ec.lower > -0.12);
  const auto cz = ci_cz({5, 2}, d, 0.05);
  CHECK(cz.lower <= -0.12);

  // Example 3 consistency
  TrialDesign d3(18, 25);
  Margin m3(0.10);
  const auto ec3 = ci_ec({7, 5}, d3, m3, 0.05);
  CHECK(p_exact({7, 5}, d3, m3).value <= 0.025);
  CHECK(ec3.lower > -0.10);
}

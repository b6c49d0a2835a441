#include "doctest.h"

#include <cmath>

#include "riskdiff/oracle.hpp"

using namespace riskdiff;

TEST_CASE("oracle restricted mle") {
  TrialDesign d(9, 13);
  const auto pooled = oracle::oracle_rmle({4, 6}, d, 0.0);
  CHECK(pooled.p_t_tilde == doctest::Approx(10.0 / 22).epsilon(1e-8));

  const auto corner = oracle::oracle_rmle({4, 6}, d, 1.0);
  CHECK(corner.p_t_tilde == 1.0);
  CHECK(corner.p_c_tilde == 0.0);
}

TEST_CASE("closed form vs oracle over random cases") {
  const auto rep = oracle::verify_rmle(1000, 20240817);
  CHECK(rep.cases == 1000);
  CHECK(rep.max_abs_deviation < 1e-6);
}

TEST_CASE("oracle size endpoints") {
  TrialDesign d(3, 3);
  Margin m(0.1);
  DecisionSet empty{d, Method::ec, m, 0.05, std::vector<char>(16, 0)};
  DecisionSet full{d, Method::ec, m, 0.05, std::vector<char>(16, 1)};
  CHECK(oracle::oracle_size(empty) == 0.0);
  CHECK(oracle::oracle_size(full) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cross-resolution agreement on the second example design") {
  TrialDesign d(6, 6);
  Margin m(0.12);
  const auto region = critical_region(d, m, 0.05, Method::ec);
  const auto rep = oracle::verify_maxsize(region);
  CHECK(rep.max_abs_deviation < 1e-3);
}

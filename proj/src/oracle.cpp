#include "riskdiff/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riskdiff::oracle {

namespace {

// Independent reimplementation of the constrained log-likelihood; this file
// must not share code with the closed-form path it checks.
double loglik(const ObservedTable& t, const TrialDesign& dsn, double d,
              double p) {
  const double q = p - d;
  double ll = 0.0;
  const int terms[4] = {t.x_t, dsn.n_t - t.x_t, t.x_c, dsn.n_c - t.x_c};
  const double probs[4] = {p, 1.0 - p, q, 1.0 - q};
  for (int i = 0; i < 4; ++i) {
    if (terms[i] == 0) continue;
    if (probs[i] <= 0.0) return -std::numeric_limits<double>::infinity();
    ll += terms[i] * std::log(probs[i]);
  }
  return ll;
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

RestrictedEstimate oracle_rmle(const ObservedTable& table,
                               const TrialDesign& design, double d) {
  require_valid(table, design);
  const double lo = std::max(0.0, d);
  const double hi = std::min(1.0, 1.0 + d);
  if (hi - lo <= 1e-15) return {lo, lo - d, d};

  const double step = 1e-5;
  double best_p = lo, best_f = loglik(table, design, d, lo);
  const int n = static_cast<int>((hi - lo) / step) + 1;
  for (int i = 1; i <= n; ++i) {
    const double p = std::min(hi, lo + i * step);
    const double f = loglik(table, design, d, p);
    if (f > best_f) {
      best_f = f;
      best_p = p;
    }
  }

  double a = std::max(lo, best_p - step), b = std::min(hi, best_p + step);
  const double gr = 0.6180339887498948482;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = loglik(table, design, d, x1), f2 = loglik(table, design, d, x2);
  while (b - a > 1e-9) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = loglik(table, design, d, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = loglik(table, design, d, x1);
    }
  }
  double p = 0.5 * (a + b);
  if (loglik(table, design, d, best_p) > loglik(table, design, d, p))
    p = best_p;
  return {p, p - d, d};
}

double oracle_size(const DecisionSet& region) {
  const auto& design = region.design;
  const double delta0 = region.margin.delta0;
  const double dstep = 2e-3 / 4.0;
  const int npts = 501 * 4 - 3;
  std::vector<double> pmf_t, pmf_c;
  double best = 0.0;
  const int nc1 = design.n_c + 1;
  for (double d = -1.0; d <= -delta0 + 1e-15; d += dstep) {
    const double dd = std::min(d, -delta0);
    const double lo = std::max(0.0, dd), hi = std::min(1.0, 1.0 + dd);
    for (int i = 0; i < npts; ++i) {
      const double p = lo + (hi - lo) * i / (npts - 1.0);
      binomial_pmf_row(design.n_t, p, pmf_t);
      binomial_pmf_row(design.n_c, std::min(1.0, std::max(0.0, p - dd)),
                       pmf_c);
      double sum = 0.0;
      for (int k = 0; k < design.space_size(); ++k)
        if (region.rejected[k]) sum += pmf_t[k / nc1] * pmf_c[k % nc1];
      best = std::max(best, sum);
    }
  }
  return best;
}

OracleReport verify_rmle(int cases, std::uint64_t seed) {
  OracleReport rep{"restricted_mle", 0.0, cases};
  for (int c = 0; c < cases; ++c) {
    const auto r = [&](int salt, int m) {
      return static_cast<int>(mix64(seed ^ mix64(c * 4 + salt)) % m);
    };
    const TrialDesign design(1 + r(0, 30), 1 + r(1, 30));
    const ObservedTable t{r(2, design.n_t + 1), r(3, design.n_c + 1)};
    const double d =
        -0.95 + 1.9 * (mix64(seed ^ mix64(c * 4 + 7)) >> 11) * 0x1.0p-53;
    const auto closed = restricted_mle(t, design, d);
    const auto brute = oracle_rmle(t, design, d);
    rep.max_abs_deviation = std::max(
        rep.max_abs_deviation, std::fabs(closed.p_t_tilde - brute.p_t_tilde));
  }
  return rep;
}

OracleReport verify_maxsize(const DecisionSet& region) {
  OracleReport rep{"maximal_size", 0.0, 1};
  const double fine = oracle_size(region);
  const double coarse = maximal_size(region).value;
  rep.max_abs_deviation = std::fabs(fine - coarse);
  return rep;
}

}  // namespace riskdiff::oracle

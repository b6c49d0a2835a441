#include "riskdiff/rmle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskdiff {

namespace {

// Constrained log-likelihood in p_t (p_c = p_t - d); strictly concave.
double constrained_loglik(const ObservedTable& t, const TrialDesign& dsn,
                          double d, double p) {
  const double q = p - d;
  double ll = 0.0;
  auto add = [&ll](int k, double prob) {
    if (k == 0) return;
    if (prob <= 0.0) {
      ll = -std::numeric_limits<double>::infinity();
      return;
    }
    ll += k * std::log(prob);
  };
  add(t.x_t, p);
  add(dsn.n_t - t.x_t, 1.0 - p);
  add(t.x_c, q);
  add(dsn.n_c - t.x_c, 1.0 - q);
  return ll;
}

// Golden-section fallback on the admissible segment; the likelihood is
// concave so no bracketing scan is needed.
double golden_argmax(const ObservedTable& t, const TrialDesign& dsn, double d,
                     double lo, double hi, double tol) {
  const double gr = 0.6180339887498948482;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = constrained_loglik(t, dsn, d, x1);
  double f2 = constrained_loglik(t, dsn, d, x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = constrained_loglik(t, dsn, d, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = constrained_loglik(t, dsn, d, x1);
    }
  }
  // Endpoints can beat the interior when the maximizer sits on the boundary.
  double best = 0.5 * (a + b);
  double fbest = constrained_loglik(t, dsn, d, best);
  for (double cand : {lo, hi}) {
    const double fc = constrained_loglik(t, dsn, d, cand);
    if (fc > fbest) {
      fbest = fc;
      best = cand;
    }
  }
  return best;
}

}  // namespace

RestrictedEstimate restricted_mle(const ObservedTable& table,
                                  const TrialDesign& design, double d) {
  require_valid(table, design);
  if (!(d >= -1.0 && d <= 1.0))
    throw std::domain_error("restricted_mle: d outside [-1, 1]");

  const double lo = std::max(0.0, d);
  const double hi = std::min(1.0, 1.0 + d);

  if (d == 1.0) return {1.0, 0.0, d};
  if (d == -1.0) return {0.0, 1.0, d};
  if (d == 0.0) {
    const double pooled =
        static_cast<double>(table.x_t + table.x_c) / (design.n_t + design.n_c);
    return {pooled, pooled, d};
  }

  // Trigonometric solution of the cubic stationarity equation
  // (Farrington-Manning form) for the constrained maximizer.
  const double pt_hat = static_cast<double>(table.x_t) / design.n_t;
  const double pc_hat = static_cast<double>(table.x_c) / design.n_c;
  const double th = static_cast<double>(design.n_c) / design.n_t;
  const double a = 1.0 + th;
  const double b = -(1.0 + th + pt_hat + th * pc_hat + d * (th + 2.0));
  const double c =
      d * d + d * (2.0 * pt_hat + th + 1.0) + pt_hat + th * pc_hat;
  const double e = -pt_hat * d * (1.0 + d);

  const double b3a = b / (3.0 * a);
  const double v = b3a * b3a * b3a - b * c / (6.0 * a * a) + e / (2.0 * a);
  double disc = b3a * b3a - c / (3.0 * a);
  if (disc < 0.0) disc = 0.0;  // floating-point guard
  const double u = (v >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc);

  double p;
  if (u == 0.0) {
    p = golden_argmax(table, design, d, lo, hi, 1e-9);
  } else {
    double ratio = v / (u * u * u);
    ratio = std::min(1.0, std::max(-1.0, ratio));
    const double w = (M_PI + std::acos(ratio)) / 3.0;
    p = 2.0 * u * std::cos(w) - b3a;
    p = std::min(hi, std::max(lo, p));
  }

#ifndef NDEBUG
  {
    const double ref = golden_argmax(table, design, d, lo, hi, 1e-9);
    if (std::fabs(ref - p) > 1e-6)
      throw std::logic_error("restricted_mle: closed form disagrees with "
                             "golden-section reference");
  }
#endif

  return {p, p - d, d};
}

double sigma_hat(const RestrictedEstimate& est, const TrialDesign& design) {
  const double vt = est.p_t_tilde * (1.0 - est.p_t_tilde) / design.n_t;
  const double vc = est.p_c_tilde * (1.0 - est.p_c_tilde) / design.n_c;
  return std::sqrt(vt + vc);
}

}  // namespace riskdiff

#include "riskdiff/core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x * log(y) with the convention 0 * log(0) = 0, so boundary
// probabilities come out exact.
double xlogy(double x, double y) {
  if (x == 0.0) return 0.0;
  return x * std::log(y);
}

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

TrialDesign::TrialDesign(int n_t_, int n_c_) : n_t(n_t_), n_c(n_c_) {
  if (n_t < 1 || n_c < 1)
    throw std::domain_error("TrialDesign: arm sizes must be >= 1");
}

bool table_valid(const ObservedTable& table, const TrialDesign& design) {
  return table.x_t >= 0 && table.x_t <= design.n_t && table.x_c >= 0 &&
         table.x_c <= design.n_c;
}

void require_valid(const ObservedTable& table, const TrialDesign& design) {
  if (!table_valid(table, design))
    throw std::domain_error("ObservedTable: counts outside the design");
}

bool NullPoint::admissible() const {
  if (!(delta >= -1.0 && delta <= 1.0)) return false;
  const double lo = std::max(0.0, delta);
  const double hi = std::min(1.0, 1.0 + delta);
  return p_t >= lo && p_t <= hi;
}

Margin::Margin(double delta0_) : delta0(delta0_) {
  if (!(delta0 >= 0.0 && delta0 < 1.0))
    throw std::domain_error("Margin: delta0 must lie in [0, 1)");
}

double joint_pmf(const ObservedTable& table, const TrialDesign& design,
                 const NullPoint& point) {
  require_valid(table, design);
  if (!point.admissible())
    throw std::domain_error("NullPoint: inadmissible (p_t, delta)");

  const double p_t = point.p_t;
  // Clamp tiny negative excursions from p_t - delta at admissible corners.
  const double p_c = std::min(1.0, std::max(0.0, p_t - point.delta));

  // A zero base with a positive exponent kills the whole product.
  if ((p_t == 0.0 && table.x_t > 0) || (p_t == 1.0 && table.x_t < design.n_t) ||
      (p_c == 0.0 && table.x_c > 0) || (p_c == 1.0 && table.x_c < design.n_c))
    return 0.0;

  const double log_p = log_choose(design.n_t, table.x_t) +
                       xlogy(table.x_t, p_t) +
                       xlogy(design.n_t - table.x_t, 1.0 - p_t) +
                       log_choose(design.n_c, table.x_c) +
                       xlogy(table.x_c, p_c) +
                       xlogy(design.n_c - table.x_c, 1.0 - p_c);
  return std::exp(log_p);
}

std::vector<ObservedTable> enumerate_space(const TrialDesign& design) {
  std::vector<ObservedTable> out;
  out.reserve(design.space_size());
  for (int a = 0; a <= design.n_t; ++a)
    for (int b = 0; b <= design.n_c; ++b) out.push_back(ObservedTable{a, b});
  return out;
}

double std_normal_cdf(double z) {
  if (std::isnan(z)) throw std::domain_error("std_normal_cdf: NaN input");
  return 0.5 * std::erfc(-z * M_SQRT1_2);
}

namespace {

// Wichura's AS 241 (PPND16) rational approximations.
double quantile_core(double p) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) *
                    r +
                4.5921953931549871457e4) *
                   r +
               1.3731693765509461125e4) *
                  r +
              1.9715909503065514427e3) *
                 r +
             1.3314166789178437745e2) *
                r +
            3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) *
                    r +
                2.1213794301586595867e4) *
                   r +
               5.3941960214247511077e3) *
                  r +
              6.8718700749205790830e2) *
                 r +
             4.2313330701600911252e1) *
                r +
            1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) *
                   r +
               1.27045825245236838258e0) *
                  r +
              3.64784832476320460504e0) *
                 r +
             5.76949722146069140550e0) *
                r +
            4.63033784615654529590e0) *
               r +
           1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) *
                   r +
               1.48103976427480074590e-1) *
                  r +
              6.89767334985100004550e-1) *
                 r +
             1.67638483018380384940e0) *
                r +
            2.05319162663775882187e0) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) *
                   r +
               2.65321895265761230930e-2) *
                  r +
              2.96560571828504891230e-1) *
                 r +
             1.78482653991729133580e0) *
                r +
            5.46378491116411436990e0) *
               r +
           6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                    r +
                1.84631831751005468180e-5) *
                   r +
               7.86869131145613259100e-4) *
                  r +
              1.48753612908506148525e-2) *
                 r +
             1.36929880922735805310e-1) *
                r +
            5.99832206555887937690e-1) *
               r +
           1.0);
  }
  return (q < 0.0) ? -val : val;
}

}  // namespace

double std_normal_quantile(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0)
    throw std::domain_error("std_normal_quantile: p outside [0, 1]");
  if (p == 0.0) return -kInf;
  if (p == 1.0) return kInf;
  double z = quantile_core(p);
  // One Halley step against the erfc-based cdf, worked in the nearer tail.
  const double pdf = std::exp(-0.5 * z * z) * 0.3989422804014326779399461;
  if (pdf > 0.0) {
    double f;
    if (p <= 0.5)
      f = 0.5 * std::erfc(-z * M_SQRT1_2) - p;
    else
      f = (1.0 - p) - 0.5 * std::erfc(z * M_SQRT1_2);
    const double u = f / pdf;
    z -= u / (1.0 + 0.5 * u * z);
  }
  return z;
}

void binomial_pmf_row(int n, double p, std::vector<double>& out) {
  out.assign(n + 1, 0.0);
  if (p <= 0.0) {
    out[0] = 1.0;
    return;
  }
  if (p >= 1.0) {
    out[n] = 1.0;
    return;
  }
  const int mode = std::min(n, static_cast<int>((n + 1) * p));
  const double log_mode = log_choose(n, mode) + mode * std::log(p) +
                          (n - mode) * std::log(1.0 - p);
  out[mode] = std::exp(log_mode);
  const double odds = p / (1.0 - p);
  for (int k = mode; k < n; ++k)
    out[k + 1] = out[k] * odds * (n - k) / (k + 1.0);
  for (int k = mode; k > 0; --k)
    out[k - 1] = out[k] / odds * k / (n - k + 1.0);
}

std::vector<double> binomial_pmf_row(int n, double p) {
  std::vector<double> out;
  binomial_pmf_row(n, p, out);
  return out;
}

}  // namespace riskdiff

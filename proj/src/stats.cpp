#include "riskdiff/stats.hpp"

#include <cmath>
#include <limits>

#include "riskdiff/intervals.hpp"
#include "riskdiff/rmle.hpp"

namespace riskdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_extended(double num, double denom) {
  if (denom == 0.0) {
    if (num == 0.0) return 0.0;
    return num > 0.0 ? kInf : -kInf;
  }
  return num / denom;
}

}  // namespace

double z_delta(const ObservedTable& table, const TrialDesign& design,
               double delta) {
  const auto est = restricted_mle(table, design, -delta);
  const double sig = sigma_hat(est, design);
  const double num = static_cast<double>(table.x_t) / design.n_t -
                     static_cast<double>(table.x_c) / design.n_c + delta;
  return ratio_extended(num, sig);
}

double wald_z(const ObservedTable& table, const TrialDesign& design,
              const Margin& margin) {
  require_valid(table, design);
  const double pt = static_cast<double>(table.x_t) / design.n_t;
  const double pc = static_cast<double>(table.x_c) / design.n_c;
  const double sig =
      std::sqrt(pt * (1.0 - pt) / design.n_t + pc * (1.0 - pc) / design.n_c);
  return ratio_extended(pt - pc + margin.delta0, sig);
}

double p_asy(const ObservedTable& table, const TrialDesign& design,
             const Margin& margin) {
  const double z = z_delta(table, design, margin.delta0);
  if (std::isinf(z)) return z > 0.0 ? 0.0 : 1.0;
  return 1.0 - std_normal_cdf(z);
}

double p_wald(const ObservedTable& table, const TrialDesign& design,
              const Margin& margin) {
  const double z = wald_z(table, design, margin);
  if (std::isinf(z)) return z > 0.0 ? 0.0 : 1.0;
  return 1.0 - std_normal_cdf(z);
}

std::vector<double> statistic_surface(StatisticKind kind,
                                      const TrialDesign& design,
                                      double projection) {
  std::vector<double> s(design.space_size());
  for (int a = 0; a <= design.n_t; ++a) {
    for (int b = 0; b <= design.n_c; ++b) {
      const ObservedTable t{a, b};
      const int i = table_index(t, design);
      s[i] = (kind == StatisticKind::delta_projected)
                 ? z_delta(t, design, projection)
                 : wald_z(t, design, Margin(projection));
    }
  }
  return s;
}

std::vector<AdjacentViolation> barnard_check(StatisticKind kind,
                                             const TrialDesign& design,
                                             const Margin& margin) {
  const auto s = statistic_surface(kind, design, margin.delta0);
  std::vector<AdjacentViolation> out;
  auto at = [&](int a, int b) { return s[a * (design.n_c + 1) + b]; };
  for (int a = 0; a <= design.n_t; ++a) {
    for (int b = 0; b <= design.n_c; ++b) {
      if (b + 1 <= design.n_c && !(at(a, b) >= at(a, b + 1)))
        out.push_back({{a, b}, {a, b + 1}, at(a, b), at(a, b + 1)});
      if (a - 1 >= 0 && !(at(a, b) >= at(a - 1, b)))
        out.push_back({{a, b}, {a - 1, b}, at(a, b), at(a - 1, b)});
    }
  }
  return out;
}

bool nondecreasing_on_grid(const std::function<double(double)>& f, double lo,
                           double hi, double step, double tol) {
  double prev = f(lo);
  for (double x = lo + step; x < hi + step * 0.5; x += step) {
    const double cur = f(std::min(x, hi));
    // Infinities at matching signs count as ties.
    if (std::isinf(prev) && std::isinf(cur) && prev == cur) continue;
    if (cur < prev - tol) return false;
    prev = cur;
  }
  return true;
}

bool monotonicity_check(const ObservedTable& table, const TrialDesign& design,
                        double grid_step, bool use_ec, const Margin& margin) {
  require_valid(table, design);
  if (!(grid_step > 0.0))
    throw std::domain_error("monotonicity_check: grid_step must be positive");
  if (!use_ec) {
    return nondecreasing_on_grid(
        [&](double d) { return z_delta(table, design, d); }, -1.0, 1.0,
        grid_step, 1e-10);
  }
  // The corrected score is swept only where its standard error is positive;
  // at degenerate-variance deltas the score is not defined.
  const EcScore score(table, design, margin);
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (double d = -1.0; d < 1.0 + grid_step * 0.5; d += grid_step) {
    const double dd = std::min(d, 1.0);
    if (sigma_hat(restricted_mle(table, design, -dd), design) == 0.0)
      continue;
    const double cur = score.value(dd);
    if (!std::isnan(prev) && cur < prev - 1e-10) return false;
    prev = cur;
  }
  return true;
}

}  // namespace riskdiff

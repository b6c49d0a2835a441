#include "riskdiff/intervals.hpp"

#include <cmath>
#include <limits>

#include "riskdiff/rmle.hpp"
#include "riskdiff/stats.hpp"

namespace riskdiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPClamp = 1e-12;

double clamp_p(double p) {
  return std::min(1.0 - kPClamp, std::max(kPClamp, p));
}

double clamp_unit_interval(double x) {
  return std::min(1.0, std::max(-1.0, x));
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::wald: return "wald";
    case Method::mn: return "mn";
    case Method::cz: return "cz";
    case Method::ec: return "ec";
  }
  return "?";
}

DegenerateVarianceError::DegenerateVarianceError(const ObservedTable& t,
                                                 double d)
    : std::runtime_error("degenerate variance: sigma_hat is zero"),
      table(t),
      delta(d) {}

EcScore::EcScore(const ObservedTable& table, const TrialDesign& design,
                 const Margin& margin, const GridConfig& grid)
    : table_(table), design_(design), margin_(margin) {
  p_exact_ = riskdiff::p_exact(table, design, margin, grid).value;
  probit_exact_ = std_normal_quantile(1.0 - clamp_p(p_exact_));
  z_margin_ = z_delta(table, design, margin.delta0);
  const double pa = p_asy(table, design, margin);
  if (pa < kPClamp)
    probit_asy_ = std_normal_quantile(1.0 - kPClamp);
  else if (pa > 1.0 - kPClamp)
    probit_asy_ = std_normal_quantile(kPClamp);
  else
    probit_asy_ = z_margin_;
  sigma_margin_ = sigma_hat(restricted_mle(table, design, -margin.delta0),
                            design);
  diff_hat_ = static_cast<double>(table.x_t) / design.n_t -
              static_cast<double>(table.x_c) / design.n_c;
}

double EcScore::correction(double delta) const {
  const double diff = probit_asy_ - probit_exact_;
  if (delta == margin_.delta0) return diff;
  const double sd =
      sigma_hat(restricted_mle(table_, design_, -delta), design_);
  if (sd == 0.0) throw DegenerateVarianceError(table_, delta);
  return sigma_margin_ / sd * diff;
}

double EcScore::value(double delta) const {
  if (delta == margin_.delta0) return probit_exact_;
  const double sd =
      sigma_hat(restricted_mle(table_, design_, -delta), design_);
  const double num =
      (diff_hat_ + delta) - sigma_margin_ * (probit_asy_ - probit_exact_);
  if (sd == 0.0) {
    if (num == 0.0) return 0.0;
    return num > 0.0 ? kInf : -kInf;
  }
  return num / sd;
}

double ec_correction(const ObservedTable& table, const TrialDesign& design,
                     const Margin& margin, double delta,
                     const GridConfig& grid) {
  return EcScore(table, design, margin, grid).correction(delta);
}

double z_ec(const ObservedTable& table, const TrialDesign& design,
            const Margin& margin, double delta, const GridConfig& grid) {
  const EcScore score(table, design, margin, grid);
  if (delta != margin.delta0) {
    const double sd =
        sigma_hat(restricted_mle(table, design, -delta), design);
    if (sd == 0.0) throw DegenerateVarianceError(table, delta);
  }
  return score.value(delta);
}

Interval ci_wald(const ObservedTable& table, const TrialDesign& design,
                 double alpha) {
  require_valid(table, design);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("ci_wald: alpha outside (0, 1)");
  const double pt = static_cast<double>(table.x_t) / design.n_t;
  const double pc = static_cast<double>(table.x_c) / design.n_c;
  const double sig =
      std::sqrt(pt * (1.0 - pt) / design.n_t + pc * (1.0 - pc) / design.n_c);
  const double zq = std_normal_quantile(1.0 - alpha / 2.0);
  Interval out;
  out.method = Method::wald;
  out.level = 1.0 - alpha;
  out.lower = clamp_unit_interval(pt - pc - zq * sig);
  out.upper = clamp_unit_interval(pt - pc + zq * sig);
  return out;
}

namespace {

// Grid of inversion abscissas where the score standard error is positive;
// the score is not defined at degenerate-variance points.
std::vector<double> inversion_grid(const ObservedTable& table,
                                   const TrialDesign& design, double step) {
  std::vector<double> out;
  for (double d = -1.0; d <= 1.0 + step * 0.5; d += step) {
    const double dd = std::min(d, 1.0);
    if (sigma_hat(restricted_mle(table, design, dd), design) > 0.0)
      out.push_back(dd);
    if (dd == 1.0) break;
  }
  return out;
}

// Lower bound: outermost (leftmost) downward crossing of g through target,
// scanned on the grid and bisected to tol. Identical to plain bisection
// when the curve is monotone. Saturates at -1 / +1 without a crossing.
double invert_lower(const std::function<double(double)>& g,
                    const std::vector<double>& grid, double target,
                    double tol) {
  if (grid.empty()) return -1.0;
  double prev_x = grid.front();
  double prev_g = g(prev_x);
  if (prev_g <= target) return -1.0;
  for (size_t k = 1; k < grid.size(); ++k) {
    const double cur = g(grid[k]);
    if (cur <= target) {
      double a = prev_x, b = grid[k];
      while (b - a > tol) {
        const double m = 0.5 * (a + b);
        (g(m) > target ? a : b) = m;
      }
      return 0.5 * (a + b);
    }
    prev_x = grid[k];
    prev_g = cur;
  }
  return 1.0;
}

// Upper bound: outermost (rightmost) point where g still reaches target
// from below, scanned right-to-left.
double invert_upper(const std::function<double(double)>& g,
                    const std::vector<double>& grid, double target,
                    double tol) {
  if (grid.empty()) return 1.0;
  double prev_x = grid.back();
  double prev_g = g(prev_x);
  if (prev_g >= target) return 1.0;
  for (size_t k = grid.size() - 1; k-- > 0;) {
    const double cur = g(grid[k]);
    if (cur >= target) {
      double a = grid[k], b = prev_x;
      while (b - a > tol) {
        const double m = 0.5 * (a + b);
        (g(m) >= target ? a : b) = m;
      }
      return 0.5 * (a + b);
    }
    prev_x = grid[k];
    prev_g = cur;
  }
  return -1.0;
}

}  // namespace

Interval ci_mn(const ObservedTable& table, const TrialDesign& design,
               double alpha) {
  require_valid(table, design);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("ci_mn: alpha outside (0, 1)");
  const double zq = std_normal_quantile(1.0 - alpha / 2.0);
  auto g = [&](double d) { return z_delta(table, design, -d); };
  Interval out;
  out.method = Method::mn;
  out.level = 1.0 - alpha;
  out.monotone_ok =
      monotonicity_check(table, design, 0.01, false, Margin(0.0));
  const auto grid01 = inversion_grid(table, design, 0.01);
  out.lower = invert_lower(g, grid01, zq, 1e-7);
  out.upper = invert_upper(g, grid01, -zq, 1e-7);
  if (out.lower > out.upper) std::swap(out.lower, out.upper);
  return out;
}

Interval ci_cz(const ObservedTable& table, const TrialDesign& design,
               double alpha, const GridConfig& grid) {
  require_valid(table, design);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("ci_cz: alpha outside (0, 1)");
  const double half = alpha / 2.0;
  Interval out;
  out.method = Method::cz;
  out.level = 1.0 - alpha;
  out.monotone_ok =
      monotonicity_check(table, design, 0.01, false, Margin(0.0));

  auto pl = [&](double d) { return p_l(table, design, d, grid).value; };
  auto pu = [&](double d) { return p_u(table, design, d, grid).value; };
  auto refine = [&](const std::function<double(double)>& f, double a,
                    double b) {
    // f(a) <= half < f(b) or the mirrored case; bisect the predicate
    // f > half down to 1e-5.
    while (b - a > 1e-5) {
      const double m = 0.5 * (a + b);
      if (f(m) > half)
        b = m;
      else
        a = m;
    }
    return 0.5 * (a + b);
  };

  out.lower = 1.0;
  double prev = -1.0;
  for (double d = -1.0; d <= 1.0 + 1e-12; d += grid.delta_step) {
    const double dd = std::min(d, 1.0);
    if (pl(dd) > half) {
      out.lower = (dd == -1.0) ? -1.0 : refine(pl, prev, dd);
      break;
    }
    prev = dd;
    if (dd == 1.0) break;
  }

  out.upper = -1.0;
  prev = 1.0;
  for (double d = 1.0; d >= -1.0 - 1e-12; d -= grid.delta_step) {
    const double dd = std::max(d, -1.0);
    if (pu(dd) > half) {
      if (dd == 1.0) {
        out.upper = 1.0;
      } else {
        // mirrored predicate: largest d with p_u > half
        double a = dd, b = prev;
        while (b - a > 1e-5) {
          const double m = 0.5 * (a + b);
          if (pu(m) > half)
            a = m;
          else
            b = m;
        }
        out.upper = 0.5 * (a + b);
      }
      break;
    }
    prev = dd;
    if (dd == -1.0) break;
  }

  if (out.lower > out.upper) std::swap(out.lower, out.upper);
  return out;
}

std::vector<double> cz_lower_all(const TrialDesign& design, double alpha,
                                 const GridConfig& grid) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("cz_lower_all: alpha outside (0, 1)");
  const double half = alpha / 2.0;
  const int n = design.space_size();
  const int nc1 = design.n_c + 1;

  std::vector<double> dgrid;
  for (double d = -1.0; d <= 1.0 + 1e-12; d += grid.delta_step)
    dgrid.push_back(std::min(d, 1.0));
  const int nd = static_cast<int>(dgrid.size());

  // Coarse P_L for every (table, delta) via sorted-prefix sums.
  std::vector<double> coarse(static_cast<size_t>(n) * nd, 0.0);
  std::vector<double> prefix(n);
  std::vector<double> pmf_t, pmf_c;
  for (int j = 0; j < nd; ++j) {
    const double d = dgrid[j];
    const auto surface =
        RankedSurface::build(design, StatisticKind::delta_projected, -d);
    const double lo = std::max(0.0, d), hi = std::min(1.0, 1.0 + d);
    const int npts = (hi - lo <= 1e-15) ? 1 : grid.pt_points;
    for (int gp = 0; gp < npts; ++gp) {
      const double p =
          (npts == 1) ? lo : lo + (hi - lo) * gp / (npts - 1.0);
      binomial_pmf_row(design.n_t, p, pmf_t);
      binomial_pmf_row(design.n_c, std::min(1.0, std::max(0.0, p - d)), pmf_c);
      double acc = 0.0;
      for (int q = 0; q < n; ++q) {
        const int idx = surface.order[q];
        acc += pmf_t[idx / nc1] * pmf_c[idx % nc1];
        prefix[q] = acc;
      }
      for (int i = 0; i < n; ++i) {
        const int cut = surface.group_last[surface.group_of[surface.pos[i]]];
        double& cell = coarse[static_cast<size_t>(i) * nd + j];
        cell = std::max(cell, prefix[cut]);
      }
    }
  }

  // Per table: earliest grid cell whose refined P_L exceeds alpha/2, with
  // candidate cells taken from the coarse matrix (refinement can only lift
  // a value by a bounded amount, so cells far below alpha/2 cannot cross).
  const double lift = 5e-3;
  std::vector<double> out(n, 1.0);
  for (int i = 0; i < n; ++i) {
    const ObservedTable t = table_at(i, design);
    const double* row = &coarse[static_cast<size_t>(i) * nd];
    int first = -1;
    for (int j = 0; j < nd; ++j) {
      if (row[j] <= half - lift) continue;
      if (p_l(t, design, dgrid[j], grid).value > half) {
        first = j;
        break;
      }
    }
    if (first < 0) {
      out[i] = 1.0;
    } else if (first == 0) {
      out[i] = -1.0;
    } else {
      double a = dgrid[first - 1], b = dgrid[first];
      while (b - a > 1e-5) {
        const double m = 0.5 * (a + b);
        if (p_l(t, design, m, grid).value > half)
          b = m;
        else
          a = m;
      }
      out[i] = 0.5 * (a + b);
    }
  }
  return out;
}

Interval ci_ec(const ObservedTable& table, const TrialDesign& design,
               const Margin& margin, double alpha, const GridConfig& grid) {
  require_valid(table, design);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("ci_ec: alpha outside (0, 1)");
  const EcScore score(table, design, margin, grid);
  const double zq = std_normal_quantile(1.0 - alpha / 2.0);
  auto g = [&](double d) { return score.value(-d); };
  Interval out;
  out.method = Method::ec;
  out.level = 1.0 - alpha;
  out.monotone_ok = monotonicity_check(table, design, 0.01, true, margin);
  const auto grid01 = inversion_grid(table, design, 0.01);
  out.lower = invert_lower(g, grid01, zq, 1e-7);
  out.upper = invert_upper(g, grid01, -zq, 1e-7);
  if (out.lower > out.upper) std::swap(out.lower, out.upper);
  return out;
}

}  // namespace riskdiff

#include "riskdiff/opchar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "riskdiff/rmle.hpp"
#include "riskdiff/stats.hpp"
#include "parallel.hpp"

namespace riskdiff {

namespace {

double conditional_size_at(const DecisionSet& region, double p_t,
                           double delta, std::vector<double>& pmf_t,
                           std::vector<double>& pmf_c) {
  const auto& d = region.design;
  binomial_pmf_row(d.n_t, p_t, pmf_t);
  binomial_pmf_row(d.n_c, std::min(1.0, std::max(0.0, p_t - delta)), pmf_c);
  double sum = 0.0;
  const int nc1 = d.n_c + 1;
  for (int i = 0; i < d.space_size(); ++i)
    if (region.rejected[i]) sum += pmf_t[i / nc1] * pmf_c[i % nc1];
  return sum;
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t rep, std::uint64_t arm) {
  const std::uint64_t h = mix64(mix64(mix64(seed) ^ rep) ^ (arm + 1));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

int invert_binomial_cdf(const std::vector<double>& cdf, double u) {
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return static_cast<int>(cdf.size()) - 1;
  return static_cast<int>(it - cdf.begin());
}

}  // namespace

int DecisionSet::reject_count() const {
  int c = 0;
  for (char r : rejected) c += (r != 0);
  return c;
}

DecisionSet critical_region(const TrialDesign& design, const Margin& margin,
                            double alpha, Method method,
                            const GridConfig& grid) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::domain_error("critical_region: alpha outside [0, 1]");
  DecisionSet out{design, method, margin, alpha, {}};
  const int n = design.space_size();
  out.rejected.assign(n, 0);
  const double half = alpha / 2.0;

  switch (method) {
    case Method::wald:
      for (int i = 0; i < n; ++i)
        out.rejected[i] = p_wald(table_at(i, design), design, margin) <= half;
      break;
    case Method::mn:
      for (int i = 0; i < n; ++i)
        out.rejected[i] = p_asy(table_at(i, design), design, margin) <= half;
      break;
    case Method::ec: {
      const auto pe = p_exact_all(design, margin, grid);
      for (int i = 0; i < n; ++i) out.rejected[i] = pe[i].value <= half;
      break;
    }
    case Method::cz: {
      const auto pe = p_exact_all(design, margin, grid);
      const auto pcz = p_cz_all(design, margin, grid, &pe);
      for (int i = 0; i < n; ++i) out.rejected[i] = pcz[i] <= half;
      break;
    }
  }
  return out;
}

double conditional_size(const DecisionSet& region, const NullPoint& point) {
  if (!point.admissible())
    throw std::domain_error("conditional_size: inadmissible point");
  std::vector<double> pmf_t, pmf_c;
  return conditional_size_at(region, point.p_t, point.delta, pmf_t, pmf_c);
}

MaximalSizeResult maximal_size(const DecisionSet& region,
                               const SizeGrid& size_grid) {
  const Margin& margin = region.margin;
  std::vector<double> pmf_t, pmf_c;
  auto size_at = [&](double p, double d) {
    return conditional_size_at(region, p, d, pmf_t, pmf_c);
  };

  auto scan_pt = [&](double d, double& best_p) {
    const double lo = std::max(0.0, d);
    const double hi = std::min(1.0, 1.0 + d);
    double best = -1.0;
    best_p = lo;
    const int npts = std::max(2, size_grid.pt_points);
    for (int i = 0; i < npts; ++i) {
      const double p = lo + (hi - lo) * i / (npts - 1.0);
      const double v = size_at(p, d);
      if (v > best) {
        best = v;
        best_p = p;
      }
    }
    return best;
  };

  const double gr = 0.6180339887498948482;
  auto golden_1d = [&](const std::function<double(double)>& f, double a,
                       double b, double& arg) {
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > size_grid.refine_tol) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = f(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = f(x1);
      }
    }
    arg = (f1 >= f2) ? x1 : x2;
    return std::max(f1, f2);
  };

  MaximalSizeResult out;

  // 2-D grid over the null region, boundary delta included.
  std::vector<double> dgrid;
  for (double d = -1.0; d <= -margin.delta0 + 1e-15; d += size_grid.delta_step)
    dgrid.push_back(std::min(d, -margin.delta0));
  if (dgrid.empty() || dgrid.back() < -margin.delta0 - 1e-15)
    dgrid.push_back(-margin.delta0);

  double best = -1.0, best_p = 0.0, best_d = dgrid.front();
  for (double d : dgrid) {
    double p;
    const double v = scan_pt(d, p);
    if (v > best) {
      best = v;
      best_p = p;
      best_d = d;
    }
  }

  // Coordinate refinement: P_T, then delta (kept inside the null), then P_T.
  const double plo = std::max(0.0, best_d), phi = std::min(1.0, 1.0 + best_d);
  const double pstep = (phi - plo) / std::max(1, size_grid.pt_points - 1);
  double rp = best_p;
  double rv = golden_1d([&](double p) { return size_at(p, best_d); },
                        std::max(plo, best_p - pstep),
                        std::min(phi, best_p + pstep), rp);
  double rd = best_d;
  const double dlo = std::max(-1.0, best_d - size_grid.delta_step);
  const double dhi = std::min(-margin.delta0, best_d + size_grid.delta_step);
  const double rv2 = golden_1d(
      [&](double d) {
        const double p = std::min(std::min(1.0, 1.0 + d), std::max(std::max(0.0, d), rp));
        return size_at(p, d);
      },
      dlo, dhi, rd);
  if (rv2 > rv) rv = rv2;
  double rp2 = rp;
  const double plo2 = std::max(0.0, rd), phi2 = std::min(1.0, 1.0 + rd);
  const double rv3 =
      golden_1d([&](double p) { return size_at(p, rd); },
                std::max(plo2, rp - pstep), std::min(phi2, rp + pstep), rp2);
  if (rv3 > rv) {
    rv = rv3;
    rp = rp2;
  }
  out.value = std::max(best, rv);
  out.arg_sup = NullPoint{rv >= best ? rp : best_p, rv >= best ? rd : best_d};

  // Boundary-only search at delta = -delta0.
  double bp;
  double bv = scan_pt(-margin.delta0, bp);
  double brp = bp;
  const double blo = std::max(0.0, -margin.delta0);
  const double bhi = std::min(1.0, 1.0 - margin.delta0);
  const double bstep = (bhi - blo) / std::max(1, size_grid.pt_points - 1);
  const double bv2 =
      golden_1d([&](double p) { return size_at(p, -margin.delta0); },
                std::max(blo, bp - bstep), std::min(bhi, bp + bstep), brp);
  if (bv2 > bv) {
    bv = bv2;
    bp = brp;
  }
  out.boundary_value = bv;
  out.boundary_arg = NullPoint{bp, -margin.delta0};

  if (out.boundary_value > out.value) {
    out.value = out.boundary_value;
    out.arg_sup = out.boundary_arg;
  }
  return out;
}

MaximalSizeResult maximal_size(const TrialDesign& design, const Margin& margin,
                               double alpha, Method method,
                               const SizeGrid& size_grid,
                               const GridConfig& grid) {
  return maximal_size(critical_region(design, margin, alpha, method, grid),
                      size_grid);
}

PowerCurve power_curve(const TrialDesign& design, const Margin& margin,
                       double alpha, double p_t,
                       const std::vector<double>& delta_grid,
                       const GridConfig& grid) {
  PowerCurve out;
  out.p_t = p_t;
  out.delta_grid = delta_grid;
  out.admissible.assign(delta_grid.size(), 0);

  bool any = false;
  for (size_t k = 0; k < delta_grid.size(); ++k) {
    out.admissible[k] = NullPoint{p_t, delta_grid[k]}.admissible();
    any = any || out.admissible[k];
  }
  if (!any) throw std::domain_error("power_curve: no admissible grid point");

  const std::array<Method, 4> methods{Method::wald, Method::mn, Method::cz,
                                      Method::ec};
  std::array<DecisionSet, 4> regions{
      critical_region(design, margin, alpha, Method::wald, grid),
      critical_region(design, margin, alpha, Method::mn, grid),
      critical_region(design, margin, alpha, Method::cz, grid),
      critical_region(design, margin, alpha, Method::ec, grid)};

  for (size_t m = 0; m < methods.size(); ++m) {
    auto& probs = out.reject_prob[static_cast<int>(methods[m])];
    probs.assign(delta_grid.size(), 0.0);
    for (size_t k = 0; k < delta_grid.size(); ++k) {
      if (!out.admissible[k]) continue;
      probs[k] =
          conditional_size(regions[m], NullPoint{p_t, delta_grid[k]});
    }
  }

  const auto& ec = regions[3].rejected;
  const auto& cz = regions[2].rejected;
  for (int i = 0; i < design.space_size(); ++i) {
    if (ec[i] && cz[i])
      ++out.n_rr;
    else if (ec[i] && !cz[i])
      ++out.n_ar;
    else if (!ec[i] && !cz[i])
      ++out.n_aa;
    // CZ rejecting while EC accepts would contradict the p-value dominance.
  }
  return out;
}

EcExpectation ec_expectation(const TrialDesign& design, double p_t, double p_c,
                             const Margin& margin, int n_sims,
                             std::uint64_t seed, const GridConfig& grid,
                             int threads) {
  if (!(p_t >= 0.0 && p_t <= 1.0 && p_c >= 0.0 && p_c <= 1.0))
    throw std::domain_error("ec_expectation: probabilities outside [0, 1]");
  if (n_sims < 1) throw std::domain_error("ec_expectation: n_sims < 1");

  const double delta_true = p_t - p_c;

  // Counter-based draws, then the correction once per distinct table.
  std::vector<double> cdf_t(design.n_t + 1), cdf_c(design.n_c + 1);
  {
    const auto pt_row = binomial_pmf_row(design.n_t, p_t);
    const auto pc_row = binomial_pmf_row(design.n_c, p_c);
    double a = 0.0, b = 0.0;
    for (int k = 0; k <= design.n_t; ++k) cdf_t[k] = (a += pt_row[k]);
    for (int k = 0; k <= design.n_c; ++k) cdf_c[k] = (b += pc_row[k]);
  }

  std::vector<int> draw_index(n_sims);
  for (int rep = 0; rep < n_sims; ++rep) {
    const int xt = invert_binomial_cdf(cdf_t, uniform01(seed, rep, 0));
    const int xc = invert_binomial_cdf(cdf_c, uniform01(seed, rep, 1));
    draw_index[rep] = xt * (design.n_c + 1) + xc;
  }

  std::vector<int> distinct = draw_index;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());

  const auto surface = RankedSurface::build(
      design, StatisticKind::delta_projected, margin.delta0);

  struct PerTable {
    double correction;
    bool degenerate;
  };
  std::vector<PerTable> per_table(distinct.size());

  detail::parallel_for(
      static_cast<int>(distinct.size()), threads, [&](int di) {
        const ObservedTable t = table_at(distinct[di], design);
        const double pe =
            maximize_tail(design, exact_tail(surface, t), -margin.delta0, grid)
                .value;
        const double probit_exact = std_normal_quantile(
            1.0 - std::min(1.0 - 1e-12, std::max(1e-12, pe)));
        const double zm = z_delta(t, design, margin.delta0);
        double probit_asy;
        const double pa = std::isinf(zm) ? (zm > 0 ? 0.0 : 1.0)
                                         : 1.0 - std_normal_cdf(zm);
        if (pa < 1e-12)
          probit_asy = std_normal_quantile(1.0 - 1e-12);
        else if (pa > 1.0 - 1e-12)
          probit_asy = std_normal_quantile(1e-12);
        else
          probit_asy = zm;
        const double diff = probit_asy - probit_exact;

        PerTable r{};
        if (delta_true == margin.delta0) {
          r.correction = diff;
          r.degenerate = false;
        } else {
          const double sm = sigma_hat(
              restricted_mle(t, design, -margin.delta0), design);
          const double sd =
              sigma_hat(restricted_mle(t, design, -delta_true), design);
          if (sd == 0.0) {
            r.correction = diff;
            r.degenerate = true;
          } else {
            r.correction = sm / sd * diff;
            r.degenerate = false;
          }
        }
        per_table[di] = r;
      });

  std::unordered_map<int, int> slot;
  slot.reserve(distinct.size() * 2);
  for (size_t i = 0; i < distinct.size(); ++i)
    slot[distinct[i]] = static_cast<int>(i);

  EcExpectation out;
  out.n_sims = n_sims;
  double sum = 0.0;
  for (int rep = 0; rep < n_sims; ++rep) {
    const auto& r = per_table[slot[draw_index[rep]]];
    sum += r.correction;
    out.degenerate_draws += r.degenerate ? 1 : 0;
  }
  out.mean = sum / n_sims;
  if (n_sims > 1) {
    double ss = 0.0;
    for (int rep = 0; rep < n_sims; ++rep) {
      const double c = per_table[slot[draw_index[rep]]].correction - out.mean;
      ss += c * c;
    }
    out.std_error = std::sqrt(ss / (static_cast<double>(n_sims) *
                                    (n_sims - 1.0)));
  }
  return out;
}

}  // namespace riskdiff

#include "riskdiff/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace riskdiff {

namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

bool tied(double a, double b) {
  if (a == b) return true;
  return std::fabs(a - b) <= kTieTolerance;
}

struct PmfWorkspace {
  std::vector<double> pmf_t, pmf_c, cum_c;

  void fill(const TrialDesign& design, double p_t, double delta) {
    const double p_c = std::min(1.0, std::max(0.0, p_t - delta));
    binomial_pmf_row(design.n_t, p_t, pmf_t);
    binomial_pmf_row(design.n_c, p_c, pmf_c);
    cum_c.assign(design.n_c + 2, 0.0);
    for (int k = 0; k <= design.n_c; ++k) cum_c[k + 1] = cum_c[k] + pmf_c[k];
  }
};

std::vector<double> admissible_pt_grid(double delta, int npts) {
  const double lo = std::max(0.0, delta);
  const double hi = std::min(1.0, 1.0 + delta);
  if (hi - lo <= 1e-15) return {lo};
  std::vector<double> g(npts);
  for (int i = 0; i < npts; ++i)
    g[i] = lo + (hi - lo) * i / static_cast<double>(npts - 1);
  g.back() = hi;
  return g;
}

// Prefix cut of the sorted order turned into a TailSet.
TailSet prefix_tail(const RankedSurface& surface, int last_pos) {
  std::vector<int> idx(surface.order.begin(),
                       surface.order.begin() + last_pos + 1);
  return TailSet::from_indices(surface.design, idx);
}

TailSet suffix_tail(const RankedSurface& surface, int first_pos) {
  std::vector<int> idx(surface.order.begin() + first_pos, surface.order.end());
  return TailSet::from_indices(surface.design, idx);
}

}  // namespace

RankedSurface RankedSurface::build(const TrialDesign& design,
                                   StatisticKind kind, double projection) {
  RankedSurface out{design, statistic_surface(kind, design, projection),
                    {}, {}, {}, {}, {}};
  const int n = design.space_size();
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), 0);
  const int nc1 = design.n_c + 1;
  std::sort(out.order.begin(), out.order.end(), [&](int i, int j) {
    if (out.s[i] != out.s[j]) return out.s[i] > out.s[j];
    const int xti = i / nc1, xtj = j / nc1;
    if (xti != xtj) return xti > xtj;
    return i % nc1 < j % nc1;
  });
  out.pos.resize(n);
  for (int p = 0; p < n; ++p) out.pos[out.order[p]] = p;

  out.group_of.resize(n);
  int g = 0;
  out.group_of[0] = 0;
  out.group_first.push_back(0);
  for (int p = 1; p < n; ++p) {
    if (!tied(out.s[out.order[p - 1]], out.s[out.order[p]])) {
      out.group_last.push_back(p - 1);
      out.group_first.push_back(p);
      ++g;
    }
    out.group_of[p] = g;
  }
  out.group_last.push_back(n - 1);
  return out;
}

TailSet TailSet::from_indices(const TrialDesign& design,
                              const std::vector<int>& idx) {
  TailSet t;
  t.nt1 = design.n_t + 1;
  t.nc1 = design.n_c + 1;
  t.lo.assign(t.nt1, design.n_c + 1);
  t.hi.assign(t.nt1, -1);
  std::vector<int> count(t.nt1, 0);
  for (int i : idx) {
    const int a = i / t.nc1, b = i % t.nc1;
    t.lo[a] = std::min(t.lo[a], b);
    t.hi[a] = std::max(t.hi[a], b);
    ++count[a];
  }
  t.contiguous = true;
  for (int a = 0; a < t.nt1; ++a) {
    if (count[a] > 0 && count[a] != t.hi[a] - t.lo[a] + 1) {
      t.contiguous = false;
      break;
    }
  }
  if (!t.contiguous) t.members = idx;
  return t;
}

double TailSet::eval(const std::vector<double>& pmf_t,
                     const std::vector<double>& pmf_c,
                     const std::vector<double>& cum_c) const {
  double sum = 0.0;
  if (contiguous) {
    for (int a = 0; a < nt1; ++a) {
      if (hi[a] < lo[a]) continue;
      sum += pmf_t[a] * (cum_c[hi[a] + 1] - cum_c[lo[a]]);
    }
  } else {
    for (int i : members) sum += pmf_t[i / nc1] * pmf_c[i % nc1];
  }
  return sum;
}

TailSet exact_tail(const RankedSurface& surface, const ObservedTable& table) {
  const int p = surface.pos[table_index(table, surface.design)];
  return prefix_tail(surface, p);
}

TailSet ties_tail(const RankedSurface& surface, const ObservedTable& table,
                  TailOrientation orientation) {
  const int p = surface.pos[table_index(table, surface.design)];
  const int g = surface.group_of[p];
  if (orientation == TailOrientation::upper)
    return prefix_tail(surface, surface.group_last[g]);
  return suffix_tail(surface, surface.group_first[g]);
}

TailSet threshold_tail(const RankedSurface& surface, double s_obs,
                       TailOrientation orientation) {
  const int n = static_cast<int>(surface.order.size());
  if (orientation == TailOrientation::upper) {
    int last = -1;
    for (int p = 0; p < n; ++p) {
      const double s = surface.s[surface.order[p]];
      if (s >= s_obs || tied(s, s_obs))
        last = p;
      else
        break;
    }
    if (last < 0) return TailSet::from_indices(surface.design, {});
    return prefix_tail(surface, last);
  }
  int first = n;
  for (int p = n - 1; p >= 0; --p) {
    const double s = surface.s[surface.order[p]];
    if (s <= s_obs || tied(s, s_obs))
      first = p;
    else
      break;
  }
  if (first >= n) return TailSet::from_indices(surface.design, {});
  return suffix_tail(surface, first);
}

MaximizationResult maximize_tail(const TrialDesign& design, const TailSet& tail,
                                 double delta, const GridConfig& grid,
                                 const std::vector<double>& extra_candidates) {
  const auto pts = admissible_pt_grid(delta, grid.pt_points);
  PmfWorkspace ws;
  auto eval = [&](double p) {
    ws.fill(design, p, delta);
    return tail.eval(ws.pmf_t, ws.pmf_c, ws.cum_c);
  };

  MaximizationResult res;
  res.grid_points = static_cast<int>(pts.size());
  res.argmax_delta = delta;

  std::vector<double> vals(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) vals[i] = eval(pts[i]);
  size_t best_i = 0;
  for (size_t i = 1; i < pts.size(); ++i)
    if (vals[i] > vals[best_i]) best_i = i;
  res.value = vals[best_i];
  res.argmax_p_t = pts[best_i];
  if (pts.size() == 1) return res;

  const double gr = 0.6180339887498948482;
  auto golden = [&](double a, double b) {
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = eval(x1), f2 = eval(x2);
    while (b - a > grid.pt_refine_tol) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = eval(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = eval(x1);
      }
    }
    if (f1 >= f2) return std::pair<double, double>(x1, f1);
    return std::pair<double, double>(x2, f2);
  };

  const size_t n = pts.size();
  for (size_t i = 0; i < n; ++i) {
    const bool local_max = (i == 0 || vals[i] >= vals[i - 1]) &&
                           (i + 1 == n || vals[i] >= vals[i + 1]);
    if (!local_max || vals[i] < res.value - 1e-6) continue;
    const auto [x, f] = golden(pts[i == 0 ? 0 : i - 1], pts[std::min(i + 1, n - 1)]);
    res.refined = true;
    if (f > res.value || (f == res.value && x < res.argmax_p_t)) {
      res.value = f;
      res.argmax_p_t = x;
    }
  }
  for (double c : extra_candidates) {
    if (c < pts.front() || c > pts.back()) continue;
    const double f = eval(c);
    if (f > res.value) {
      res.value = f;
      res.argmax_p_t = c;
      res.refined = true;
    }
  }
  return res;
}

double tail_prob(const TrialDesign& design, double delta_eval, double p_t,
                 double s_obs, StatisticKind kind, const Margin& margin,
                 TailOrientation orientation) {
  const NullPoint point{p_t, delta_eval};
  if (!point.admissible())
    throw std::domain_error("tail_prob: inadmissible (p_t, delta)");
  const double projection =
      (kind == StatisticKind::delta_projected) ? -delta_eval : margin.delta0;
  const auto surface = RankedSurface::build(design, kind, projection);
  const auto tail = threshold_tail(surface, s_obs, orientation);
  PmfWorkspace ws;
  ws.fill(design, p_t, delta_eval);
  return tail.eval(ws.pmf_t, ws.pmf_c, ws.cum_c);
}

MaximizationResult p_exact(const ObservedTable& table,
                           const TrialDesign& design, const Margin& margin,
                           const GridConfig& grid) {
  require_valid(table, design);
  const auto surface = RankedSurface::build(
      design, StatisticKind::delta_projected, margin.delta0);
  return maximize_tail(design, exact_tail(surface, table), -margin.delta0,
                       grid);
}

MaximizationResult p_l(const ObservedTable& table, const TrialDesign& design,
                       double delta, const GridConfig& grid) {
  require_valid(table, design);
  if (!(delta >= -1.0 && delta <= 1.0))
    throw std::domain_error("p_l: delta outside [-1, 1]");
  const auto surface =
      RankedSurface::build(design, StatisticKind::delta_projected, -delta);
  return maximize_tail(design, ties_tail(surface, table, TailOrientation::upper),
                       delta, grid);
}

MaximizationResult p_u(const ObservedTable& table, const TrialDesign& design,
                       double delta, const GridConfig& grid) {
  require_valid(table, design);
  if (!(delta >= -1.0 && delta <= 1.0))
    throw std::domain_error("p_u: delta outside [-1, 1]");
  const auto surface =
      RankedSurface::build(design, StatisticKind::delta_projected, -delta);
  return maximize_tail(design, ties_tail(surface, table, TailOrientation::lower),
                       delta, grid);
}

namespace {

std::vector<double> cz_delta_grid(const Margin& margin, double step) {
  std::vector<double> g;
  for (double d = -1.0; d <= -margin.delta0 + 1e-15; d += step)
    g.push_back(std::min(d, -margin.delta0));
  if (g.empty() || g.back() < -margin.delta0 - 1e-15)
    g.push_back(-margin.delta0);
  return g;
}

}  // namespace

MaximizationResult p_cz(const ObservedTable& table, const TrialDesign& design,
                        const Margin& margin, const GridConfig& grid) {
  require_valid(table, design);
  const auto exact = p_exact(table, design, margin, grid);
  MaximizationResult best;
  best.value = -1.0;
  for (double d : cz_delta_grid(margin, grid.delta_step)) {
    const bool boundary = (d == -margin.delta0);
    const auto surface =
        RankedSurface::build(design, StatisticKind::delta_projected, -d);
    const auto r = maximize_tail(
        design, ties_tail(surface, table, TailOrientation::upper), d, grid,
        boundary ? std::vector<double>{exact.argmax_p_t}
                 : std::vector<double>{});
    if (r.value > best.value) best = r;
  }
  // The boundary value dominates the exact chain by construction.
  if (best.value < exact.value) best.value = exact.value;
  best.grid_points = grid.pt_points;
  return best;
}

double fisher_exact(const ObservedTable& table, const TrialDesign& design) {
  require_valid(table, design);
  const int m = table.x_t + table.x_c;
  const int total = design.n_t + design.n_c;
  const int k_lo = std::max(0, m - design.n_c);
  const int k_hi = std::min(design.n_t, m);
  const double log_denom = log_choose(total, m);
  double tail = 0.0;
  for (int k = std::max(k_lo, table.x_t); k <= k_hi; ++k)
    tail += std::exp(log_choose(design.n_t, k) + log_choose(design.n_c, m - k) -
                     log_denom);
  return std::min(1.0, 2.0 * tail);
}

std::vector<MaximizationResult> p_exact_all(const TrialDesign& design,
                                            const Margin& margin,
                                            const GridConfig& grid) {
  const auto surface = RankedSurface::build(
      design, StatisticKind::delta_projected, margin.delta0);
  const int n = design.space_size();
  std::vector<MaximizationResult> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = maximize_tail(design, prefix_tail(surface, surface.pos[i]),
                           -margin.delta0, grid);
  return out;
}

std::vector<double> p_cz_all(const TrialDesign& design, const Margin& margin,
                             const GridConfig& grid,
                             const std::vector<MaximizationResult>* exact) {
  const int n = design.space_size();
  const int nc1 = design.n_c + 1;
  const auto dgrid = cz_delta_grid(margin, grid.delta_step);
  const int nd = static_cast<int>(dgrid.size());

  // Pass A: coarse P_{L,delta} for every (table, delta) via sorted-prefix
  // sums; the matrix stays small because regions are only built for
  // moderate designs.
  std::vector<double> coarse(static_cast<size_t>(n) * nd, 0.0);
  PmfWorkspace ws;
  std::vector<double> prefix(n);
  for (int j = 0; j < nd; ++j) {
    const double d = dgrid[j];
    const auto surface =
        RankedSurface::build(design, StatisticKind::delta_projected, -d);
    const auto pts = admissible_pt_grid(d, grid.pt_points);
    for (double pt : pts) {
      ws.fill(design, pt, d);
      double acc = 0.0;
      for (int p = 0; p < n; ++p) {
        const int idx = surface.order[p];
        acc += ws.pmf_t[idx / nc1] * ws.pmf_c[idx % nc1];
        prefix[p] = acc;
      }
      for (int i = 0; i < n; ++i) {
        const int cut = surface.group_last[surface.group_of[surface.pos[i]]];
        double& cell = coarse[static_cast<size_t>(i) * nd + j];
        cell = std::max(cell, prefix[cut]);
      }
    }
  }

  // Pass B: refine each table at the delta cells that can still win:
  // within 5e-3 of its best coarse value (capped at the 32 largest), and
  // always at the boundary -delta0.
  const double slack = 5e-3;
  constexpr int kMaxRefine = 32;
  std::vector<std::vector<int>> jobs(nd);
  for (int i = 0; i < n; ++i) {
    const double* row = &coarse[static_cast<size_t>(i) * nd];
    const double best = *std::max_element(row, row + nd);
    std::vector<int> cand;
    for (int j = 0; j < nd; ++j)
      if (row[j] >= best - slack) cand.push_back(j);
    if (static_cast<int>(cand.size()) > kMaxRefine) {
      std::partial_sort(cand.begin(), cand.begin() + kMaxRefine, cand.end(),
                        [&](int a, int b) { return row[a] > row[b]; });
      cand.resize(kMaxRefine);
    }
    cand.push_back(nd - 1);
    for (int j : cand) jobs[j].push_back(i);
  }

  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = &coarse[static_cast<size_t>(i) * nd];
    out[i] = *std::max_element(row, row + nd);
  }
  for (int j = 0; j < nd; ++j) {
    if (jobs[j].empty()) continue;
    std::sort(jobs[j].begin(), jobs[j].end());
    jobs[j].erase(std::unique(jobs[j].begin(), jobs[j].end()), jobs[j].end());
    const double d = dgrid[j];
    const bool boundary = (j == nd - 1);
    const auto surface =
        RankedSurface::build(design, StatisticKind::delta_projected, -d);
    for (int i : jobs[j]) {
      const auto tail =
          ties_tail(surface, table_at(i, design), TailOrientation::upper);
      std::vector<double> extra;
      if (boundary && exact) extra.push_back((*exact)[i].argmax_p_t);
      const auto r = maximize_tail(design, tail, d, grid, extra);
      out[i] = std::max(out[i], r.value);
    }
  }
  if (exact)
    for (int i = 0; i < n; ++i) out[i] = std::max(out[i], (*exact)[i].value);
  return out;
}

std::vector<PlCurvePoint> pl_curve(const ObservedTable& table,
                                   const TrialDesign& design, double delta_hi,
                                   double step, const GridConfig& grid) {
  std::vector<PlCurvePoint> out;
  double running = 0.0;
  for (double d = -1.0; d <= delta_hi + 1e-15; d += step) {
    const double dd = std::min(d, delta_hi);
    const double v = p_l(table, design, dd, grid).value;
    running = std::max(running, v);
    out.push_back({dd, v, running});
  }
  return out;
}

}  // namespace riskdiff

#pragma once

#include <optional>
#include <vector>

#include "riskdiff/core.hpp"
#include "riskdiff/stats.hpp"

namespace riskdiff {

/// Tail direction relative to the observed statistic.
enum class TailOrientation { upper, lower };

/// Search-grid configuration for the nuisance maximizations.
struct GridConfig {
  int pt_points = 1001;        ///< P_T grid points per maximization
  double delta_step = 1e-3;    ///< delta grid step for p_cz / CZ scans
  double pt_refine_tol = 1e-8; ///< golden-section tolerance in P_T
};

/// Result of a nuisance maximization.
struct MaximizationResult {
  double value = 0.0;
  double argmax_p_t = 0.0;
  double argmax_delta = 0.0;
  int grid_points = 0;
  bool refined = false;
};

/// Statistic values within 1e-12 are treated as tied in all tail sets.
inline constexpr double kTieTolerance = 1e-12;

/// Statistic surface sorted into the total order used by the exact chain:
/// most extreme first, exact ties broken by larger x_t, then smaller x_c.
/// Tie groups collect values within the 1e-12 tolerance.
struct RankedSurface {
  TrialDesign design;
  std::vector<double> s;         ///< statistic per row-major table index
  std::vector<int> order;        ///< table indices, most extreme first
  std::vector<int> pos;          ///< sorted position of each table index
  std::vector<int> group_of;     ///< tie-group id per sorted position
  std::vector<int> group_first;  ///< first sorted position of each group
  std::vector<int> group_last;   ///< last sorted position of each group

  static RankedSurface build(const TrialDesign& design, StatisticKind kind,
                             double projection);
};

/// A subset of the sample space with per-row contiguous runs when possible.
struct TailSet {
  int nt1 = 0;
  int nc1 = 0;
  bool contiguous = false;
  std::vector<int> lo;       ///< per-row run start (lo > hi means empty row)
  std::vector<int> hi;
  std::vector<int> members;  ///< flat indices fallback when not contiguous

  /// Builds from a list of row-major indices.
  static TailSet from_indices(const TrialDesign& design,
                              const std::vector<int>& idx);

  /// Sum of pmf_t[x_t] * pmf_c[x_c] over the set; cum_c has n_c + 2 entries
  /// with cum_c[k] = sum of pmf_c[0..k-1].
  double eval(const std::vector<double>& pmf_t, const std::vector<double>& pmf_c,
              const std::vector<double>& cum_c) const;
};

/// Exact-chain tail of a table: everything strictly above it in the total
/// order, plus the table itself.
TailSet exact_tail(const RankedSurface& surface, const ObservedTable& table);

/// Tie-inclusive tails around a table (the CZ chain).
TailSet ties_tail(const RankedSurface& surface, const ObservedTable& table,
                  TailOrientation orientation);

/// Tie-inclusive tail against an external threshold s_obs.
TailSet threshold_tail(const RankedSurface& surface, double s_obs,
                       TailOrientation orientation);

/// Maximizes the tail probability over admissible P_T at the evaluation
/// difference delta: coarse grid plus golden-section around every local
/// maximum within 1e-6 of the best, plus any extra candidate points.
MaximizationResult maximize_tail(const TrialDesign& design, const TailSet& tail,
                                 double delta, const GridConfig& grid = {},
                                 const std::vector<double>& extra_candidates = {});

/// Probability of the tail {S >= s_obs} (upper) or {S <= s_obs} (lower) at
/// the point (p_t, delta_eval); ties within 1e-12 included. The statistic
/// projection is -delta_eval for the delta-projected score, delta0 for Wald.
double tail_prob(const TrialDesign& design, double delta_eval, double p_t,
                 double s_obs, StatisticKind kind, const Margin& margin,
                 TailOrientation orientation);

/// Chan's exact unconditional p-value with the Z_{delta0} ordering.
MaximizationResult p_exact(const ObservedTable& table, const TrialDesign& design,
                           const Margin& margin, const GridConfig& grid = {});

/// One-sided exact quantities P_{L,delta} and P_{U,delta} of the CZ chain
/// (statistic Z_{-delta}, data generated at difference delta, ties included).
MaximizationResult p_l(const ObservedTable& table, const TrialDesign& design,
                       double delta, const GridConfig& grid = {});
MaximizationResult p_u(const ObservedTable& table, const TrialDesign& design,
                       double delta, const GridConfig& grid = {});

/// Chan & Zhang p-value: maximum of P_{L,delta} over the delta grid on
/// [-1, -delta0] (step grid.delta_step, boundary included).
MaximizationResult p_cz(const ObservedTable& table, const TrialDesign& design,
                        const Margin& margin, const GridConfig& grid = {});

/// Fisher's exact p-value conditioning on x_t + x_c: doubled one-sided
/// hypergeometric tail in the direction favoring treatment, capped at 1.
double fisher_exact(const ObservedTable& table, const TrialDesign& design);

/// Exact-chain p-values for every table of the design, enumeration order.
std::vector<MaximizationResult> p_exact_all(const TrialDesign& design,
                                            const Margin& margin,
                                            const GridConfig& grid = {});

/// CZ p-values for every table of the design, enumeration order. When the
/// exact-chain results are supplied their argmax points seed the boundary
/// evaluation so the dominance p_cz >= p_exact holds exactly.
std::vector<double> p_cz_all(const TrialDesign& design, const Margin& margin,
                             const GridConfig& grid = {},
                             const std::vector<MaximizationResult>* exact = nullptr);

/// One point of the P_{L,delta} curve (Figure 1 style data).
struct PlCurvePoint {
  double delta;
  double p_l;
  double running_max;
};

/// P_{L,delta} over [-1, delta_hi] with its running maximum.
std::vector<PlCurvePoint> pl_curve(const ObservedTable& table,
                                   const TrialDesign& design, double delta_hi,
                                   double step, const GridConfig& grid = {});

}  // namespace riskdiff

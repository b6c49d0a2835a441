#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "riskdiff/core.hpp"
#include "riskdiff/exact.hpp"
#include "riskdiff/intervals.hpp"

namespace riskdiff {

/// Per-table reject/accept decisions of one method at one level.
struct DecisionSet {
  TrialDesign design;
  Method method;
  Margin margin;
  double alpha;
  std::vector<char> rejected;  ///< enumeration order, 1 = reject

  int reject_count() const;
};

/// Critical region: table rejected iff its method p-value <= alpha / 2.
DecisionSet critical_region(const TrialDesign& design, const Margin& margin,
                            double alpha, Method method,
                            const GridConfig& grid = {});

/// Rejection probability of the region at one parameter point.
double conditional_size(const DecisionSet& region, const NullPoint& point);

/// Search grid for the null-region supremum.
struct SizeGrid {
  double delta_step = 2e-3;
  int pt_points = 501;
  double refine_tol = 1e-8;
};

struct MaximalSizeResult {
  double value = 0.0;
  NullPoint arg_sup{0.0, 0.0};
  double boundary_value = 0.0;  ///< supremum restricted to delta = -delta0
  NullPoint boundary_arg{0.0, 0.0};
};

/// Supremum of the conditional size over the null {delta <= -delta0},
/// 2-D grid plus coordinate golden-section refinement.
MaximalSizeResult maximal_size(const DecisionSet& region,
                               const SizeGrid& size_grid = {});

/// Convenience overload building the region first.
MaximalSizeResult maximal_size(const TrialDesign& design, const Margin& margin,
                               double alpha, Method method,
                               const SizeGrid& size_grid = {},
                               const GridConfig& grid = {});

/// Reject probabilities along a delta grid at fixed P_T, for all four
/// methods, plus the CZ/EC agreement counts.
struct PowerCurve {
  double p_t = 0.0;
  std::vector<double> delta_grid;
  std::vector<char> admissible;
  std::array<std::vector<double>, 4> reject_prob;  ///< indexed by Method
  int n_aa = 0;  ///< CZ accepts and EC accepts
  int n_ar = 0;  ///< CZ accepts and EC rejects
  int n_rr = 0;  ///< both reject
};

PowerCurve power_curve(const TrialDesign& design, const Margin& margin,
                       double alpha, double p_t,
                       const std::vector<double>& delta_grid,
                       const GridConfig& grid = {});

/// Monte Carlo estimate of E[EC_delta(X_T, X_C)] at the true difference
/// delta = p_t - p_c.
struct EcExpectation {
  double mean = 0.0;
  double std_error = 0.0;
  int n_sims = 0;
  int degenerate_draws = 0;  ///< draws with a vanishing score SE
};

/// Deterministic for a fixed seed and independent of the thread count:
/// binomial draws invert the CDF on a counter-based uniform stream keyed
/// by (seed, replicate, arm). Draws with sigma_hat(delta) == 0 contribute
/// with the sigma ratio taken as 1 and clamped probits, and are counted.
EcExpectation ec_expectation(const TrialDesign& design, double p_t, double p_c,
                             const Margin& margin, int n_sims, std::uint64_t seed,
                             const GridConfig& grid = {}, int threads = 1);

}  // namespace riskdiff

#pragma once

#include <functional>
#include <vector>

#include "riskdiff/core.hpp"

namespace riskdiff {

/// Which statistic induces the preorder on the sample space.
enum class StatisticKind { delta_projected, wald };

/// Delta-projected Z-score (phat_t - phat_c + delta) / sigma_hat, where
/// sigma_hat comes from the restricted MLE at difference -delta.
/// Extended-real convention: 0/0 -> 0, nonzero/0 -> signed infinity.
double z_delta(const ObservedTable& table, const TrialDesign& design,
               double delta);

/// Wald Z-score with the unrestricted plug-in variance; same extended-real
/// convention as z_delta.
double wald_z(const ObservedTable& table, const TrialDesign& design,
              const Margin& margin);

/// One-sided asymptotic p-value 1 - Phi(Z_{delta0}).
double p_asy(const ObservedTable& table, const TrialDesign& design,
             const Margin& margin);

/// One-sided Wald p-value 1 - Phi(Z_wald).
double p_wald(const ObservedTable& table, const TrialDesign& design,
              const Margin& margin);

/// Statistic values over the whole sample space in row-major table order.
/// For delta_projected the projection parameter is `projection`; for wald
/// it is the margin baked into the caller-supplied projection.
std::vector<double> statistic_surface(StatisticKind kind,
                                      const TrialDesign& design,
                                      double projection);

/// One adjacency violation of the Barnard criteria.
struct AdjacentViolation {
  ObservedTable from;
  ObservedTable to;
  double s_from;
  double s_to;
};

/// Exhaustively checks S(x_t, x_c) >= S(x_t, x_c + 1) and
/// S(x_t, x_c) >= S(x_t - 1, x_c) over the sample space for the statistic
/// with projection delta0. Empty result iff the criteria hold.
std::vector<AdjacentViolation> barnard_check(StatisticKind kind,
                                             const TrialDesign& design,
                                             const Margin& margin);

/// True iff the map delta -> Z_delta (or Z^EC_delta when use_ec) is
/// nondecreasing on the grid [-1, 1] with the given step, up to a 1e-10
/// tie tolerance.
bool monotonicity_check(const ObservedTable& table, const TrialDesign& design,
                        double grid_step, bool use_ec, const Margin& margin);

/// Generic grid monotonicity helper used by the check above and by the
/// interval inversions.
bool nondecreasing_on_grid(const std::function<double(double)>& f, double lo,
                           double hi, double step, double tol);

}  // namespace riskdiff

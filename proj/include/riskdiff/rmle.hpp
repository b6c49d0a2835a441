#pragma once

#include "riskdiff/core.hpp"

namespace riskdiff {

/// Maximizer of the likelihood over the segment {(p, p - d)} with the
/// difference fixed at d.
struct RestrictedEstimate {
  double p_t_tilde;
  double p_c_tilde;
  double constraint_d;
};

/// Restricted MLE of (P_T, P_C) subject to P_T - P_C = d, d in [-1, 1].
/// Closed-form cubic solution; d == 0 returns the pooled proportion,
/// |d| == 1 the unique admissible point.
RestrictedEstimate restricted_mle(const ObservedTable& table,
                                  const TrialDesign& design, double d);

/// Score standard error sqrt(pt(1-pt)/N_T + pc(1-pc)/N_C) at the
/// restricted estimate. Zero iff both components are 0 or 1.
double sigma_hat(const RestrictedEstimate& est, const TrialDesign& design);

}  // namespace riskdiff

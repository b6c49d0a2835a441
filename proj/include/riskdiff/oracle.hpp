#pragma once

#include <cstdint>
#include <string>

#include "riskdiff/core.hpp"
#include "riskdiff/opchar.hpp"
#include "riskdiff/rmle.hpp"

namespace riskdiff::oracle {

/// Outcome of one oracle cross-check.
struct OracleReport {
  std::string target;
  double max_abs_deviation = 0.0;
  int cases = 0;
};

/// Brute-force restricted MLE: grid of step 1e-5 over the admissible
/// segment, then golden-section to 1e-9. No closed form anywhere.
RestrictedEstimate oracle_rmle(const ObservedTable& table,
                               const TrialDesign& design, double d);

/// Conditional size maximized over a grid 4x finer than the opchar
/// defaults (no refinement).
double oracle_size(const DecisionSet& region);

/// Closed-form restricted MLE against oracle_rmle over random cases.
OracleReport verify_rmle(int cases, std::uint64_t seed);

/// opchar maximal size against the 4x-finer oracle grid for one region.
OracleReport verify_maxsize(const DecisionSet& region);

}  // namespace riskdiff::oracle

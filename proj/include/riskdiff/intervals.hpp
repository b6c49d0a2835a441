#pragma once

#include <stdexcept>

#include "riskdiff/core.hpp"
#include "riskdiff/exact.hpp"

namespace riskdiff {

/// Confidence interval methods for the risk difference.
enum class Method { wald, mn, cz, ec };

const char* method_name(Method m);

/// A two-sided confidence interval for delta, clamped to [-1, 1].
struct Interval {
  double lower = -1.0;
  double upper = 1.0;
  double level = 0.0;      ///< 1 - alpha
  Method method = Method::mn;
  bool monotone_ok = true; ///< per-instance monotonicity check outcome
};

/// Raised when a correction term is requested at a point where the score
/// standard error vanishes.
class DegenerateVarianceError : public std::runtime_error {
 public:
  DegenerateVarianceError(const ObservedTable& table, double delta);
  ObservedTable table;
  double delta;
};

/// Exact-corrected score of one table with the exact p-value computed once
/// and reused across evaluations in delta.
class EcScore {
 public:
  EcScore(const ObservedTable& table, const TrialDesign& design,
          const Margin& margin, const GridConfig& grid = {});

  /// Z^EC_delta as an extended real; at delta == delta0 the value is
  /// exactly the probit of 1 - p_exact.
  double value(double delta) const;

  /// The correction term EC_delta; throws DegenerateVarianceError when
  /// sigma_hat at the evaluation delta is zero.
  double correction(double delta) const;

  double exact_p() const { return p_exact_; }
  double z_margin() const { return z_margin_; }

 private:
  ObservedTable table_;
  TrialDesign design_;
  Margin margin_;
  double p_exact_;
  double probit_exact_;   ///< probit of 1 - clamped p_exact
  double probit_asy_;     ///< probit of 1 - clamped p_asy (== clamped Z_{d0})
  double sigma_margin_;   ///< sigma_hat at constraint -delta0
  double z_margin_;       ///< Z_{delta0}(table)
  double diff_hat_;       ///< phat_t - phat_c
};

/// Correction term (sigma_{d0}/sigma_d) * (probit(1-p_asy) - probit(1-p_exact)),
/// p-values clamped to [1e-12, 1-1e-12] before the probits.
double ec_correction(const ObservedTable& table, const TrialDesign& design,
                     const Margin& margin, double delta,
                     const GridConfig& grid = {});

/// Exact-corrected delta-projected score Z_delta - EC_delta.
double z_ec(const ObservedTable& table, const TrialDesign& design,
            const Margin& margin, double delta, const GridConfig& grid = {});

/// Wald interval: closed form, clamped to [-1, 1].
Interval ci_wald(const ObservedTable& table, const TrialDesign& design,
                 double alpha);

/// Miettinen-Nurminen interval by inverting the delta-projected score.
Interval ci_mn(const ObservedTable& table, const TrialDesign& design,
               double alpha);

/// Chan & Zhang interval from the one-sided exact quantities: scan in steps
/// of grid.delta_step, then bisection of the boundary crossing to 1e-5.
Interval ci_cz(const ObservedTable& table, const TrialDesign& design,
               double alpha, const GridConfig& grid = {});

/// Exact-corrected interval by inverting Z^EC; the margin enters through
/// the correction term.
Interval ci_ec(const ObservedTable& table, const TrialDesign& design,
               const Margin& margin, double alpha, const GridConfig& grid = {});

/// Lower CZ bounds for every table of the design (batch form of the
/// ci_cz lower scan, identical crossings).
std::vector<double> cz_lower_all(const TrialDesign& design, double alpha,
                                 const GridConfig& grid = {});

}  // namespace riskdiff

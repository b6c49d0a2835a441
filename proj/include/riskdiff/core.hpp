#pragma once

#include <cstdint>
#include <vector>

namespace riskdiff {

/// Arm sizes of a two-arm binomial trial. The sample space has
/// (n_t + 1) * (n_c + 1) tables.
struct TrialDesign {
  int n_t;  ///< treatment arm size, >= 1
  int n_c;  ///< control arm size, >= 1

  TrialDesign(int n_t_, int n_c_);

  int space_size() const { return (n_t + 1) * (n_c + 1); }
};

/// Observed success counts (x_t, x_c) within a design.
struct ObservedTable {
  int x_t;
  int x_c;

  bool operator==(const ObservedTable&) const = default;
};

/// True iff 0 <= x_t <= n_t and 0 <= x_c <= n_c.
bool table_valid(const ObservedTable& table, const TrialDesign& design);

/// Throws std::domain_error when the table is outside the design.
void require_valid(const ObservedTable& table, const TrialDesign& design);

/// A point (P_T, delta) of the reparameterized parameter space,
/// with P_C = P_T - delta. Admissible iff max(0,delta) <= P_T <= min(1,1+delta).
struct NullPoint {
  double p_t;
  double delta;

  bool admissible() const;
};

/// Noninferiority margin delta0 in [0, 1).
struct Margin {
  double delta0;

  explicit Margin(double delta0_);
};

/// Row-major index of a table: x_t * (n_c + 1) + x_c.
inline int table_index(const ObservedTable& t, const TrialDesign& d) {
  return t.x_t * (d.n_c + 1) + t.x_c;
}

/// Inverse of table_index.
inline ObservedTable table_at(int index, const TrialDesign& d) {
  return ObservedTable{index / (d.n_c + 1), index % (d.n_c + 1)};
}

/// Joint probability of a table under the reparameterized likelihood,
/// evaluated in log space; boundary probabilities (0 or 1) are exact.
double joint_pmf(const ObservedTable& table, const TrialDesign& design,
                 const NullPoint& point);

/// All tables of the design in row-major order (x_t outer, x_c inner).
std::vector<ObservedTable> enumerate_space(const TrialDesign& design);

/// Standard normal CDF, absolute error below 1e-14 on |z| <= 8.
double std_normal_cdf(double z);

/// Standard normal quantile. Returns -inf at p == 0 and +inf at p == 1;
/// throws std::domain_error outside [0, 1].
double std_normal_quantile(double p);

/// Binomial pmf values P(X = k), k = 0..n, as a dense row. Stable for
/// p near 0 or 1 (seeded at the mode, recurrence outward).
std::vector<double> binomial_pmf_row(int n, double p);

/// In-place variant writing into out (resized to n + 1).
void binomial_pmf_row(int n, double p, std::vector<double>& out);

}  // namespace riskdiff

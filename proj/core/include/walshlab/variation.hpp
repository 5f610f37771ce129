#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "walshlab/funcrep.hpp"

namespace walshlab {

/// A nondecreasing weight sequence 1 <= lambda_1 <= lambda_2 <= ... driving
/// the variation functionals. Values are regularized at access time by
/// lambda_n := max(1, running max of the rule); the built-in families are
/// monotone after the floor at 1, so no state is kept for them. Whether
/// sum 1/lambda_n diverges is not machine-checkable; each built-in family
/// carries the known answer as a flag, user rules leave it unverified.
class WeightSequence {
 public:
  WeightSequence(std::string name, std::function<double(std::int64_t)> rule,
                 bool divergent_reciprocals, bool monotone_rule = false);

  /// lambda_i, i >= 1.
  double at(std::int64_t i) const;
  const std::string& name() const { return name_; }
  bool divergent_reciprocals() const { return divergent_reciprocals_; }

  /// True if the floor/monotone clamp changed any value among the first n.
  bool clamped_below(std::int64_t n) const;

  static WeightSequence ones();
  static WeightSequence harmonic();              // n
  static WeightSequence n_over_log();            // n / log(n+1)
  static WeightSequence n_pow(double gamma);     // n^gamma
  static WeightSequence sqrt_log_family();       // n sqrt(log(n+1)) / log(n+1)
  static WeightSequence cesaro_family(double s); // n^{1-s} sqrt(log(n+1))
  static std::optional<WeightSequence> by_name(const std::string& name);

 private:
  std::string name_;
  std::function<double(std::int64_t)> rule_;
  bool divergent_reciprocals_;
  bool monotone_rule_;
  mutable std::vector<double> cache_;  // running-max materialization for non-monotone rules
};

/// Finite family of nonoverlapping intervals with grid endpoints; anchors,
/// when present, give each interval its own evaluation point on the other
/// axis.
struct IntervalSystem {
  std::vector<std::pair<double, double>> intervals;
  std::vector<double> anchors;  // empty, or one per interval
  bool valid() const;
};

struct VariationResult {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  IntervalSystem witness;         // axis-1 / single-axis system
  IntervalSystem witness_second;  // axis-2 system for the mixed functionals
};

enum class SolveMode { exact, heuristic };

/// Size caps for the exact enumerations, kept in one place.
struct VariationLimits {
  static constexpr int exact_total_cells = 16;   // lambda_var_1/2, sharp_var
  static constexpr int exact_mixed_resolution = 3;  // lambda_var_12, per axis
  static constexpr int exact_star_resolution = 2;   // star_var, per axis
  static constexpr int v_sharp_resolution = 10;
  static constexpr int dp_pool_points = 513;     // heuristic DP candidates up to this grid
};

/// sup_y sup_E sum_i |f(Delta_i, y)| / lambda_i over nonoverlapping interval
/// systems with one shared anchor row. Exact mode enumerates anchors and
/// systems (grid caps apply); heuristic mode returns a greedy witness as the
/// lower bound and the certified mass-fill bound as the upper bound.
///
/// Certified bound: any admissible system has increments d_i <= OSC (the
/// anchored global oscillation) with sum d_i <= U (the per-cell anchored
/// oscillation mass: disjoint interiors cannot extract more than each cell's
/// oscillation). Maximizing sum d_(i)/lambda_i under those two constraints
/// fills OSC-sized chunks against ascending lambda, giving
///   OSC * sum_{i<=r} 1/lambda_i + (U - r*OSC)/lambda_{r+1},  r = floor(U/OSC).
VariationResult lambda_var_1(const Function2D& f, const WeightSequence& w, SolveMode mode);
VariationResult lambda_var_2(const Function2D& f, const WeightSequence& w, SolveMode mode);

/// sup over pairs of systems of the doubly weighted mixed differences
/// f(Delta, J) = f(a,c) - f(a,d) - f(b,c) + f(b,d).
VariationResult lambda_var_12(const Function2D& f, const WeightSequence& w1,
                              const WeightSequence& w2, SolveMode mode);

/// Anchored variant: every interval carries its own anchor on the other axis.
VariationResult sharp_var(const Function2D& f, int axis, const WeightSequence& w, SolveMode mode);

/// Dyachenko-Waterman variant over nonoverlapping rectangles.
VariationResult star_var(const Function2D& f, const WeightSequence& w, SolveMode mode);

/// v_s^#(n, f): maximal unweighted sum of n nonoverlapping anchored
/// increments along the given axis (exact dynamic program; extra intervals
/// beyond the grid capacity contribute zero, so the value saturates).
double v_sharp(const Function2D& f, int axis, int n);
std::vector<double> v_sharp_values(const Function2D& f, int axis, int n_max);

/// sharp_var with the weight window shifted to lambda_{n}, lambda_{n+1}, ...
/// (shift = 1 reproduces sharp_var). Heuristic candidates are built
/// independently of the shift, so values are nonincreasing in it.
VariationResult tail_sharp_var(const Function2D& f, int axis, const WeightSequence& w, int shift,
                               SolveMode mode);

enum class DiagnosticKind { thm2, thm4 };

/// Partial sums of the two summability diagnostics built from v_s^#:
///   thm2: sum_n v_s^#(n) log(n+1) / n^2            (n = 1 .. 2^J)
///   thm4: sum_j v_s^#(2^j) / 2^{j(1-(alpha+beta))}  (j = 1 .. J)
struct DiagnosticSeries {
  std::vector<double> axis1;
  std::vector<double> axis2;
};
DiagnosticSeries embedding_diagnostic(const Function2D& f, DiagnosticKind kind, double alpha,
                                      double beta, int j_max);

}  // namespace walshlab

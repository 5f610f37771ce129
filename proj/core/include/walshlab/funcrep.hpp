#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "walshlab/dyadic.hpp"

namespace walshlab {

/// Piecewise-linear function on [0,1) with breakpoints k*2^{-M}. Stores
/// 2^M + 1 breakpoint values; the last one is the left-limit closure at 1 and
/// is used only for interpolation inside the final cell. Immutable after
/// construction.
class PiecewiseLinear1D {
 public:
  PiecewiseLinear1D(int resolution, std::vector<double> breakpoint_values);

  static PiecewiseLinear1D constant(double c, int resolution);
  static PiecewiseLinear1D ramp(int resolution);  // f(x) = x

  int resolution() const { return resolution_; }
  const std::vector<double>& values() const { return values_; }

  double eval(const DyadicRational& x) const;
  double value_at_breakpoint(std::uint64_t k) const { return values_[k]; }

  /// Exact averages over the 2^N dyadic cells (affine pieces integrate to
  /// trapezoids on the stored grid). Requires N <= resolution().
  std::vector<double> cell_averages(int target_scale) const;

  /// Exact re-sampling onto a finer breakpoint grid.
  PiecewiseLinear1D refined(int finer_resolution) const;

  void write_csv(std::ostream& out) const;
  static PiecewiseLinear1D read_csv(std::istream& in);

 private:
  int resolution_;
  std::vector<double> values_;
};

/// Integral of f against a function that is constant on dyadic cells at the
/// scale implied by step.size() = 2^N. Exact for the stored representation;
/// terms are reduced in ascending cell order (see ordered_sum).
double integrate_against_step(const PiecewiseLinear1D& f, std::span<const double> step);

/// Finite sum of separable terms u_i(x) * v_i(y). All factors share one
/// breakpoint resolution.
class SeparableFunction2D {
 public:
  struct Term {
    PiecewiseLinear1D u;
    PiecewiseLinear1D v;
  };

  explicit SeparableFunction2D(std::vector<Term> terms);
  static SeparableFunction2D product(PiecewiseLinear1D u, PiecewiseLinear1D v);

  int resolution() const { return resolution_; }
  const std::vector<Term>& terms() const { return terms_; }
  double eval(const DyadicRational& x, const DyadicRational& y) const;

 private:
  int resolution_;
  std::vector<Term> terms_;
};

/// Function constant on each dyadic cell of the 2^M x 2^M grid. cell(ix, iy)
/// is the value on [ix 2^{-M}, (ix+1) 2^{-M}) x [iy 2^{-M}, (iy+1) 2^{-M}).
class GridFunction2D {
 public:
  GridFunction2D(int resolution, std::vector<double> cell_values);  // row-major in ix

  int resolution() const { return resolution_; }
  std::uint64_t cells_per_axis() const { return std::uint64_t{1} << resolution_; }
  double cell(std::uint64_t ix, std::uint64_t iy) const { return cells_[ix * cells_per_axis() + iy]; }
  const std::vector<double>& cells() const { return cells_; }

  double eval(const DyadicRational& x, const DyadicRational& y) const;

  void write_csv(std::ostream& out) const;  // header "# walshlab grid2d M=<M>"
  static GridFunction2D read_csv(std::istream& in);

 private:
  int resolution_;
  std::vector<double> cells_;
};

using Function2D = std::variant<GridFunction2D, SeparableFunction2D>;

double eval2d(const Function2D& f, const DyadicRational& x, const DyadicRational& y);
int representation_resolution(const Function2D& f);

/// Probes f for continuity at (x, y) under dyadic increments: at every depth
/// k <= probe_depth the neighbors x (+) 2^{-k} (dyadic addition) and, when it
/// exists, the Euclidean left neighbor x - 2^{-k} are paired across both
/// coordinates, and the largest deviation from f(x,y) is recorded. Verdict:
/// the deviation sequence either falls below `tol` or decays geometrically
/// over the last probe steps. probe_depth should exceed the representation
/// resolution by ~3 for the decay test to see the affine regime.
bool w_continuous_at(const Function2D& f, const DyadicRational& x, const DyadicRational& y,
                     int probe_depth, double tol = 1e-9);

}  // namespace walshlab

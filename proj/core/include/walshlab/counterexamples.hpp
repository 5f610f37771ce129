#pragma once

#include <string>
#include <vector>

#include "walshlab/funcrep.hpp"
#include "walshlab/variation.hpp"

namespace walshlab {

/// Tent train at construction level N: triangular bumps of height 1 over the
/// dyadic cells [j 2^{-2N}, (j+1) 2^{-2N}) for j = 1 .. 2^{2N}-1, vanishing
/// at every cell endpoint and identically zero on [0, 2^{-2N}). Represented
/// exactly at breakpoint resolution 2N+1.
PiecewiseLinear1D build_phi(int N);  // 1 <= N <= 8

/// Tent train with per-cell sign flips taken from sgn D_{q_N} (constant on
/// the tent cells; sgn 0 := 0). Continuous, since the tents vanish where the
/// sign can change.
PiecewiseLinear1D phi_signed_by_dirichlet(int N);

/// Same with sgn K_{2^{2N}}^{-order} cell signs.
PiecewiseLinear1D phi_signed_by_cesaro(int N, double order);

/// g_N(x,y) = phi_N(x) phi_N(y) sgn D_{q_N}(x) sgn D_{q_N}(y).
SeparableFunction2D build_gN(int N);  // N <= 6

/// h_N(x,y) = phi_N(x) phi_N(y) sgn K^{-a}_{2^{2N}}(x) sgn K^{-b}_{2^{2N}}(y).
SeparableFunction2D build_hN(int N, double alpha, double beta);  // N <= 5

/// Exact integral of phi_N |D_{q_N}| (closed per-cell form: each tent has
/// mean 1/2 on its cell and the kernel is cell-constant).
double integral_phi_abs_dirichlet(int N);

/// Exact integral of phi_N |K^{-order}_{2^{2N}}|.
double integral_phi_abs_cesaro(int N, double order);  // N <= 6

double harmonic_number(std::int64_t n);

/// Structured result of one divergence experiment.
struct ProbeReport {
  std::string family;        // "partial-sum" or "cesaro"
  int N = 0;
  double functional_value = 0.0;         // |S| or |sigma| at (0,0)
  std::vector<double> kernel_integrals;  // {I_N} or {J_alpha, J_beta}
  double bound_check = 0.0;              // computed lower-bound expression
  double variation_lower = 0.0;
  double variation_upper = 0.0;          // certified budget for the witness function
  double growth_ratio = 0.0;             // functional_value / variation_upper
  std::string lambda_name;
  bool lambda_clamped = false;
};

/// Blow-up of S_{q_N,q_N}(0,0; g_N) = I_N^2 against the Lambda^# budget of
/// g_N. bound_check is H_{2^{2N}-1}/8, which I_N provably dominates (checked
/// term by term in exact integers).
ProbeReport probe_partial_sum(int N, const WeightSequence& w);  // N <= 6

/// Blow-up of sigma^{-a,-b}_{2^{2N},2^{2N}}(0,0; h_N) = J_a * J_b.
/// bound_check is the constant-free growth floor
/// functional_value(N-1) * 2^{1.6 (a+b)} (zero at N = 1).
ProbeReport probe_cesaro(int N, double alpha, double beta, const WeightSequence& w);  // N <= 4

/// Band integrals of |K^{-order}_{2^N}| over [2^{m-N-1}, 2^{m-N}), m = 1..N.
std::vector<double> tev_band_integrals(int N, double order);  // N <= 10

/// Least-squares slope of log2(band integral) against m over the interior
/// bands m = 2..N-1; the outer band [1/2, 1) only meets its floor at the
/// constant level and would read the exponent low.
double tev_band_slope(const std::vector<double>& bands);

}  // namespace walshlab

#include "walshlab/counterexamples.hpp"

#include <cmath>
#include <stdexcept>

#include "walshlab/series.hpp"
#include "walshlab/walsh.hpp"

namespace walshlab {

namespace {

int sgn(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Breakpoint values of the tent train with per-cell signs: the value is zero
// at even breakpoints (cell endpoints) and sign_j at odd ones (tent apexes),
// with the j = 0 cell left flat.
PiecewiseLinear1D signed_tents(int N, const std::vector<int>& cell_sign) {
  const std::uint64_t cells = std::uint64_t{1} << (2 * N);
  std::vector<double> v(2 * cells + 1, 0.0);
  for (std::uint64_t j = 1; j < cells; ++j)
    v[2 * j + 1] = static_cast<double>(cell_sign[j]);
  return PiecewiseLinear1D(2 * N + 1, std::move(v));
}

std::vector<int> dirichlet_cell_signs(int N) {
  const std::uint64_t cells = std::uint64_t{1} << (2 * N);
  const std::int64_t qn = q_index(N);
  std::vector<int> s(cells);
  for (std::uint64_t j = 0; j < cells; ++j) {
    const std::int64_t d = dirichlet(qn, DyadicRational(j, 2 * N));
    s[j] = d > 0 ? 1 : (d < 0 ? -1 : 0);
  }
  return s;
}

std::vector<int> cesaro_cell_signs(int N, double order) {
  const std::vector<double> k = cesaro_kernel_cells(std::int64_t{1} << (2 * N), order, 2 * N);
  std::vector<int> s(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) s[j] = sgn(k[j]);
  return s;
}

void require_range(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

PiecewiseLinear1D build_phi(int N) {
  require_range(N >= 1 && N <= 8, "build_phi requires 1 <= N <= 8");
  const std::uint64_t cells = std::uint64_t{1} << (2 * N);
  std::vector<int> plus(cells, 1);
  return signed_tents(N, plus);
}

PiecewiseLinear1D phi_signed_by_dirichlet(int N) {
  require_range(N >= 1 && N <= 8, "phi_signed_by_dirichlet requires 1 <= N <= 8");
  return signed_tents(N, dirichlet_cell_signs(N));
}

PiecewiseLinear1D phi_signed_by_cesaro(int N, double order) {
  require_range(N >= 1 && N <= 8, "phi_signed_by_cesaro requires 1 <= N <= 8");
  return signed_tents(N, cesaro_cell_signs(N, order));
}

SeparableFunction2D build_gN(int N) {
  require_range(N >= 1 && N <= 6, "build_gN requires 1 <= N <= 6");
  PiecewiseLinear1D a = phi_signed_by_dirichlet(N);
  PiecewiseLinear1D b = a;
  return SeparableFunction2D::product(std::move(a), std::move(b));
}

SeparableFunction2D build_hN(int N, double alpha, double beta) {
  require_range(N >= 1 && N <= 5, "build_hN requires 1 <= N <= 5");
  require_range(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0 && alpha + beta < 1.0,
                "build_hN requires alpha, beta in (0,1) with alpha + beta < 1");
  return SeparableFunction2D::product(phi_signed_by_cesaro(N, -alpha),
                                      phi_signed_by_cesaro(N, -beta));
}

double integral_phi_abs_dirichlet(int N) {
  require_range(N >= 1 && N <= 8, "integral_phi_abs_dirichlet requires 1 <= N <= 8");
  const std::uint64_t cells = std::uint64_t{1} << (2 * N);
  const std::int64_t qn = q_index(N);
  std::int64_t total = 0;  // sum over tents of |D_{q_N}| at the cell left endpoint
  for (std::uint64_t j = 1; j < cells; ++j) {
    std::int64_t d = dirichlet(qn, DyadicRational(j, 2 * N));
    total += d < 0 ? -d : d;
  }
  // Each tent integrates to half its cell: 2^{-2N-1}.
  return static_cast<double>(total) / static_cast<double>(std::uint64_t{2} << (2 * N));
}

double integral_phi_abs_cesaro(int N, double order) {
  require_range(N >= 1 && N <= 6, "integral_phi_abs_cesaro requires 1 <= N <= 6");
  const std::vector<double> k = cesaro_kernel_cells(std::int64_t{1} << (2 * N), order, 2 * N);
  double total = 0.0;
  for (std::size_t j = 1; j < k.size(); ++j) total += std::abs(k[j]);
  return total / static_cast<double>(std::uint64_t{2} << (2 * N));
}

double harmonic_number(std::int64_t n) {
  double acc = 0.0;
  for (std::int64_t j = 1; j <= n; ++j) acc += 1.0 / static_cast<double>(j);
  return acc;
}

ProbeReport probe_partial_sum(int N, const WeightSequence& w) {
  require_range(N >= 1 && N <= 6, "probe_partial_sum requires 1 <= N <= 6");
  ProbeReport r;
  r.family = "partial-sum";
  r.N = N;
  r.lambda_name = w.name();

  const std::uint64_t cells = std::uint64_t{1} << (2 * N);
  const std::int64_t qn = q_index(N);

  // Per-tent floor 4 j |D_{q_N}(j 2^{-2N})| >= 2^{2N}, checked in integers;
  // summing it gives I_N >= H_{2^{2N}-1}/8.
  for (std::uint64_t j = 1; j < cells; ++j) {
    std::int64_t d = dirichlet(qn, DyadicRational(j, 2 * N));
    if (d < 0) d = -d;
    if (4 * j * static_cast<std::uint64_t>(d) < cells)
      throw std::logic_error("Dirichlet kernel floor violated");
  }

  const double integral = integral_phi_abs_dirichlet(N);
  r.kernel_integrals = {integral};
  r.functional_value = integral * integral;
  r.bound_check = harmonic_number(static_cast<std::int64_t>(cells) - 1) / 8.0;
  if (integral < r.bound_check) throw std::logic_error("harmonic floor violated");

  const Function2D g = build_gN(N);
  const VariationResult var = sharp_var(g, 1, w, SolveMode::heuristic);
  r.variation_lower = var.lower;
  r.variation_upper = var.upper;
  r.growth_ratio = r.functional_value / r.variation_upper;
  r.lambda_clamped = w.clamped_below(static_cast<std::int64_t>(2 * cells));
  return r;
}

ProbeReport probe_cesaro(int N, double alpha, double beta, const WeightSequence& w) {
  require_range(N >= 1 && N <= 4, "probe_cesaro requires 1 <= N <= 4");
  require_range(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0 && alpha + beta < 1.0,
                "probe_cesaro requires alpha, beta in (0,1) with alpha + beta < 1");
  ProbeReport r;
  r.family = "cesaro";
  r.N = N;
  r.lambda_name = w.name();

  const double ja = integral_phi_abs_cesaro(N, -alpha);
  const double jb = integral_phi_abs_cesaro(N, -beta);
  r.kernel_integrals = {ja, jb};
  r.functional_value = ja * jb;
  if (N >= 2) {
    const double prev = integral_phi_abs_cesaro(N - 1, -alpha) * integral_phi_abs_cesaro(N - 1, -beta);
    r.bound_check = prev * std::pow(2.0, 1.6 * (alpha + beta));
  }

  const Function2D h = build_hN(N, alpha, beta);
  const VariationResult var = sharp_var(h, 1, w, SolveMode::heuristic);
  r.variation_lower = var.lower;
  r.variation_upper = var.upper;
  r.growth_ratio = r.functional_value / r.variation_upper;
  r.lambda_clamped = w.clamped_below(static_cast<std::int64_t>(std::uint64_t{2} << (2 * N)));
  return r;
}

std::vector<double> tev_band_integrals(int N, double order) {
  require_range(N >= 1 && N <= 10, "tev_band_integrals requires 1 <= N <= 10");
  require_range(order < 0.0 && order > -1.0, "tev_band_integrals requires order in (-1, 0)");
  const std::vector<double> k = cesaro_kernel_cells(std::int64_t{1} << N, order, N);
  const double width = 1.0 / static_cast<double>(std::uint64_t{1} << N);
  std::vector<double> bands(static_cast<std::size_t>(N), 0.0);
  for (int m = 1; m <= N; ++m) {
    const std::uint64_t lo = std::uint64_t{1} << (m - 1);
    const std::uint64_t hi = std::uint64_t{1} << m;
    double acc = 0.0;
    for (std::uint64_t j = lo; j < hi; ++j) acc += std::abs(k[j]);
    bands[static_cast<std::size_t>(m) - 1] = acc * width;
  }
  return bands;
}

double tev_band_slope(const std::vector<double>& bands) {
  // Least squares of log2(band) against m over the interior bands m = 2..N-1.
  // The outermost band [1/2, 1) realizes its floor only up to the constant
  // (its per-step growth collapses to ~2^{alpha/4}), so including it reads
  // the exponent low; the interior steps sit right at 2^{alpha}.
  const int n = static_cast<int>(bands.size());
  if (n < 4) throw std::invalid_argument("need at least four bands for a slope");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int m = 2; m <= n - 1; ++m) {
    const double b = bands[static_cast<std::size_t>(m) - 1];
    if (!(b > 0.0)) throw std::invalid_argument("band integrals must be positive");
    const double x = static_cast<double>(m);
    const double y = std::log2(b);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double c = static_cast<double>(count);
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

}  // namespace walshlab

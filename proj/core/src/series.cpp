#include "walshlab/series.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "walshlab/summation.hpp"
#include "walshlab/walsh.hpp"

namespace walshlab {

namespace {

bool is_forbidden_order(double order) {
  return order <= -1.0 && order == std::floor(order);
}

// Weight tables A^{order-1} appear with order-1 = -1 (plain partial sums);
// the recurrence is still well defined there, only normalizers must avoid
// negative integer orders. Hence an unguarded path for weights.
std::vector<double> raw_cesaro_values(double order, int n) {
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  v[0] = 1.0;
  for (int k = 1; k <= n; ++k)
    v[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(k) - 1] * (order + k) / k;
  return v;
}

int ceil_log2(std::int64_t n) {
  int s = 0;
  while ((std::int64_t{1} << s) < n) ++s;
  return s;
}

std::uint64_t digit_bits_of(const DyadicRational& x) {
  std::uint64_t out = 0;
  for (int j = 0; j < x.scale(); ++j)
    out |= static_cast<std::uint64_t>(x.digit(j)) << j;
  return out;
}

}  // namespace

CesaroTable::CesaroTable(double order, int n) : order_(order) {
  if (is_forbidden_order(order)) throw std::invalid_argument("Cesàro order must not be a negative integer");
  if (n < 0) throw std::invalid_argument("Cesàro table length must be nonnegative");
  values_.resize(static_cast<std::size_t>(n) + 1);
  values_[0] = 1.0;
  for (int k = 1; k <= n; ++k)
    values_[static_cast<std::size_t>(k)] =
        values_[static_cast<std::size_t>(k) - 1] * (order + k) / k;
}

CesaroTable cesaro_numbers(double order, int n) { return CesaroTable(order, n); }

std::vector<std::int64_t> dirichlet_cells(std::int64_t n, int scale) {
  if (n < 1) throw std::invalid_argument("Dirichlet kernel index must be positive");
  if ((std::int64_t{1} << scale) < n)
    throw std::invalid_argument("cell scale too coarse for the kernel index");
  const std::uint64_t cells = std::uint64_t{1} << scale;
  std::vector<std::int64_t> out(cells);
  for (std::uint64_t c = 0; c < cells; ++c)
    out[c] = dirichlet(n, DyadicRational(c, scale), DirichletStrategy::recursive);
  return out;
}

std::vector<double> cesaro_kernel_cells(std::int64_t n, double order, int scale) {
  if (n < 1) throw std::invalid_argument("Cesàro kernel index must be positive");
  if ((std::int64_t{1} << scale) < n)
    throw std::invalid_argument("cell scale too coarse for the kernel index");
  const CesaroTable norm(order, static_cast<int>(n) - 1);
  const std::vector<double> wt = raw_cesaro_values(order - 1.0, static_cast<int>(n) - 1);
  const double denom = norm.at(static_cast<int>(n) - 1);
  if (denom == 0.0) throw std::invalid_argument("vanishing Cesàro normalizer");

  const std::uint64_t cells = std::uint64_t{1} << scale;
  std::vector<double> out(cells);
  for (std::uint64_t c = 0; c < cells; ++c) {
    const std::uint64_t xbits = digit_bits_of(DyadicRational(c, scale));
    std::int64_t d = 0;  // D_k built incrementally: D_k = D_{k-1} + w_{k-1}
    double acc = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
      d += (std::popcount(static_cast<std::uint64_t>(k - 1) & xbits) & 1) ? -1 : 1;
      acc += wt[static_cast<std::size_t>(n - k)] * static_cast<double>(d);
    }
    out[c] = acc / denom;
  }
  return out;
}

double cesaro_kernel(std::int64_t n, double order, const DyadicRational& x) {
  if (n < 1) throw std::invalid_argument("Cesàro kernel index must be positive");
  const CesaroTable norm(order, static_cast<int>(n) - 1);
  const std::vector<double> wt = raw_cesaro_values(order - 1.0, static_cast<int>(n) - 1);
  const double denom = norm.at(static_cast<int>(n) - 1);
  if (denom == 0.0) throw std::invalid_argument("vanishing Cesàro normalizer");
  const std::uint64_t xbits = digit_bits_of(x);
  std::int64_t d = 0;
  double acc = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) {
    d += (std::popcount(static_cast<std::uint64_t>(k - 1) & xbits) & 1) ? -1 : 1;
    acc += wt[static_cast<std::size_t>(n - k)] * static_cast<double>(d);
  }
  return acc / denom;
}

CoefficientMatrix::CoefficientMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("coefficient matrix must be nonempty");
  a_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

namespace {

// 1D coefficient vector of a piecewise-linear factor: exact for indices
// below 2^resolution because w_k is cell-constant there.
std::vector<double> factor_coefficients(const PiecewiseLinear1D& f) {
  return fwht(f.cell_averages(f.resolution()));
}

struct GridSpectrum {
  int resolution;
  std::vector<double> coef;  // 2^M x 2^M, row-major in m
};

GridSpectrum grid_spectrum(const GridFunction2D& g) {
  const int m = g.resolution();
  const std::size_t n = std::size_t{1} << m;
  std::vector<double> a = g.cells();
  for (std::size_t r = 0; r < n; ++r) fwht_inplace(std::span(a).subspan(r * n, n));
  std::vector<double> col(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) col[r] = a[r * n + c];
    fwht_inplace(col);
    for (std::size_t r = 0; r < n; ++r) a[r * n + c] = col[r];
  }
  return {m, std::move(a)};
}

SeparableFunction2D refined_separable(const SeparableFunction2D& f, int resolution) {
  if (resolution <= f.resolution()) return f;
  std::vector<SeparableFunction2D::Term> terms;
  terms.reserve(f.terms().size());
  for (const auto& t : f.terms())
    terms.push_back({t.u.refined(resolution), t.v.refined(resolution)});
  return SeparableFunction2D(std::move(terms));
}

std::vector<int> walsh_signs(std::int64_t count, const DyadicRational& x) {
  const std::uint64_t xbits = digit_bits_of(x);
  std::vector<int> s(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k)
    s[static_cast<std::size_t>(k)] = (std::popcount(static_cast<std::uint64_t>(k) & xbits) & 1) ? -1 : 1;
  return s;
}

}  // namespace

CoefficientMatrix fourier_coeffs(const Function2D& f, int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("coefficient index ranges must be positive");
  const int res = representation_resolution(f);
  const std::int64_t cap = std::int64_t{1} << res;
  if (rows > cap || cols > cap)
    throw std::out_of_range("coefficient indices exceed 2^resolution");

  CoefficientMatrix out(rows, cols);
  if (const auto* g = std::get_if<GridFunction2D>(&f)) {
    const GridSpectrum s = grid_spectrum(*g);
    const std::size_t n = std::size_t{1} << s.resolution;
    for (int m = 0; m < rows; ++m)
      for (int k = 0; k < cols; ++k)
        out.at(m, k) = s.coef[static_cast<std::size_t>(m) * n + static_cast<std::size_t>(k)];
    return out;
  }
  const auto& sep = std::get<SeparableFunction2D>(f);
  for (const auto& t : sep.terms()) {
    const std::vector<double> cu = factor_coefficients(t.u);
    const std::vector<double> cv = factor_coefficients(t.v);
    for (int m = 0; m < rows; ++m)
      for (int k = 0; k < cols; ++k)
        out.at(m, k) += cu[static_cast<std::size_t>(m)] * cv[static_cast<std::size_t>(k)];
  }
  return out;
}

namespace {

// Kernel-strategy axis weights: I[c] = integral of kern(x (+) s) over the
// grid cell c at `grid_scale`, where kern is given on cells at kern_scale >=
// grid_scale and (+) permutes equal-scale cells by XOR.
template <class Kernel>
std::vector<double> translated_cell_integrals(const Kernel& kern, int kern_scale,
                                              const DyadicRational& x, int grid_scale) {
  const std::uint64_t fine = std::uint64_t{1} << kern_scale;
  const std::uint64_t xn = x.numerator_at_scale(kern_scale);
  const std::uint64_t per = fine >> grid_scale;
  const double width = 1.0 / static_cast<double>(fine);
  std::vector<double> out(std::uint64_t{1} << grid_scale, 0.0);
  for (std::uint64_t c = 0; c < fine; ++c)
    out[c / per] += static_cast<double>(kern[c ^ xn]) * width;
  return out;
}

double separable_pair_integral(const SeparableFunction2D& f, std::span<const double> step_x,
                               std::span<const double> step_y) {
  double acc = 0.0;
  for (const auto& t : f.terms())
    acc += integrate_against_step(t.u, step_x) * integrate_against_step(t.v, step_y);
  return acc;
}

double grid_pair_integral(const GridFunction2D& g, std::span<const double> ix,
                          std::span<const double> iy) {
  const std::uint64_t n = g.cells_per_axis();
  std::vector<double> terms;
  terms.reserve(n * n);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b) terms.push_back(g.cell(a, b) * ix[a] * iy[b]);
  return ordered_sum(terms);
}

}  // namespace

double partial_sum(const Function2D& f, std::int64_t m_count, std::int64_t n_count,
                   const DyadicRational& x, const DyadicRational& y, SumStrategy strategy) {
  if (m_count < 1 || n_count < 1)
    throw std::invalid_argument("partial sum extents must be positive");
  const int res = representation_resolution(f);

  if (strategy == SumStrategy::coeff) {
    if (const auto* g = std::get_if<GridFunction2D>(&f)) {
      // Coefficients of a cell-constant function vanish beyond its resolution.
      const std::int64_t mc = std::min(m_count, std::int64_t{1} << g->resolution());
      const std::int64_t nc = std::min(n_count, std::int64_t{1} << g->resolution());
      const CoefficientMatrix c = fourier_coeffs(f, static_cast<int>(mc), static_cast<int>(nc));
      const std::vector<int> sx = walsh_signs(mc, x);
      const std::vector<int> sy = walsh_signs(nc, y);
      std::vector<double> rows(static_cast<std::size_t>(mc));
      for (std::int64_t a = 0; a < mc; ++a) {
        double r = 0.0;
        for (std::int64_t b = 0; b < nc; ++b)
          r += c.at(static_cast<int>(a), static_cast<int>(b)) * sy[static_cast<std::size_t>(b)];
        rows[static_cast<std::size_t>(a)] = r * sx[static_cast<std::size_t>(a)];
      }
      return ordered_sum(rows);
    }
    const auto& sep0 = std::get<SeparableFunction2D>(f);
    const int need = ceil_log2(std::max(m_count, n_count));
    const SeparableFunction2D sep = refined_separable(sep0, std::max(res, need));
    const std::vector<int> sx = walsh_signs(m_count, x);
    const std::vector<int> sy = walsh_signs(n_count, y);
    double acc = 0.0;
    for (const auto& t : sep.terms()) {
      const std::vector<double> cu = factor_coefficients(t.u);
      const std::vector<double> cv = factor_coefficients(t.v);
      double ax = 0.0, ay = 0.0;
      for (std::int64_t a = 0; a < m_count; ++a) ax += cu[static_cast<std::size_t>(a)] * sx[static_cast<std::size_t>(a)];
      for (std::int64_t b = 0; b < n_count; ++b) ay += cv[static_cast<std::size_t>(b)] * sy[static_cast<std::size_t>(b)];
      acc += ax * ay;
    }
    return acc;
  }

  // kernel strategy
  const int lx = std::max({res, ceil_log2(m_count), x.scale()});
  const int ly = std::max({res, ceil_log2(n_count), y.scale()});
  const std::vector<std::int64_t> dx = dirichlet_cells(m_count, lx);
  const std::vector<std::int64_t> dy = dirichlet_cells(n_count, ly);
  if (const auto* g = std::get_if<GridFunction2D>(&f)) {
    return grid_pair_integral(*g, translated_cell_integrals(dx, lx, x, g->resolution()),
                              translated_cell_integrals(dy, ly, y, g->resolution()));
  }
  const auto& sep0 = std::get<SeparableFunction2D>(f);
  const SeparableFunction2D sep = refined_separable(sep0, std::max(lx, ly));
  std::vector<double> stepx(dx.begin(), dx.end());
  std::vector<double> stepy(dy.begin(), dy.end());
  const std::uint64_t xn = x.numerator_at_scale(lx);
  const std::uint64_t yn = y.numerator_at_scale(ly);
  std::vector<double> px(stepx.size()), py(stepy.size());
  for (std::uint64_t c = 0; c < stepx.size(); ++c) px[c] = stepx[c ^ xn];
  for (std::uint64_t c = 0; c < stepy.size(); ++c) py[c] = stepy[c ^ yn];
  return separable_pair_integral(sep, px, py);
}

double cesaro_mean(const Function2D& f, std::int64_t n, std::int64_t m, double alpha, double beta,
                   const DyadicRational& x, const DyadicRational& y, MeanStrategy strategy) {
  if (n < 1 || m < 1) throw std::invalid_argument("Cesàro mean extents must be positive");
  const CesaroTable an(alpha, static_cast<int>(n) - 1);
  const CesaroTable bm(beta, static_cast<int>(m) - 1);
  const double denom = an.at(static_cast<int>(n) - 1) * bm.at(static_cast<int>(m) - 1);
  if (denom == 0.0) throw std::invalid_argument("vanishing Cesàro normalizer");
  const std::vector<double> wa = raw_cesaro_values(alpha - 1.0, static_cast<int>(n) - 1);
  const std::vector<double> wb = raw_cesaro_values(beta - 1.0, static_cast<int>(m) - 1);

  if (strategy == MeanStrategy::definition) {
    const int res = representation_resolution(f);
    if (const auto* g = std::get_if<GridFunction2D>(&f)) {
      // Saturated prefix sums: S_{i,j} stops changing once i or j passes the
      // resolution cap, which is exact for cell-constant functions.
      const std::int64_t cap = std::int64_t{1} << g->resolution();
      const std::int64_t mc = std::min(n, cap), nc = std::min(m, cap);
      const CoefficientMatrix c = fourier_coeffs(f, static_cast<int>(mc), static_cast<int>(nc));
      const std::vector<int> sx = walsh_signs(mc, x);
      const std::vector<int> sy = walsh_signs(nc, y);
      // prefix[i][j] = S_{i,j}
      std::vector<double> prefix(static_cast<std::size_t>(mc + 1) * (nc + 1), 0.0);
      const auto P = [&](std::int64_t i, std::int64_t j) -> double& {
        return prefix[static_cast<std::size_t>(i) * (nc + 1) + j];
      };
      for (std::int64_t i = 1; i <= mc; ++i)
        for (std::int64_t j = 1; j <= nc; ++j)
          P(i, j) = P(i - 1, j) + P(i, j - 1) - P(i - 1, j - 1) +
                    c.at(static_cast<int>(i - 1), static_cast<int>(j - 1)) *
                        sx[static_cast<std::size_t>(i - 1)] * sy[static_cast<std::size_t>(j - 1)];
      double acc = 0.0;
      for (std::int64_t i = 1; i <= n; ++i) {
        const double wi = wa[static_cast<std::size_t>(n - i)];
        double row = 0.0;
        for (std::int64_t j = 1; j <= m; ++j)
          row += wb[static_cast<std::size_t>(m - j)] * P(std::min(i, mc), std::min(j, nc));
        acc += wi * row;
      }
      return acc / denom;
    }
    const auto& sep0 = std::get<SeparableFunction2D>(f);
    const int need = ceil_log2(std::max(n, m));
    const SeparableFunction2D sep = refined_separable(sep0, std::max(res, need));
    const std::vector<int> sx = walsh_signs(n, x);
    const std::vector<int> sy = walsh_signs(m, y);
    double acc = 0.0;
    for (const auto& t : sep.terms()) {
      const std::vector<double> cu = factor_coefficients(t.u);
      const std::vector<double> cv = factor_coefficients(t.v);
      double ax = 0.0, prefix_u = 0.0;
      for (std::int64_t i = 1; i <= n; ++i) {
        prefix_u += cu[static_cast<std::size_t>(i - 1)] * sx[static_cast<std::size_t>(i - 1)];
        ax += wa[static_cast<std::size_t>(n - i)] * prefix_u;
      }
      double ay = 0.0, prefix_v = 0.0;
      for (std::int64_t j = 1; j <= m; ++j) {
        prefix_v += cv[static_cast<std::size_t>(j - 1)] * sy[static_cast<std::size_t>(j - 1)];
        ay += wb[static_cast<std::size_t>(m - j)] * prefix_v;
      }
      acc += ax * ay;
    }
    return acc / denom;
  }

  // kernel strategy
  const int res = representation_resolution(f);
  const int lx = std::max({res, ceil_log2(n), x.scale()});
  const int ly = std::max({res, ceil_log2(m), y.scale()});
  const std::vector<double> kx = cesaro_kernel_cells(n, alpha, lx);
  const std::vector<double> ky = cesaro_kernel_cells(m, beta, ly);
  if (const auto* g = std::get_if<GridFunction2D>(&f)) {
    return grid_pair_integral(*g, translated_cell_integrals(kx, lx, x, g->resolution()),
                              translated_cell_integrals(ky, ly, y, g->resolution()));
  }
  const auto& sep0 = std::get<SeparableFunction2D>(f);
  const SeparableFunction2D sep = refined_separable(sep0, std::max(lx, ly));
  const std::uint64_t xn = x.numerator_at_scale(lx);
  const std::uint64_t yn = y.numerator_at_scale(ly);
  std::vector<double> px(kx.size()), py(ky.size());
  for (std::uint64_t c = 0; c < kx.size(); ++c) px[c] = kx[c ^ xn];
  for (std::uint64_t c = 0; c < ky.size(); ++c) py[c] = ky[c ^ yn];
  return separable_pair_integral(sep, px, py);
}

}  // namespace walshlab

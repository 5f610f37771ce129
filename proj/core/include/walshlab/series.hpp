#pragma once

#include <cstdint>
#include <vector>

#include "walshlab/dyadic.hpp"
#include "walshlab/funcrep.hpp"

namespace walshlab {

/// Cesàro numbers A_0^a = 1, A_n^a = A_{n-1}^a (a+n)/n, a not a negative
/// integer. The multiplicative recurrence is used instead of the factorial
/// quotient so large n never overflows; the consistency of the table against
/// the convolution identity A_n^a = sum_k A_{n-k}^{a-1} is a test invariant.
class CesaroTable {
 public:
  CesaroTable(double order, int n);

  double order() const { return order_; }
  int max_index() const { return static_cast<int>(values_.size()) - 1; }
  double at(int k) const { return values_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& values() const { return values_; }

 private:
  double order_;
  std::vector<double> values_;
};

CesaroTable cesaro_numbers(double order, int n);

/// Cesàro kernel K_n^a(x) = (1/A_{n-1}^a) sum_{k=1}^n A_{n-k}^{a-1} D_k(x).
/// Dirichlet values are exact integers; only the weights are floating point.
double cesaro_kernel(std::int64_t n, double order, const DyadicRational& x);

/// K_n^a on every dyadic cell at `scale` (the kernel is constant there as
/// soon as 2^scale >= n). Cost O(n 2^scale) via the incremental Dirichlet sum.
std::vector<double> cesaro_kernel_cells(std::int64_t n, double order, int scale);

/// D_n on every dyadic cell at `scale`, exact integers; requires 2^scale >= n.
std::vector<std::int64_t> dirichlet_cells(std::int64_t n, int scale);

/// Matrix of Walsh-Fourier coefficients f^(m,n), 0 <= m < rows, 0 <= n < cols.
class CoefficientMatrix {
 public:
  CoefficientMatrix(int rows, int cols);
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double at(int m, int n) const { return a_[static_cast<std::size_t>(m) * cols_ + n]; }
  double& at(int m, int n) { return a_[static_cast<std::size_t>(m) * cols_ + n]; }

 private:
  int rows_, cols_;
  std::vector<double> a_;
};

/// Coefficients via the fast transform of exact cell averages (separable
/// inputs transform each factor). Exact for indices below 2^resolution;
/// requesting more than that throws.
CoefficientMatrix fourier_coeffs(const Function2D& f, int rows, int cols);

enum class SumStrategy { coeff, kernel };

/// Rectangular partial sum S_{M,N}(x,y;f). The coeff strategy sums
/// coefficients against Walsh signs (piecewise-linear inputs are refined so
/// every requested coefficient is exact; piecewise-constant inputs have
/// exactly zero coefficients beyond their resolution, so the index range is
/// clamped). The kernel strategy integrates f against translated Dirichlet
/// kernels, exact because both factors are cell-constant at a common scale.
double partial_sum(const Function2D& f, std::int64_t m_count, std::int64_t n_count,
                   const DyadicRational& x, const DyadicRational& y,
                   SumStrategy strategy = SumStrategy::coeff);

enum class MeanStrategy { definition, kernel };

/// (C; a, b) mean of the double Walsh-Fourier series at (x, y): the
/// definition strategy averages partial sums with A^{a-1}, A^{b-1} weights;
/// the kernel strategy integrates f against translated Cesàro kernels.
double cesaro_mean(const Function2D& f, std::int64_t n, std::int64_t m, double alpha, double beta,
                   const DyadicRational& x, const DyadicRational& y,
                   MeanStrategy strategy = MeanStrategy::definition);

}  // namespace walshlab

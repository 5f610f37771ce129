#include "walshlab/walsh.hpp"

#include <bit>
#include <stdexcept>

namespace walshlab {

namespace {

// Digits of x packed LSB-first: bit j of the result is x_j. Walsh evaluation
// is then a parity of a single AND.
std::uint64_t digit_bits(const DyadicRational& x) {
  std::uint64_t out = 0;
  const int s = x.scale();
  const std::uint64_t p = x.numerator();
  for (int j = 0; j < s; ++j) out |= ((p >> (s - 1 - j)) & 1u) << j;
  return out;
}

int sign_from_parity(std::uint64_t bits) { return (std::popcount(bits) & 1) ? -1 : 1; }

// D_{2^a}(x): 2^a if all digits x_0..x_{a-1} vanish, else 0.
std::int64_t dirichlet_pow2(int a, std::uint64_t xbits) {
  const std::uint64_t mask = (a >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << a) - 1);
  return (xbits & mask) == 0 ? (std::int64_t{1} << a) : 0;
}

std::int64_t dirichlet_direct(std::int64_t n, std::uint64_t xbits) {
  std::int64_t sum = 0;
  for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(n); ++k)
    sum += sign_from_parity(k & xbits);
  return sum;
}

std::int64_t dirichlet_recursive(std::int64_t n, std::uint64_t xbits) {
  std::int64_t result = 0;
  int sign = 1;
  for (int a = 62; a >= 0; --a) {
    if ((n >> a) & 1) {
      result += sign * dirichlet_pow2(a, xbits);
      sign *= ((xbits >> a) & 1u) ? -1 : 1;  // r_a(x)
    }
  }
  return result;
}

std::int64_t dirichlet_w3(std::int64_t n, std::uint64_t xbits) {
  std::int64_t sum = 0;
  for (int j = 0; j < 63; ++j) {
    if ((n >> j) & 1) {
      const int rj = ((xbits >> j) & 1u) ? -1 : 1;
      sum += rj * dirichlet_pow2(j, xbits);
    }
  }
  return sign_from_parity(static_cast<std::uint64_t>(n) & xbits) * sum;
}

}  // namespace

int rademacher(int n, const DyadicRational& x) {
  if (n < 0) throw std::invalid_argument("negative Rademacher index");
  return x.digit(n) == 0 ? 1 : -1;
}

int walsh(std::uint64_t k, const DyadicRational& x) { return sign_from_parity(k & digit_bits(x)); }

std::int64_t dirichlet(std::int64_t n, const DyadicRational& x, DirichletStrategy strategy) {
  if (n < 1) throw std::invalid_argument("Dirichlet kernel index must be positive");
  const std::uint64_t xbits = digit_bits(x);
  switch (strategy) {
    case DirichletStrategy::direct: return dirichlet_direct(n, xbits);
    case DirichletStrategy::recursive: return dirichlet_recursive(n, xbits);
    case DirichletStrategy::w3: return dirichlet_w3(n, xbits);
  }
  throw std::invalid_argument("unknown Dirichlet strategy");
}

std::int64_t q_index(int n) {
  if (n < 1 || n > 31) throw std::invalid_argument("q_index requires 1 <= n <= 31");
  std::int64_t q = 0;
  for (int k = 0; k < n; ++k) q += std::int64_t{1} << (2 * k);
  return q;
}

void fwht_inplace(std::span<double> values) {
  const std::size_t n = values.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fwht requires a power-of-two length");

  // Natural-order butterfly ...
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = values[j];
        const double b = values[j + h];
        values[j] = a + b;
        values[j + h] = a - b;
      }
    }
  }

  // ... then a bit reversal to land in Paley order: w_k(j 2^{-M}) equals
  // (-1)^{popcount(rev_M(k) & j)}, so Paley index k reads natural index rev(k).
  int bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    if (r > i) std::swap(values[i], values[r]);
  }

  const double norm = 1.0 / static_cast<double>(n);
  for (double& v : values) v *= norm;
}

std::vector<double> fwht(std::vector<double> values) {
  fwht_inplace(values);
  return values;
}

LowestReport check_lowest(int n, int grid_scale) {
  if (n < 1) throw std::invalid_argument("check_lowest requires n >= 1");
  if (grid_scale < 2 * n + 1) throw std::invalid_argument("grid_scale must be at least 2n+1");
  const std::int64_t qn = q_index(n);
  const std::uint64_t total = std::uint64_t{1} << grid_scale;
  const std::uint64_t j_start = std::uint64_t{1} << (grid_scale - 2 * n);  // x = 2^{-2n}

  LowestReport report;
  report.n = n;
  report.grid_scale = grid_scale;

  std::uint64_t best_num = ~std::uint64_t{0};
  std::uint64_t best_j = j_start;
  for (std::uint64_t j = j_start; j < total; ++j) {
    const DyadicRational x(j, grid_scale);
    std::int64_t d = dirichlet(qn, x, DirichletStrategy::recursive);
    if (d < 0) d = -d;
    const std::uint64_t num = 4u * j * static_cast<std::uint64_t>(d);  // product numerator over 2^grid_scale
    if (num < best_num) {
      best_num = num;
      best_j = j;
    }
  }
  report.min_product = static_cast<double>(best_num) / static_cast<double>(total);
  report.argmin = DyadicRational(best_j, grid_scale);
  report.bound_holds = best_num >= total;
  return report;
}

}  // namespace walshlab

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "walshlab/dyadic.hpp"

namespace walshlab {

/// Rademacher function r_n(x) = r_0(2^n x): +1 on digit x_n = 0, -1 on 1.
int rademacher(int n, const DyadicRational& x);

/// Walsh-Paley function w_k = product of r_{n_j} over the set bits n_j of k;
/// equivalently (-1)^{sum_j k_j x_j}. w_0 is identically 1.
int walsh(std::uint64_t k, const DyadicRational& x);

enum class DirichletStrategy { direct, recursive, w3 };

/// Dirichlet kernel D_n(x) = sum_{k<n} w_k(x), an exact integer.
///
/// Three independent evaluation routes are kept on purpose:
///   direct     - the defining sum, O(n);
///   recursive  - peel binary digits of n with D_{2^a+m} = D_{2^a} + r_a D_m
///                and the closed form D_{2^a} = 2^a on [0, 2^{-a});
///   w3         - D_n = w_n * sum over set bits j of r_j D_{2^j}.
/// They must agree bit-for-bit; tests and the acceptance suite enforce it.
std::int64_t dirichlet(std::int64_t n, const DyadicRational& x,
                       DirichletStrategy strategy = DirichletStrategy::recursive);

/// One (index, point, value) record of a kernel trace.
struct KernelSample {
  std::int64_t index = 0;
  DyadicRational point;
  std::int64_t value = 0;
};

/// q_n = 2^{2n-2} + 2^{2n-4} + ... + 2^2 + 2^0 = (4^n - 1)/3. Requires
/// 1 <= n <= 31 so the result fits a signed 64-bit integer.
std::int64_t q_index(int n);

/// In-place fast Walsh-Hadamard transform in Paley ordering, normalized by
/// 2^{-M} on the forward pass so that for a piecewise-constant function given
/// by its 2^M cell values the output IS its Walsh-Fourier coefficient vector:
///   out[k] = 2^{-M} sum_j in[j] w_k(j 2^{-M}).
/// The transform is an involution up to the normalization:
/// fwht(fwht(v)) * 2^M = v. Paley ordering is the only ordering provided.
void fwht_inplace(std::span<double> values);
std::vector<double> fwht(std::vector<double> values);

/// Exhaustive check of the kernel floor |D_{q_n}(x)| * 4x >= 1 on the grid
/// x = j 2^{-grid_scale}, restricted to [2^{-2n}, 1) where the floor holds
/// (at x = 2^{-2n} it is tight: D_{q_n} = q_n >= 4^{n-1} there; just below,
/// the product dips to (2/3)(1 - 4^{-n})). min_product is exact: the
/// numerator comparison is integer arithmetic.
struct LowestReport {
  int n = 0;
  int grid_scale = 0;
  double min_product = 0.0;
  DyadicRational argmin;
  bool bound_holds = false;
};
LowestReport check_lowest(int n, int grid_scale);

}  // namespace walshlab

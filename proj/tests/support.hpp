#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "walshlab/funcrep.hpp"
#include "walshlab/variation.hpp"
#include "walshlab/walsh.hpp"

namespace testsupport {

// Uniform doubles built from raw engine words so seeded corpora do not depend
// on the standard library's distribution implementation.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_pm1(std::mt19937_64& rng) { return 2.0 * uniform01(rng) - 1.0; }

inline walshlab::GridFunction2D random_grid(int resolution, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = std::size_t{1} << resolution;
  std::vector<double> cells(n * n);
  for (double& c : cells) c = uniform_pm1(rng);
  return walshlab::GridFunction2D(resolution, std::move(cells));
}

// Naive quadratic Walsh transform in Paley order, summed directly from the
// definition (-1)^{sum_i k_i x_i} with x_i the dyadic digits of j 2^{-M};
// the oracle for fwht. Digit words are precomputed per grid point so the
// n^2 sign evaluations stay cheap.
inline std::vector<double> naive_walsh_transform(const std::vector<double>& v) {
  const std::size_t n = v.size();
  int bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  std::vector<std::uint64_t> xbits(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto digits = walshlab::DyadicRational(j, bits).digits(bits);
    for (int i = 0; i < bits; ++i)
      xbits[j] |= static_cast<std::uint64_t>(digits[static_cast<std::size_t>(i)]) << i;
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const int sign = (std::popcount(k & xbits[j]) & 1) ? -1 : 1;
      acc += v[j] * sign;
    }
    out[k] = acc / static_cast<double>(n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force variation oracle, written independently of the library solvers:
// interval systems are bitmask subsets of the full pairwise interval list.

struct OracleTable {
  int pts = 0;
  int anchors = 0;
  std::vector<double> v;  // pts x anchors
  double at(int p, int q) const { return v[static_cast<std::size_t>(p) * anchors + q]; }
};

inline OracleTable oracle_table(const walshlab::GridFunction2D& g, int axis) {
  OracleTable t;
  const int n = static_cast<int>(g.cells_per_axis());
  t.pts = t.anchors = n;
  t.v.resize(static_cast<std::size_t>(n) * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      t.v[static_cast<std::size_t>(p) * n + q] =
          axis == 1 ? g.cell(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q))
                    : g.cell(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(p));
  return t;
}

inline double canonical_value(std::vector<double> d, const walshlab::WeightSequence& w) {
  std::sort(d.begin(), d.end(), std::greater<>());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    acc += d[i] / w.at(static_cast<std::int64_t>(i) + 1);
  return acc;
}

struct IntervalList {
  std::vector<std::pair<int, int>> all;
  explicit IntervalList(int pts) {
    for (int a = 0; a < pts; ++a)
      for (int b = a + 1; b < pts; ++b) all.emplace_back(a, b);
  }
  bool disjoint(unsigned mask) const {
    std::vector<std::pair<int, int>> chosen;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask & (1u << i)) chosen.push_back(all[i]);
    for (std::size_t i = 0; i < chosen.size(); ++i)
      for (std::size_t j = i + 1; j < chosen.size(); ++j) {
        const auto& [a1, b1] = chosen[i];
        const auto& [a2, b2] = chosen[j];
        if (std::max(a1, a2) < std::min(b1, b2)) return false;
      }
    return true;
  }
};

inline double oracle_lambda_var(const OracleTable& t, const walshlab::WeightSequence& w) {
  IntervalList iv(t.pts);
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << iv.all.size()); ++mask) {
    if (!iv.disjoint(mask)) continue;
    for (int q = 0; q < t.anchors; ++q) {
      std::vector<double> d;
      for (std::size_t i = 0; i < iv.all.size(); ++i)
        if (mask & (1u << i))
          d.push_back(std::abs(t.at(iv.all[i].second, q) - t.at(iv.all[i].first, q)));
      best = std::max(best, canonical_value(std::move(d), w));
    }
  }
  return best;
}

inline double oracle_sharp_var(const OracleTable& t, const walshlab::WeightSequence& w) {
  IntervalList iv(t.pts);
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << iv.all.size()); ++mask) {
    if (!iv.disjoint(mask)) continue;
    std::vector<double> d;
    for (std::size_t i = 0; i < iv.all.size(); ++i)
      if (mask & (1u << i)) {
        double m = 0.0;
        for (int q = 0; q < t.anchors; ++q)
          m = std::max(m, std::abs(t.at(iv.all[i].second, q) - t.at(iv.all[i].first, q)));
        d.push_back(m);
      }
    best = std::max(best, canonical_value(std::move(d), w));
  }
  return best;
}

inline double oracle_v_sharp(const OracleTable& t, int n) {
  IntervalList iv(t.pts);
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << iv.all.size()); ++mask) {
    if (static_cast<int>(std::popcount(mask)) > n) continue;
    if (!iv.disjoint(mask)) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < iv.all.size(); ++i)
      if (mask & (1u << i)) {
        double m = 0.0;
        for (int q = 0; q < t.anchors; ++q)
          m = std::max(m, std::abs(t.at(iv.all[i].second, q) - t.at(iv.all[i].first, q)));
        sum += m;
      }
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace testsupport

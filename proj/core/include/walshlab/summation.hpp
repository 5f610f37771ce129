#pragma once

#include <cstddef>
#include <span>

namespace walshlab {

// Deterministic reduction used by every integral in the library: plain
// left-to-right accumulation up to 2^15 terms, pairwise halving above that.
// Given a fixed term order the result is bit-reproducible.
inline double ordered_sum(std::span<const double> terms) {
  constexpr std::size_t kPairwiseThreshold = std::size_t{1} << 15;
  if (terms.size() <= kPairwiseThreshold) {
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
  }
  const std::size_t half = terms.size() / 2;
  return ordered_sum(terms.first(half)) + ordered_sum(terms.subspan(half));
}

}  // namespace walshlab

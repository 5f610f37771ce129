#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace walshlab {

// Scales are capped so numerators stay comfortably inside a 64-bit word and
// cross-multiplied comparisons fit in 128 bits. Exceeding the cap throws.
int dyadic_scale_cap();
void set_dyadic_scale_cap(int cap);

/// An exact point p/2^n of [0,1), stored in canonical form (numerator odd,
/// or zero with scale zero). This is the evaluation substrate for the whole
/// library: every grid point, kernel argument and breakpoint is one of these.
class DyadicRational {
 public:
  constexpr DyadicRational() = default;
  DyadicRational(std::uint64_t numerator, int scale);

  std::uint64_t numerator() const { return num_; }
  int scale() const { return scale_; }
  bool is_zero() const { return num_ == 0; }
  double value() const;

  /// Digit x_k of the terminating expansion x = sum_k x_k 2^{-(k+1)}.
  int digit(int k) const;

  /// First `count` digits of the terminating expansion.
  std::vector<int> digits(int count) const;

  /// Numerator re-expressed at a coarser-or-finer scale `s` (s >= scale()).
  std::uint64_t numerator_at_scale(int s) const;

  std::string str() const;  // "p/2^n"
  static std::optional<DyadicRational> parse(std::string_view text);

  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;
  std::strong_ordering operator<=>(const DyadicRational& other) const;

 private:
  std::uint64_t num_ = 0;
  int scale_ = 0;
};

/// Digitwise XOR of the terminating expansions: the dyadic group operation.
/// Commutative, identity 0, every element self-inverse.
DyadicRational dyadic_add(const DyadicRational& x, const DyadicRational& y);

/// The dyadic interval [l*2^{-N}, (l+1)*2^{-N}). The right endpoint of the
/// last interval is the closure point 1, which is outside [0,1); it is
/// therefore exposed as the integer pair (index()+1, level()) rather than as
/// a DyadicRational.
class DyadicInterval {
 public:
  DyadicInterval(int level, std::uint64_t index);

  int level() const { return level_; }
  std::uint64_t index() const { return index_; }
  DyadicRational left() const;
  std::uint64_t right_numerator() const { return index_ + 1; }
  double right_value() const;
  bool contains(const DyadicRational& x) const;
  std::string str() const;  // "[l/2^N, (l+1)/2^N)"

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;

 private:
  int level_;
  std::uint64_t index_;
};

/// The dyadic interval of length 2^{-N} containing x.
DyadicInterval interval_of(const DyadicRational& x, int level);

}  // namespace walshlab

#include "walshlab/dyadic.hpp"

#include <atomic>
#include <charconv>
#include <stdexcept>

namespace walshlab {

namespace {
std::atomic<int> g_scale_cap{40};
}  // namespace

int dyadic_scale_cap() { return g_scale_cap.load(std::memory_order_relaxed); }

void set_dyadic_scale_cap(int cap) {
  if (cap < 0 || cap > 62) throw std::invalid_argument("dyadic scale cap must be in [0, 62]");
  g_scale_cap.store(cap, std::memory_order_relaxed);
}

DyadicRational::DyadicRational(std::uint64_t numerator, int scale) : num_(numerator), scale_(scale) {
  if (scale < 0) throw std::invalid_argument("negative dyadic scale");
  if (scale > dyadic_scale_cap()) throw std::out_of_range("dyadic scale exceeds the configured cap");
  if (num_ >= (std::uint64_t{1} << scale_)) throw std::invalid_argument("dyadic numerator out of [0, 2^scale)");
  while (num_ != 0 && (num_ & 1u) == 0) {
    num_ >>= 1;
    --scale_;
  }
  if (num_ == 0) scale_ = 0;
}

double DyadicRational::value() const {
  return static_cast<double>(num_) / static_cast<double>(std::uint64_t{1} << scale_);
}

int DyadicRational::digit(int k) const {
  if (k < 0) throw std::invalid_argument("negative digit index");
  if (k >= scale_) return 0;
  return static_cast<int>((num_ >> (scale_ - 1 - k)) & 1u);
}

std::vector<int> DyadicRational::digits(int count) const {
  if (count < 1) throw std::invalid_argument("digit count must be positive");
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = digit(k);
  return out;
}

std::uint64_t DyadicRational::numerator_at_scale(int s) const {
  if (s < scale_) throw std::invalid_argument("target scale coarser than canonical scale");
  if (s > 62) throw std::out_of_range("target scale too large");
  return num_ << (s - scale_);
}

std::string DyadicRational::str() const {
  return std::to_string(num_) + "/2^" + std::to_string(scale_);
}

std::optional<DyadicRational> DyadicRational::parse(std::string_view text) {
  std::uint64_t num = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), num);
  if (ec != std::errc{}) return std::nullopt;
  std::string_view rest(p, static_cast<std::size_t>(text.data() + text.size() - p));
  if (rest.empty()) {
    if (num != 0) return std::nullopt;  // bare integers other than 0 are not in [0,1)
    return DyadicRational();
  }
  if (!rest.starts_with("/2^")) return std::nullopt;
  rest.remove_prefix(3);
  int scale = 0;
  auto [p2, ec2] = std::from_chars(rest.data(), rest.data() + rest.size(), scale);
  if (ec2 != std::errc{} || p2 != rest.data() + rest.size()) return std::nullopt;
  try {
    return DyadicRational(num, scale);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::strong_ordering DyadicRational::operator<=>(const DyadicRational& other) const {
  const int s = scale_ > other.scale_ ? scale_ : other.scale_;
  const std::uint64_t a = num_ << (s - scale_);
  const std::uint64_t b = other.num_ << (s - other.scale_);
  return a <=> b;
}

DyadicRational dyadic_add(const DyadicRational& x, const DyadicRational& y) {
  const int s = x.scale() > y.scale() ? x.scale() : y.scale();
  return DyadicRational(x.numerator_at_scale(s) ^ y.numerator_at_scale(s), s);
}

DyadicInterval::DyadicInterval(int level, std::uint64_t index) : level_(level), index_(index) {
  if (level < 0) throw std::invalid_argument("negative interval level");
  if (level > dyadic_scale_cap()) throw std::out_of_range("interval level exceeds the configured cap");
  if (index >= (std::uint64_t{1} << level)) throw std::invalid_argument("interval index out of [0, 2^level)");
}

DyadicRational DyadicInterval::left() const { return DyadicRational(index_, level_); }

double DyadicInterval::right_value() const {
  return static_cast<double>(index_ + 1) / static_cast<double>(std::uint64_t{1} << level_);
}

bool DyadicInterval::contains(const DyadicRational& x) const {
  // l*2^{-N} <= x < (l+1)*2^{-N}, compared exactly at a common scale.
  const int s = x.scale() > level_ ? x.scale() : level_;
  const std::uint64_t xn = x.numerator_at_scale(s);
  const std::uint64_t lo = index_ << (s - level_);
  const std::uint64_t hi = (index_ + 1) << (s - level_);
  return xn >= lo && xn < hi;
}

std::string DyadicInterval::str() const {
  return "[" + std::to_string(index_) + "/2^" + std::to_string(level_) + ", " +
         std::to_string(index_ + 1) + "/2^" + std::to_string(level_) + ")";
}

DyadicInterval interval_of(const DyadicRational& x, int level) {
  if (level < 0) throw std::invalid_argument("negative interval level");
  if (level > dyadic_scale_cap()) throw std::out_of_range("interval level exceeds the configured cap");
  const std::uint64_t idx = level >= x.scale() ? (x.numerator() << (level - x.scale()))
                                               : (x.numerator() >> (x.scale() - level));
  return DyadicInterval(level, idx);
}

}  // namespace walshlab

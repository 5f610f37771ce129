#include "walshlab/funcrep.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "walshlab/summation.hpp"

namespace walshlab {

namespace {

void format_real(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

// Cell index and the affine parameter t in [0,1) of x inside that cell.
struct CellPos {
  std::uint64_t cell;
  double t;
};

CellPos locate(const DyadicRational& x, int resolution) {
  if (x.scale() <= resolution) {
    return {x.numerator() << (resolution - x.scale()), 0.0};
  }
  const int extra = x.scale() - resolution;
  const std::uint64_t cell = x.numerator() >> extra;
  const std::uint64_t rem = x.numerator() - (cell << extra);
  return {cell, static_cast<double>(rem) / static_cast<double>(std::uint64_t{1} << extra)};
}

}  // namespace

PiecewiseLinear1D::PiecewiseLinear1D(int resolution, std::vector<double> breakpoint_values)
    : resolution_(resolution), values_(std::move(breakpoint_values)) {
  if (resolution < 0 || resolution > dyadic_scale_cap())
    throw std::invalid_argument("piecewise-linear resolution out of range");
  const std::size_t expected = (std::size_t{1} << resolution) + 1;
  if (values_.size() != expected)
    throw std::invalid_argument("piecewise-linear value count must be 2^M + 1");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite breakpoint value");
}

PiecewiseLinear1D PiecewiseLinear1D::constant(double c, int resolution) {
  return PiecewiseLinear1D(resolution,
                           std::vector<double>((std::size_t{1} << resolution) + 1, c));
}

PiecewiseLinear1D PiecewiseLinear1D::ramp(int resolution) {
  const std::uint64_t n = std::uint64_t{1} << resolution;
  std::vector<double> v(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k)
    v[k] = static_cast<double>(k) / static_cast<double>(n);
  return PiecewiseLinear1D(resolution, std::move(v));
}

double PiecewiseLinear1D::eval(const DyadicRational& x) const {
  const CellPos p = locate(x, resolution_);
  if (p.t == 0.0) return values_[p.cell];
  return values_[p.cell] * (1.0 - p.t) + values_[p.cell + 1] * p.t;
}

std::vector<double> PiecewiseLinear1D::cell_averages(int target_scale) const {
  if (target_scale < 0 || target_scale > resolution_)
    throw std::invalid_argument("cell_averages: target scale must be in [0, resolution]");
  const std::uint64_t coarse = std::uint64_t{1} << target_scale;
  const std::uint64_t per = std::uint64_t{1} << (resolution_ - target_scale);
  std::vector<double> out(coarse);
  for (std::uint64_t j = 0; j < coarse; ++j) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < per; ++i) {
      const std::uint64_t k = j * per + i;
      acc += 0.5 * (values_[k] + values_[k + 1]);
    }
    out[j] = acc / static_cast<double>(per);
  }
  return out;
}

PiecewiseLinear1D PiecewiseLinear1D::refined(int finer_resolution) const {
  if (finer_resolution < resolution_)
    throw std::invalid_argument("refined: target resolution must not be coarser");
  if (finer_resolution == resolution_) return *this;
  const int extra = finer_resolution - resolution_;
  const std::uint64_t n = std::uint64_t{1} << finer_resolution;
  const std::uint64_t per = std::uint64_t{1} << extra;
  std::vector<double> v(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k) {
    const std::uint64_t cell = k >> extra;
    const std::uint64_t rem = k - (cell << extra);
    if (rem == 0) {
      v[k] = values_[cell];
    } else {
      const double t = static_cast<double>(rem) / static_cast<double>(per);
      v[k] = values_[cell] * (1.0 - t) + values_[cell + 1] * t;
    }
  }
  return PiecewiseLinear1D(finer_resolution, std::move(v));
}

void PiecewiseLinear1D::write_csv(std::ostream& out) const {
  std::string buf = "# walshlab pl1d M=" + std::to_string(resolution_) + "\nx,value\n";
  const std::uint64_t n = std::uint64_t{1} << resolution_;
  for (std::uint64_t k = 0; k <= n; ++k) {
    format_real(buf, static_cast<double>(k) / static_cast<double>(n));
    buf += ',';
    format_real(buf, values_[k]);
    buf += '\n';
  }
  out << buf;
}

PiecewiseLinear1D PiecewiseLinear1D::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# walshlab pl1d M=", 0) != 0)
    throw std::invalid_argument("bad pl1d header");
  const int m = std::stoi(line.substr(18));
  if (!std::getline(in, line)) throw std::invalid_argument("missing pl1d column header");
  std::vector<double> v;
  v.reserve((std::size_t{1} << m) + 1);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad pl1d row");
    v.push_back(std::stod(line.substr(comma + 1)));
  }
  return PiecewiseLinear1D(m, std::move(v));
}

double integrate_against_step(const PiecewiseLinear1D& f, std::span<const double> step) {
  const std::size_t n = step.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("step function length must be a power of two");
  int scale = 0;
  while ((std::size_t{1} << scale) < n) ++scale;
  if (scale > f.resolution())
    throw std::invalid_argument("step scale finer than the function resolution");
  const std::vector<double> avgs = f.cell_averages(scale);
  const double width = 1.0 / static_cast<double>(n);
  std::vector<double> terms(n);
  for (std::size_t j = 0; j < n; ++j) terms[j] = step[j] * avgs[j] * width;
  return ordered_sum(terms);
}

SeparableFunction2D::SeparableFunction2D(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("separable function needs at least one term");
  resolution_ = terms_.front().u.resolution();
  for (const Term& t : terms_)
    if (t.u.resolution() != resolution_ || t.v.resolution() != resolution_)
      throw std::invalid_argument("all separable factors must share one resolution");
}

SeparableFunction2D SeparableFunction2D::product(PiecewiseLinear1D u, PiecewiseLinear1D v) {
  std::vector<Term> t;
  t.push_back(Term{std::move(u), std::move(v)});
  return SeparableFunction2D(std::move(t));
}

double SeparableFunction2D::eval(const DyadicRational& x, const DyadicRational& y) const {
  double acc = 0.0;
  for (const Term& t : terms_) acc += t.u.eval(x) * t.v.eval(y);
  return acc;
}

GridFunction2D::GridFunction2D(int resolution, std::vector<double> cell_values)
    : resolution_(resolution), cells_(std::move(cell_values)) {
  if (resolution < 0 || resolution > 30)
    throw std::invalid_argument("grid resolution out of range");
  const std::size_t n = std::size_t{1} << resolution;
  if (cells_.size() != n * n)
    throw std::invalid_argument("grid cell count must be 4^M");
  for (double v : cells_)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite cell value");
}

double GridFunction2D::eval(const DyadicRational& x, const DyadicRational& y) const {
  const std::uint64_t ix = interval_of(x, resolution_).index();
  const std::uint64_t iy = interval_of(y, resolution_).index();
  return cell(ix, iy);
}

void GridFunction2D::write_csv(std::ostream& out) const {
  std::string buf = "# walshlab grid2d M=" + std::to_string(resolution_) + "\n";
  const std::uint64_t n = cells_per_axis();
  for (std::uint64_t ix = 0; ix < n; ++ix) {
    for (std::uint64_t iy = 0; iy < n; ++iy) {
      if (iy) buf += ',';
      format_real(buf, cell(ix, iy));
    }
    buf += '\n';
  }
  out << buf;
}

GridFunction2D GridFunction2D::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# walshlab grid2d M=", 0) != 0)
    throw std::invalid_argument("bad grid2d header");
  const int m = std::stoi(line.substr(20));
  const std::uint64_t n = std::uint64_t{1} << m;
  std::vector<double> cells;
  cells.reserve(n * n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string item;
    while (std::getline(row, item, ',')) cells.push_back(std::stod(item));
  }
  return GridFunction2D(m, std::move(cells));
}

double eval2d(const Function2D& f, const DyadicRational& x, const DyadicRational& y) {
  return std::visit([&](const auto& g) { return g.eval(x, y); }, f);
}

int representation_resolution(const Function2D& f) {
  return std::visit([](const auto& g) { return g.resolution(); }, f);
}

namespace {

// x - 2^{-k} as a dyadic rational when x >= 2^{-k}.
std::optional<DyadicRational> left_neighbor(const DyadicRational& x, int k) {
  if (k > dyadic_scale_cap()) return std::nullopt;
  const int s = x.scale() > k ? x.scale() : k;
  const std::uint64_t xn = x.numerator_at_scale(s);
  const std::uint64_t h = std::uint64_t{1} << (s - k);
  if (xn < h) return std::nullopt;
  return DyadicRational(xn - h, s);
}

}  // namespace

bool w_continuous_at(const Function2D& f, const DyadicRational& x, const DyadicRational& y,
                     int probe_depth, double tol) {
  if (probe_depth < 1) throw std::invalid_argument("probe_depth must be >= 1");
  const double base = eval2d(f, x, y);

  std::vector<double> deviation(static_cast<std::size_t>(probe_depth) + 1, 0.0);
  for (int k = 1; k <= probe_depth; ++k) {
    std::vector<DyadicRational> xs{x};
    std::vector<DyadicRational> ys{y};
    if (k <= dyadic_scale_cap()) {
      const DyadicRational h(1u, k);
      xs.push_back(dyadic_add(x, h));
      ys.push_back(dyadic_add(y, h));
    }
    if (auto xl = left_neighbor(x, k)) xs.push_back(*xl);
    if (auto yl = left_neighbor(y, k)) ys.push_back(*yl);

    double worst = 0.0;
    for (const auto& xc : xs)
      for (const auto& yc : ys) {
        if (xc == x && yc == y) continue;
        const double d = std::abs(eval2d(f, xc, yc) - base);
        if (d > worst) worst = d;
      }
    deviation[static_cast<std::size_t>(k)] = worst;
  }

  const double last = deviation[static_cast<std::size_t>(probe_depth)];
  if (last <= tol) return true;
  if (probe_depth < 3) return false;
  // Geometric decay over the final steps marks the affine regime of a
  // continuous function; a jump pins the deviations near its height instead.
  const double prev = deviation[static_cast<std::size_t>(probe_depth) - 1];
  const double prev2 = deviation[static_cast<std::size_t>(probe_depth) - 2];
  return last <= 0.75 * prev && prev <= 0.75 * prev2;
}

}  // namespace walshlab

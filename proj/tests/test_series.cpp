#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "walshlab/counterexamples.hpp"
#include "walshlab/series.hpp"
#include "walshlab/walsh.hpp"

using namespace walshlab;

TEST_CASE("cesaro numbers") {
  for (double a : {-0.7, -0.3, 0.5, 1.0, 2.0}) CHECK(cesaro_numbers(a, 0).at(0) == 1.0);
  const auto t1 = cesaro_numbers(1.0, 16);
  for (int n = 0; n <= 16; ++n) CHECK(t1.at(n) == doctest::Approx(n + 1.0));
  CHECK(cesaro_numbers(-0.5, 2).at(2) == doctest::Approx(0.375));
  CHECK_THROWS(cesaro_numbers(-1.0, 4));
  CHECK_THROWS(cesaro_numbers(-3.0, 4));
}

TEST_CASE("convolution identity for cesaro numbers") {
  for (double a : {-0.7, -0.3, 0.5, 1.0}) {
    const auto ta = cesaro_numbers(a, 512);
    const auto tb = cesaro_numbers(a - 1.0, 512);
    double run = 0.0;
    for (int n = 0; n <= 512; ++n) {
      run += tb.at(n);
      CHECK(std::abs(run - ta.at(n)) <= 1e-10 * std::max(1.0, std::abs(ta.at(n))));
    }
  }
}

TEST_CASE("cesaro number growth order") {
  // A_n^a / n^a tends to 1/Gamma(a+1): 0.334 at a=-0.7, 0.770 at -0.3,
  // 1.128 at 0.5. The bracket checks the growth order, not the constant.
  for (double a : {-0.7, -0.3, 0.5}) {
    const auto t = cesaro_numbers(a, 4096);
    for (int n = 64; n <= 4096; n *= 2) {
      const double ratio = t.at(n) / std::pow(n, a);
      CHECK(ratio >= 0.25);
      CHECK(ratio <= 2.0);
    }
  }
}

TEST_CASE("cesaro kernel basics") {
  for (std::uint64_t p = 0; p < 8; ++p)
    CHECK(cesaro_kernel(1, -0.3, DyadicRational(p, 3)) == doctest::Approx(1.0));
  CHECK(cesaro_kernel(2, 1.0, DyadicRational()) == doctest::Approx(1.5));
  // K_n^0 collapses to the Dirichlet kernel.
  for (std::int64_t n = 1; n <= 32; ++n)
    for (std::uint64_t p = 0; p < 32; ++p) {
      const DyadicRational x(p, 5);
      CHECK(cesaro_kernel(n, 0.0, x) ==
            doctest::Approx(static_cast<double>(dirichlet(n, x))).epsilon(1e-12));
    }
  // Cell evaluation matches pointwise evaluation at left endpoints.
  const auto cells = cesaro_kernel_cells(16, -0.4, 5);
  for (std::uint64_t c = 0; c < 32; ++c)
    CHECK(cells[c] == doctest::Approx(cesaro_kernel(16, -0.4, DyadicRational(c, 5))));
  CHECK_THROWS(cesaro_kernel_cells(16, -0.4, 3));
}

namespace {

Function2D walsh_product_function(std::uint64_t kx, std::uint64_t ky, int resolution) {
  const std::uint64_t n = std::uint64_t{1} << resolution;
  std::vector<double> cells(n * n);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b)
      cells[a * n + b] = walsh(kx, DyadicRational(a, resolution)) *
                         walsh(ky, DyadicRational(b, resolution));
  return GridFunction2D(resolution, std::move(cells));
}

}  // namespace

TEST_CASE("fourier coefficients") {
  const Function2D one = GridFunction2D(2, std::vector<double>(16, 1.0));
  const auto c = fourier_coeffs(one, 4, 4);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      CHECK(c.at(m, n) == doctest::Approx(m == 0 && n == 0 ? 1.0 : 0.0));

  const Function2D w32 = walsh_product_function(3, 2, 3);
  const auto c2 = fourier_coeffs(w32, 8, 8);
  for (int m = 0; m < 8; ++m)
    for (int n = 0; n < 8; ++n)
      CHECK(c2.at(m, n) == doctest::Approx(m == 3 && n == 2 ? 1.0 : 0.0).epsilon(1e-12));

  // f(x,y) = x: first-axis coefficient against r_0 is -1/4.
  const Function2D ramp = SeparableFunction2D::product(PiecewiseLinear1D::ramp(4),
                                                       PiecewiseLinear1D::constant(1.0, 4));
  const auto c3 = fourier_coeffs(ramp, 2, 1);
  CHECK(c3.at(0, 0) == doctest::Approx(0.5));
  CHECK(c3.at(1, 0) == doctest::Approx(-0.25));

  CHECK_THROWS(fourier_coeffs(one, 5, 4));
}

TEST_CASE("partial sums") {
  const Function2D g = testsupport::random_grid(3, 33u);
  const DyadicRational x(3, 3), y(5, 3);
  // S_{1,1} is the mean coefficient.
  CHECK(partial_sum(g, 1, 1, x, y) == doctest::Approx(fourier_coeffs(g, 1, 1).at(0, 0)));

  // Full reconstruction of a finite Walsh polynomial.
  const Function2D w32 = walsh_product_function(3, 2, 3);
  for (std::uint64_t p = 0; p < 8; ++p)
    for (std::uint64_t q = 0; q < 8; ++q) {
      const DyadicRational xx(p, 3), yy(q, 3);
      CHECK(partial_sum(w32, 4, 3, xx, yy) ==
            doctest::Approx(eval2d(w32, xx, yy)).epsilon(1e-12));
    }

  // Reconstruction at exactly the representation order.
  for (std::uint64_t p = 0; p < 8; ++p)
    for (std::uint64_t q = 0; q < 8; ++q) {
      const DyadicRational xx(p, 3), yy(q, 3);
      CHECK(partial_sum(g, 8, 8, xx, yy) == doctest::Approx(eval2d(g, xx, yy)).epsilon(1e-11));
    }
}

TEST_CASE("partial sum strategies agree") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Function2D g = testsupport::random_grid(3, 100 + seed);
    for (const auto& [m, n] : {std::pair<int, int>{1, 1}, {3, 2}, {8, 5}, {13, 16}}) {
      for (const auto& [px, py] : {std::pair<int, int>{0, 0}, {3, 6}, {7, 1}}) {
        const DyadicRational x(static_cast<std::uint64_t>(px), 3);
        const DyadicRational y(static_cast<std::uint64_t>(py), 3);
        const double a = partial_sum(g, m, n, x, y, SumStrategy::coeff);
        const double b = partial_sum(g, m, n, x, y, SumStrategy::kernel);
        CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
      }
    }
  }
  // Separable representation, off-grid evaluation point.
  const Function2D f = SeparableFunction2D::product(PiecewiseLinear1D::ramp(3),
                                                    PiecewiseLinear1D::ramp(3));
  const DyadicRational x(5, 4), y(11, 4);
  const double a = partial_sum(f, 12, 7, x, y, SumStrategy::coeff);
  const double b = partial_sum(f, 12, 7, x, y, SumStrategy::kernel);
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("cesaro means") {
  const Function2D g = testsupport::random_grid(2, 77u);
  const DyadicRational x(1, 2), y(3, 2);
  CHECK(cesaro_mean(g, 1, 1, -0.3, -0.4, x, y) == doctest::Approx(partial_sum(g, 1, 1, x, y)));

  const Function2D c = GridFunction2D(2, std::vector<double>(16, 0.75));
  for (const auto& [n, m] : {std::pair<int, int>{1, 1}, {5, 3}, {16, 16}, {40, 64}})
    for (double a : {-0.3, 0.5})
      CHECK(cesaro_mean(c, n, m, a, a / 2, x, y) == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("cesaro mean strategies agree") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Function2D g = testsupport::random_grid(3, 200 + seed);
    for (const auto& [n, m] : {std::pair<int, int>{2, 3}, {16, 9}, {33, 64}}) {
      for (const auto& [a, b] : {std::pair<double, double>{-0.3, -0.55}, {0.5, -0.2}}) {
        const DyadicRational x(5, 3), y(2, 3);
        const double d = cesaro_mean(g, n, m, a, b, x, y, MeanStrategy::definition);
        const double k = cesaro_mean(g, n, m, a, b, x, y, MeanStrategy::kernel);
        CHECK(std::abs(d - k) <= 1e-8 * std::max(1.0, std::abs(d)));
      }
    }
  }
}

TEST_CASE("quadratic mean of the sign-flipped tent product matches the kernel product") {
  // sigma at the origin of h_N equals the product of the two absolute kernel
  // integrals; cross-checks the whole coefficient pipeline at N = 2.
  const int N = 2;
  const double alpha = 0.3, beta = 0.3;
  const Function2D h = build_hN(N, alpha, beta);
  const std::int64_t n = std::int64_t{1} << (2 * N);
  const double sigma =
      cesaro_mean(h, n, n, -alpha, -beta, DyadicRational(), DyadicRational(), MeanStrategy::definition);
  const double expected =
      integral_phi_abs_cesaro(N, -alpha) * integral_phi_abs_cesaro(N, -beta);
  CHECK(sigma == doctest::Approx(expected).epsilon(1e-10));
}

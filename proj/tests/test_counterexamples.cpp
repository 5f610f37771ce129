#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "walshlab/counterexamples.hpp"
#include "walshlab/series.hpp"
#include "walshlab/walsh.hpp"

using namespace walshlab;

TEST_CASE("tent train geometry") {
  for (int N = 1; N <= 4; ++N) {
    const auto phi = build_phi(N);
    const std::uint64_t cells = std::uint64_t{1} << (2 * N);
    CHECK(phi.resolution() == 2 * N + 1);
    for (std::uint64_t j = 0; j <= cells; ++j)
      CHECK(phi.value_at_breakpoint(2 * j > 2 * cells ? 2 * cells : 2 * j) == 0.0);
    for (std::uint64_t j = 1; j < cells; ++j)
      CHECK(phi.value_at_breakpoint(2 * j + 1) == 1.0);
    CHECK(phi.value_at_breakpoint(1) == 0.0);  // flat head cell

    // Vanishes on [0, 2^{-2N}) and stays within [0, 1].
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << (2 * N + 3)); ++p) {
      const DyadicRational x(p, 2 * N + 3);
      const double v = phi.eval(x);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (x < DyadicRational(1, 2 * N)) CHECK(v == 0.0);
    }

    // Total integral: one triangle of area 2^{-2N-1} per active cell.
    std::vector<double> all(cells, 1.0);
    const double total = integrate_against_step(phi, all);
    CHECK(total == doctest::Approx((static_cast<double>(cells) - 1) /
                                   static_cast<double>(2 * cells)));
  }
  CHECK_THROWS(build_phi(0));
  CHECK_THROWS(build_phi(9));
}

TEST_CASE("signed tent train matches kernel signs") {
  const int N = 2;
  const auto a = phi_signed_by_dirichlet(N);
  const std::uint64_t cells = std::uint64_t{1} << (2 * N);
  const std::int64_t qn = q_index(N);
  for (std::uint64_t j = 1; j < cells; ++j) {
    const std::int64_t d = dirichlet(qn, DyadicRational(j, 2 * N));
    const double apex = a.value_at_breakpoint(2 * j + 1);
    if (d > 0) CHECK(apex == 1.0);
    if (d < 0) CHECK(apex == -1.0);
    if (d == 0) CHECK(apex == 0.0);
  }

  const auto ac = phi_signed_by_cesaro(N, -0.3);
  const auto kc = cesaro_kernel_cells(std::int64_t{1} << (2 * N), -0.3, 2 * N);
  for (std::uint64_t j = 1; j < cells; ++j) {
    const double apex = ac.value_at_breakpoint(2 * j + 1);
    if (kc[j] > 0) CHECK(apex == 1.0);
    if (kc[j] < 0) CHECK(apex == -1.0);
  }
}

TEST_CASE("gN vanishes on the cross and is w-continuous") {
  for (int N = 1; N <= 2; ++N) {
    const Function2D g = build_gN(N);
    CHECK(eval2d(g, DyadicRational(), DyadicRational()) == 0.0);
    const int probe_scale = 2 * N + 2;
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << probe_scale); ++p) {
      const DyadicRational head(p >> (probe_scale - 2 * N) == 0 ? p : 0, probe_scale);
      // Points with x below 2^{-2N}: the whole cross vanishes.
      if (DyadicRational(p, probe_scale) < DyadicRational(1, 2 * N)) {
        CHECK(eval2d(g, DyadicRational(p, probe_scale), DyadicRational(p / 2, probe_scale)) == 0.0);
        CHECK(eval2d(g, DyadicRational(p / 2, probe_scale), DyadicRational(p, probe_scale)) == 0.0);
      }
    }
    // |g| = phi(x) phi(y) wherever the kernel signs are nonzero.
    const auto phi = build_phi(N);
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << probe_scale); p += 3)
      for (std::uint64_t q = 0; q < (std::uint64_t{1} << probe_scale); q += 5) {
        const DyadicRational x(p, probe_scale), y(q, probe_scale);
        const double gv = std::abs(eval2d(g, x, y));
        const double pv = phi.eval(x) * phi.eval(y);
        CHECK(gv <= pv + 1e-15);
      }
    // Exhaustive dyadic continuity over the probe grid.
    const int depth = 2 * N + 6;
    bool all_continuous = true;
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << probe_scale) && all_continuous; ++p)
      for (std::uint64_t q = 0; q < (std::uint64_t{1} << probe_scale); ++q)
        if (!w_continuous_at(g, DyadicRational(p, probe_scale), DyadicRational(q, probe_scale),
                             depth, 1e-9)) {
          all_continuous = false;
          break;
        }
    CHECK(all_continuous);
  }
}

TEST_CASE("hN sign structure") {
  const int N = 2;
  const double alpha = 0.3, beta = 0.45;
  const Function2D h = build_hN(N, alpha, beta);
  CHECK(eval2d(h, DyadicRational(), DyadicRational()) == 0.0);
  const auto kx = cesaro_kernel_cells(16, -alpha, 4);
  const auto& sep = std::get<SeparableFunction2D>(h);
  for (std::uint64_t j = 1; j < 16; ++j) {
    const double apex = sep.terms()[0].u.value_at_breakpoint(2 * j + 1);
    if (kx[j] > 0) CHECK(apex == 1.0);
    if (kx[j] < 0) CHECK(apex == -1.0);
  }
  CHECK_THROWS(build_hN(2, 0.6, 0.5));
  CHECK_THROWS(build_hN(2, -0.1, 0.5));
}

TEST_CASE("probe integrals agree with integrate_against_step") {
  for (int N = 1; N <= 3; ++N) {
    const auto phi = build_phi(N);
    const std::int64_t qn = q_index(N);
    const std::uint64_t cells = std::uint64_t{1} << (2 * N);
    const auto d = dirichlet_cells(qn, 2 * N);
    std::vector<double> absd(cells);
    for (std::uint64_t j = 0; j < cells; ++j) absd[j] = std::abs(static_cast<double>(d[j]));
    const double via_step = integrate_against_step(phi, absd);
    const double closed = integral_phi_abs_dirichlet(N);
    CHECK(std::abs(via_step - closed) <= 1e-12 * std::max(1.0, closed));

    const auto k = cesaro_kernel_cells(static_cast<std::int64_t>(cells), -0.3, 2 * N);
    std::vector<double> absk(cells);
    for (std::uint64_t j = 0; j < cells; ++j) absk[j] = std::abs(k[j]);
    const double via_step2 = integrate_against_step(phi, absk);
    const double closed2 = integral_phi_abs_cesaro(N, -0.3);
    CHECK(std::abs(via_step2 - closed2) <= 1e-12 * std::max(1.0, closed2));
  }
}

TEST_CASE("partial-sum probe") {
  const auto w = WeightSequence::sqrt_log_family();
  double prev_ratio = 0.0;
  for (int N = 1; N <= 4; ++N) {
    const auto r = probe_partial_sum(N, w);
    CHECK(r.family == "partial-sum");
    CHECK(r.kernel_integrals.size() == 1);
    const double integral = r.kernel_integrals[0];
    CHECK(r.functional_value == doctest::Approx(integral * integral));
    CHECK(integral >= r.bound_check);
    CHECK(r.bound_check ==
          doctest::Approx(harmonic_number((std::int64_t{1} << (2 * N)) - 1) / 8.0));
    if (N >= 2) CHECK(integral / N >= 0.17);
    CHECK(r.variation_lower <= r.variation_upper);
    CHECK(r.growth_ratio > 0.0);
    if (N >= 3) CHECK(r.growth_ratio > prev_ratio);
    prev_ratio = r.growth_ratio;
  }
}

TEST_CASE("partial-sum probe matches the coefficient route") {
  for (int N = 1; N <= 3; ++N) {
    const auto w = WeightSequence::sqrt_log_family();
    const auto r = probe_partial_sum(N, w);
    const Function2D g = build_gN(N);
    const std::int64_t qn = q_index(N);
    const double s = partial_sum(g, qn, qn, DyadicRational(), DyadicRational(), SumStrategy::coeff);
    CHECK(std::abs(s - r.functional_value) <= 1e-8 * std::max(1.0, r.functional_value));
  }
}

TEST_CASE("cesaro probe") {
  const auto w = WeightSequence::cesaro_family(0.6);
  double prev_ratio = 0.0;
  for (int N = 1; N <= 3; ++N) {
    const auto r = probe_cesaro(N, 0.3, 0.3, w);
    CHECK(r.kernel_integrals.size() == 2);
    CHECK(r.functional_value ==
          doctest::Approx(r.kernel_integrals[0] * r.kernel_integrals[1]));
    CHECK(r.functional_value >= r.bound_check);
    CHECK(r.lambda_clamped);  // the family starts below 1
    if (N >= 2) CHECK(r.growth_ratio > prev_ratio);
    prev_ratio = r.growth_ratio;
  }
  CHECK_THROWS(probe_cesaro(2, 0.7, 0.4, w));
}

TEST_CASE("cesaro probe against the mean evaluator") {
  const int N = 2;
  const double alpha = 0.3, beta = 0.3;
  const auto r = probe_cesaro(N, alpha, beta, WeightSequence::cesaro_family(alpha + beta));
  const Function2D h = build_hN(N, alpha, beta);
  const std::int64_t n = std::int64_t{1} << (2 * N);
  const double sigma = cesaro_mean(h, n, n, -alpha, -beta, DyadicRational(), DyadicRational());
  CHECK(std::abs(sigma - r.functional_value) <= 1e-8 * std::max(1.0, r.functional_value));
}

TEST_CASE("band integrals grow at the negative order rate") {
  const auto bands = tev_band_integrals(8, -0.3);
  CHECK(bands.size() == 8);
  for (double b : bands) CHECK(b > 0.0);
  CHECK(tev_band_slope(bands) >= 0.8 * 0.3);

  // Stability of the per-band floor across N at fixed order.
  double lo = 1e300, hi = 0.0;
  for (int N : {6, 8, 10}) {
    const auto bs = tev_band_integrals(N, -0.3);
    for (int m = 2; m <= N; ++m) {
      const double norm = bs[static_cast<std::size_t>(m) - 1] / std::pow(2.0, 0.3 * m);
      lo = std::min(lo, norm);
      hi = std::max(hi, norm);
    }
  }
  CHECK(hi / lo <= 4.0);
  CHECK_THROWS(tev_band_integrals(3, 0.3));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "walshlab/funcrep.hpp"

using namespace walshlab;

namespace {

// Height-1 tent over [0,1) at resolution 1: values 0, 1, 0.
PiecewiseLinear1D unit_tent() { return PiecewiseLinear1D(1, {0.0, 1.0, 0.0}); }

}  // namespace

TEST_CASE("evaluation at breakpoints and inside cells") {
  const auto t = unit_tent();
  CHECK(t.eval(DyadicRational()) == 0.0);
  CHECK(t.eval(DyadicRational(1, 1)) == 1.0);
  CHECK(t.eval(DyadicRational(1, 2)) == 0.5);
  CHECK(t.eval(DyadicRational(3, 2)) == 0.5);
  CHECK(t.eval(DyadicRational(7, 3)) == 0.25);

  const auto r = PiecewiseLinear1D::ramp(4);
  for (std::uint64_t p = 0; p < 16; ++p)
    CHECK(r.eval(DyadicRational(p, 4)) == doctest::Approx(p / 16.0));
  CHECK(r.eval(DyadicRational(31, 5)) == doctest::Approx(31.0 / 32.0));
}

TEST_CASE("cell averages are exact") {
  const auto c = PiecewiseLinear1D::constant(2.5, 3);
  for (double v : c.cell_averages(2)) CHECK(v == 2.5);

  const auto r = PiecewiseLinear1D::ramp(3);
  const auto halves = r.cell_averages(1);
  CHECK(halves[0] == doctest::Approx(0.25));
  CHECK(halves[1] == doctest::Approx(0.75));

  const auto t = unit_tent();
  CHECK(t.cell_averages(0)[0] == doctest::Approx(0.5));  // triangle mean

  CHECK_THROWS(r.cell_averages(4));
}

TEST_CASE("averaging then coarsening equals direct coarse averaging") {
  std::mt19937_64 rng(21u);
  std::vector<double> vals((1u << 5) + 1);
  for (double& v : vals) v = testsupport::uniform_pm1(rng);
  const PiecewiseLinear1D f(5, vals);
  const auto fine = f.cell_averages(4);
  const auto coarse = f.cell_averages(3);
  for (std::size_t j = 0; j < coarse.size(); ++j)
    CHECK(coarse[j] == doctest::Approx(0.5 * (fine[2 * j] + fine[2 * j + 1])).epsilon(1e-14));
}

TEST_CASE("integrate_against_step") {
  const auto one = PiecewiseLinear1D::constant(1.0, 4);
  std::vector<double> ones(16, 1.0);
  CHECK(integrate_against_step(one, ones) == doctest::Approx(1.0).epsilon(1e-14));

  // Tent supported on the cell [1/2, 1): the indicator step extracts its
  // triangle area, half the cell width.
  const auto t = PiecewiseLinear1D(2, {0.0, 0.0, 0.0, 1.0, 0.0});
  std::vector<double> ind{0.0, 1.0};
  CHECK(integrate_against_step(t, ind) == doctest::Approx(0.25).epsilon(1e-14));

  // All-ones step reproduces the total integral from cell averages.
  std::mt19937_64 rng(22u);
  std::vector<double> vals((1u << 4) + 1);
  for (double& v : vals) v = testsupport::uniform_pm1(rng);
  const PiecewiseLinear1D f(4, vals);
  std::vector<double> all(8, 1.0);
  double direct = 0.0;
  for (double a : f.cell_averages(3)) direct += a / 8.0;
  CHECK(integrate_against_step(f, all) == doctest::Approx(direct).epsilon(1e-14));

  std::vector<double> too_fine(32, 1.0);
  CHECK_THROWS(integrate_against_step(f, too_fine));
  std::vector<double> not_pow2(3, 1.0);
  CHECK_THROWS(integrate_against_step(f, not_pow2));
}

TEST_CASE("refinement is exact") {
  const auto t = unit_tent();
  const auto fine = t.refined(5);
  for (std::uint64_t p = 0; p < 32; ++p) {
    const DyadicRational x(p, 5);
    CHECK(fine.eval(x) == doctest::Approx(t.eval(x)).epsilon(1e-15));
  }
}

TEST_CASE("grid function evaluation and CSV round trip") {
  const GridFunction2D g(1, {1.0, 2.0, 3.0, 4.0});
  CHECK(g.eval(DyadicRational(), DyadicRational()) == 1.0);
  CHECK(g.eval(DyadicRational(), DyadicRational(1, 1)) == 2.0);
  CHECK(g.eval(DyadicRational(1, 1), DyadicRational()) == 3.0);
  CHECK(g.eval(DyadicRational(1, 2), DyadicRational(3, 2)) == 2.0);

  std::stringstream ss;
  g.write_csv(ss);
  const auto back = GridFunction2D::read_csv(ss);
  CHECK(back.resolution() == 1);
  CHECK(back.cells() == g.cells());
}

TEST_CASE("pl1d CSV round trip") {
  const auto t = unit_tent();
  std::stringstream ss;
  t.write_csv(ss);
  const auto back = PiecewiseLinear1D::read_csv(ss);
  CHECK(back.resolution() == 1);
  CHECK(back.values() == t.values());
}

TEST_CASE("separable evaluation") {
  const auto f = SeparableFunction2D::product(unit_tent(), PiecewiseLinear1D::ramp(1));
  CHECK(f.eval(DyadicRational(1, 1), DyadicRational(1, 1)) == doctest::Approx(0.5));
  CHECK(f.eval(DyadicRational(1, 2), DyadicRational(1, 2)) == doctest::Approx(0.125));
  CHECK_THROWS(SeparableFunction2D({}));
}

TEST_CASE("w-continuity verdicts") {
  const Function2D constant = GridFunction2D(1, {2.0, 2.0, 2.0, 2.0});
  for (std::uint64_t p = 0; p < 4; ++p)
    for (std::uint64_t q = 0; q < 4; ++q)
      CHECK(w_continuous_at(constant, DyadicRational(p, 2), DyadicRational(q, 2), 8));

  // Indicator of [1/2,1)^2 jumps when approached from the left of 1/2.
  const Function2D ind = GridFunction2D(1, {0.0, 0.0, 0.0, 1.0});
  CHECK(!w_continuous_at(ind, DyadicRational(1, 1), DyadicRational(1, 1), 10));

  // A continuous product is continuous at breakpoints and interior points.
  const Function2D tent2 =
      SeparableFunction2D::product(unit_tent().refined(3), unit_tent().refined(3));
  CHECK(w_continuous_at(tent2, DyadicRational(1, 1), DyadicRational(1, 1), 12));
  CHECK(w_continuous_at(tent2, DyadicRational(3, 3), DyadicRational(5, 3), 12));
  CHECK(w_continuous_at(tent2, DyadicRational(), DyadicRational(), 12));
}

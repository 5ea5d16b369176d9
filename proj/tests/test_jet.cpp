#include <doctest.h>

#include <cmath>
#include <random>

#include "hessianlab/jet.hpp"

using namespace hessianlab;

namespace {

VecX vec(std::initializer_list<double> v) {
  VecX x(static_cast<int>(v.size()));
  int i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

}  // namespace

TEST_CASE("seed jets carry the point and unit first-order coefficients") {
  auto seeds = Jet::seed(vec({3.0, 5.0}), 2);
  REQUIRE(seeds.size() == 2);
  CHECK(seeds[0].value() == 3.0);
  CHECK(seeds[1].value() == 5.0);
  CHECK(seeds[0].partial({1, 0}) == 1.0);
  CHECK(seeds[0].partial({0, 1}) == 0.0);
  CHECK(seeds[0].partial({2, 0}) == 0.0);

  // degenerate order 0 behaves like a scalar
  auto s0 = Jet::seed(vec({0.0}), 0);
  CHECK(s0[0].value() == 0.0);
  CHECK(s0[0].order() == 0);
}

TEST_CASE("product of seeds reproduces the product rule") {
  auto seeds = Jet::seed(vec({3.0, 5.0}), 2);
  Jet p = seeds[0] * seeds[1];
  CHECK(p.value() == 15.0);
  CHECK(p.partial({1, 0}) == 5.0);
  CHECK(p.partial({0, 1}) == 3.0);
  CHECK(p.partial({1, 1}) == 1.0);
  CHECK(p.partial({2, 0}) == 0.0);
}

TEST_CASE("polynomial products and series reciprocals") {
  const auto& lay2 = JetLayout::get(1, 2);
  Jet x = Jet::variable(lay2, 0, 0.0);
  Jet p = (1.0 + x) * (1.0 - x);
  CHECK(p.coeff(0) == 1.0);
  CHECK(p.coeff(1) == 0.0);
  CHECK(p.coeff(2) == -1.0);

  const auto& lay3 = JetLayout::get(1, 3);
  Jet y = Jet::variable(lay3, 0, 0.0);
  Jet g = 1.0 / (1.0 - y);
  for (int i = 0; i <= 3; ++i) CHECK(g.coeff(i) == doctest::Approx(1.0).epsilon(1e-14));

  Jet z = Jet::variable(lay3, 0, 0.0);
  CHECK_THROWS_AS(z / z, DivisionByZeroValuePart);
}

TEST_CASE("exp series coefficients at zero") {
  const auto& lay = JetLayout::get(1, 3);
  Jet j = exp(Jet::variable(lay, 0, 0.0));
  CHECK(j.coeff(0) == doctest::Approx(1.0));
  CHECK(j.coeff(1) == doctest::Approx(1.0));
  CHECK(j.coeff(2) == doctest::Approx(0.5));
  CHECK(j.coeff(3) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("elementary inverse and trig identities on random jets") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_real_distribution<double> coeff(-0.8, 0.8);
  const auto& lay = JetLayout::get(2, 4);

  for (int trial = 0; trial < 20; ++trial) {
    auto seeds = Jet::seed(vec({val(rng), val(rng)}), 4);
    Jet j = seeds[0] * coeff(rng) + seeds[1] * coeff(rng) +
            seeds[0] * seeds[1] * coeff(rng) + val(rng);

    Jet back = log(exp(j));
    for (int i = 0; i < lay.size(); ++i)
      CHECK(back.coeff(i) == doctest::Approx(j.coeff(i)).epsilon(1e-13));

    Jet pyth = sin(j) * sin(j) + cos(j) * cos(j);
    CHECK(pyth.value() == doctest::Approx(1.0).epsilon(1e-13));
    for (int i = 1; i < lay.size(); ++i) CHECK(std::abs(pyth.coeff(i)) < 1e-13);

    Jet hyp = cosh(j) * cosh(j) - sinh(j) * sinh(j);
    CHECK(hyp.value() == doctest::Approx(1.0).epsilon(1e-13));
    for (int i = 1; i < lay.size(); ++i) CHECK(std::abs(hyp.coeff(i)) < 1e-12);

    Jet s = sqrt(j * j + 2.0);  // positive value part
    Jet sq = s * s;
    for (int i = 0; i < lay.size(); ++i)
      CHECK(sq.coeff(i) == doctest::Approx((j * j + 2.0).coeff(i)).epsilon(1e-12));
  }
}

TEST_CASE("partial extracts raw derivatives") {
  const auto& lay = JetLayout::get(1, 3);
  Jet x = Jet::variable(lay, 0, 2.0);
  Jet cube = x * x * x;
  CHECK(cube.partial({3}) == doctest::Approx(6.0));
  CHECK(cube.partial({0}) == doctest::Approx(8.0));
  CHECK(cube.partial({1}) == doctest::Approx(12.0));
  CHECK_THROWS_AS(cube.partial({4}), OrderExceeded);

  auto seeds = Jet::seed(vec({0.0, 0.0}), 3);
  Jet e = exp(seeds[0] + seeds[1]);
  CHECK(e.partial({2, 1}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.partial({1, 1}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ring axioms hold on coefficients") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  const auto& lay = JetLayout::get(2, 4);

  auto rnd = [&](double v0) {
    auto seeds = Jet::seed(vec({val(rng), val(rng)}), 4);
    return v0 + seeds[0] * val(rng) + seeds[1] * val(rng) + seeds[0] * seeds[0] * val(rng) +
           seeds[0] * seeds[1] * val(rng);
  };

  for (int trial = 0; trial < 10; ++trial) {
    Jet a = rnd(val(rng)), b = rnd(val(rng)), c = rnd(val(rng));
    Jet lhs = (a + b) * c;
    Jet rhs = a * c + b * c;
    for (int i = 0; i < lay.size(); ++i)
      CHECK(lhs.coeff(i) == doctest::Approx(rhs.coeff(i)).epsilon(1e-13));
    Jet assoc1 = (a * b) * c;
    Jet assoc2 = a * (b * c);
    for (int i = 0; i < lay.size(); ++i)
      CHECK(assoc1.coeff(i) == doctest::Approx(assoc2.coeff(i)).epsilon(1e-13));
  }

  // integer-coefficient inputs stay exact
  auto seeds = Jet::seed(vec({1.0, 2.0}), 4);
  Jet p = (seeds[0] + seeds[1]) * (seeds[0] - seeds[1]);
  Jet q = seeds[0] * seeds[0] - seeds[1] * seeds[1];
  for (int i = 0; i < lay.size(); ++i) CHECK(p.coeff(i) == q.coeff(i));
}

TEST_CASE("derivative_jet shifts the coefficient table") {
  auto seeds = Jet::seed(vec({0.7, -0.4}), 6);
  Jet f = exp(seeds[0]) * sin(seeds[1]) + seeds[0] * seeds[0] * seeds[1];

  // order-2 jet of d^2 f / dx1 dx2 agrees with direct partials of f
  Jet d = f.derivative_jet({1, 1}, 2);
  CHECK(d.value() == doctest::Approx(f.partial({1, 1})).epsilon(1e-13));
  CHECK(d.partial({1, 0}) == doctest::Approx(f.partial({2, 1})).epsilon(1e-13));
  CHECK(d.partial({0, 1}) == doctest::Approx(f.partial({1, 2})).epsilon(1e-13));
  CHECK(d.partial({1, 1}) == doctest::Approx(f.partial({2, 2})).epsilon(1e-13));
  CHECK(d.partial({2, 0}) == doctest::Approx(f.partial({3, 1})).epsilon(1e-13));

  CHECK_THROWS_AS(f.derivative_jet({1, 1}, 6), OrderExceeded);
}

TEST_CASE("jets of mismatched shapes refuse to combine") {
  auto a = Jet::seed(vec({1.0}), 2);
  auto b = Jet::seed(vec({1.0}), 3);
  CHECK_THROWS_AS(a[0] + b[0], ShapeMismatch);
  auto c = Jet::seed(vec({1.0, 2.0}), 2);
  CHECK_THROWS_AS(a[0] * c[0], ShapeMismatch);
}

TEST_CASE("integer powers by repeated multiplication") {
  const auto& lay = JetLayout::get(1, 4);
  Jet x = Jet::variable(lay, 0, -1.5);  // negative base is fine for integer powers
  Jet p = pow(x, 3);
  CHECK(p.value() == doctest::Approx(-3.375));
  CHECK(p.partial({1}) == doctest::Approx(3.0 * 1.5 * 1.5));
  Jet inv = pow(x, -2);
  CHECK(inv.value() == doctest::Approx(1.0 / 2.25));
  CHECK_THROWS_AS(pow(x, 0.5), DomainError);
}

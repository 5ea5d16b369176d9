#include <doctest.h>

#include <random>

#include "hessianlab/linalg.hpp"

using namespace hessianlab;

TEST_CASE("LU over doubles matches Eigen") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n : {1, 2, 3, 5}) {
    for (int trial = 0; trial < 10; ++trial) {
      MatX a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = u(rng);
      a += MatX::Identity(n, n) * 3.0;  // keep it comfortably nonsingular
      DenseLu<double> lu(a);
      CHECK(lu.det() == doctest::Approx(a.determinant()).epsilon(1e-10));
      MatX inv = lu.inverse();
      CHECK(((a * inv) - MatX::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-11);
    }
  }
}

TEST_CASE("LU pivots on value parts and propagates jet coefficients") {
  // det of [[x, 1], [1, x]] is x^2 - 1; compare the jet of the determinant
  // against the hand expansion at x = 3.
  const auto& lay = JetLayout::get(1, 3);
  Jet x = Jet::variable(lay, 0, 3.0);
  MatS<Jet> m(2, 2);
  m(0, 0) = x;
  m(0, 1) = Jet::constant(lay, 1.0);
  m(1, 0) = Jet::constant(lay, 1.0);
  m(1, 1) = x;
  DenseLu<Jet> lu(m);
  Jet d = lu.det();
  CHECK(d.value() == doctest::Approx(8.0));
  CHECK(d.partial({1}) == doctest::Approx(6.0));
  CHECK(d.partial({2}) == doctest::Approx(2.0));
  CHECK(d.partial({3}) == doctest::Approx(0.0));

  // a zero value part in the leading entry forces a pivot
  MatS<Jet> p(2, 2);
  p(0, 0) = Jet::variable(lay, 0, 0.0);
  p(0, 1) = Jet::constant(lay, 1.0);
  p(1, 0) = Jet::constant(lay, 2.0);
  p(1, 1) = Jet::variable(lay, 0, 0.0);
  DenseLu<Jet> lup(p);
  Jet dp = lup.det();  // x^2 - 2
  CHECK(dp.value() == doctest::Approx(-2.0));
  CHECK(dp.partial({2}) == doctest::Approx(2.0));
}

TEST_CASE("jet LU inverse solves to the identity") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const int n = 3;
  auto seeds = Jet::seed(VecX::Zero(2), 3);
  MatS<Jet> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = (i == j ? 2.0 : 0.0) + u(rng) * seeds[0] + u(rng) * seeds[1] +
                u(rng) * seeds[0] * seeds[1];
  DenseLu<Jet> lu(m);
  MatS<Jet> inv = lu.inverse();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = Jet::constant(JetLayout::get(2, 3), 0.0);
      for (int k = 0; k < n; ++k) s += m(i, k) * inv(k, j);
      const double target = i == j ? 1.0 : 0.0;
      CHECK(s.value() == doctest::Approx(target).epsilon(1e-12));
      for (int c = 1; c < s.coeffs().size(); ++c) CHECK(std::abs(s.coeff(c)) < 1e-12);
    }
}

TEST_CASE("singular matrices are rejected") {
  MatX a(2, 2);
  a << 1, 2, 2, 4;
  auto factor = [&] { DenseLu<double> lu(a); };
  CHECK_THROWS_AS(factor(), SingularMatrix);
}

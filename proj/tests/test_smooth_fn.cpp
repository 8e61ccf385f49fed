#include <cmath>

#include "carleman/error.hpp"
#include "carleman/smooth_fn.hpp"
#include "doctest.h"

using namespace carleman;

TEST_CASE("polynomial derivatives") {
  auto p = SmoothFn1D::polynomial({1, -2, 0, 3});  // 1 - 2x + 3x^3
  std::vector<double> d;
  p.derivatives(0.5, 5, d);
  CHECK(d[0] == doctest::Approx(1 - 1 + 3 * 0.125));
  CHECK(d[1] == doctest::Approx(-2 + 9 * 0.25));
  CHECK(d[2] == doctest::Approx(18 * 0.5));
  CHECK(d[3] == doctest::Approx(18));
  CHECK(d[4] == 0.0);
  CHECK(p.is_polynomial());
  CHECK(p.degree() == 3);
  CHECK(SmoothFn1D().value(0.3) == 0.0);
}

TEST_CASE("rational pole matches closed form") {
  auto f = SmoothFn1D::rational_pole(1.0, 2.0, 1.0);
  for (double x : {-1.0, 0.0, 0.7, 1.0})
    for (std::size_t k = 0; k <= 20; ++k)
      CHECK(f.derivative(x, k) == doctest::Approx(std::tgamma(double(k) + 1) / std::pow(2 - x, double(k) + 1)));
}

TEST_CASE("lacunary series derivatives by finite differences") {
  auto f = SmoothFn1D::lacunary(2.0);
  std::vector<double> d, dp, dm;
  const double x = 0.3, h = 1e-5;
  f.derivatives(x, 6, d);
  f.derivatives(x + h, 6, dp);
  f.derivatives(x - h, 6, dm);
  for (std::size_t k = 0; k < 6; ++k) CHECK(d[k + 1] == doctest::Approx((dp[k] - dm[k]) / (2 * h)).epsilon(1e-4));
  // Gevrey growth: sup |f^(k)| <= sum a_j b_j^k, finite at the cap
  f.derivatives(0.0, 40, d);
  CHECK(std::isfinite(d[40]));
  CHECK_THROWS_AS(f.derivatives(0.0, 41, d), Error);
}

TEST_CASE("chebyshev interpolant and spectral derivatives") {
  auto f = SmoothFn1D::chebyshev_interpolant([](double x) { return std::exp(x); }, 40);
  for (double x : {-0.9, 0.0, 0.55})
    for (std::size_t k = 0; k <= 4; ++k) CHECK(f.derivative(x, k) == doctest::Approx(std::exp(x)).epsilon(1e-7));
  // T_3 = 4x^3 - 3x
  auto t3 = SmoothFn1D::chebyshev({0, 0, 0, 1});
  CHECK(t3.derivative(0.4, 1) == doctest::Approx(12 * 0.16 - 3));
  CHECK(t3.derivative(0.4, 3) == doctest::Approx(24));
  CHECK(t3.derivative(0.4, 4) == doctest::Approx(0.0));
}

TEST_CASE("powers via Leibniz") {
  auto x = SmoothFn1D::polynomial({0, 1});
  auto x3 = SmoothFn1D::power(x, 3);
  std::vector<double> d;
  x3.derivatives(0.5, 4, d);
  CHECK(d[0] == doctest::Approx(0.125));
  CHECK(d[1] == doctest::Approx(0.75));
  CHECK(d[2] == doctest::Approx(3.0));
  CHECK(d[3] == doctest::Approx(6.0));
  CHECK(d[4] == doctest::Approx(0.0));
  auto f = SmoothFn1D::lacunary(2.0);
  auto f2 = SmoothFn1D::power(f, 2);
  std::vector<double> a, b;
  f.derivatives(0.2, 2, a);
  f2.derivatives(0.2, 2, b);
  CHECK(b[0] == doctest::Approx(a[0] * a[0]));
  CHECK(b[2] == doctest::Approx(2 * a[1] * a[1] + 2 * a[0] * a[2]));
}

#include <cmath>

#include "carleman/cplane.hpp"
#include "carleman/error.hpp"
#include "carleman/numeric.hpp"
#include "doctest.h"

using namespace carleman;

TEST_CASE("ellipse membership and distance") {
  EllipseDomain D{0.3};
  CHECK(D.contains(0.0));
  CHECK_FALSE(D.contains(std::cosh(0.3)));
  CHECK(D.contains(cplx(0.0, std::sinh(0.3) / 2)));
  CHECK(D.a() * D.a() - D.b() * D.b() == doctest::Approx(1.0));
  CHECK(dist_to_interval({0.5, 0.3}) == doctest::Approx(0.3));
  CHECK(dist_to_interval(2.0) == doctest::Approx(1.0));
  CHECK(dist_to_interval({1.0, 1.0}) == doctest::Approx(1.0));

  // elliptic radius inverts the boundary parametrization
  for (double s : {0.05, 0.3, 1.0})
    for (double th : {0.0, 0.7, 2.0, 4.5}) {
      cplx z(std::cosh(s) * std::cos(th), std::sinh(s) * std::sin(th));
      CHECK(elliptic_radius(z) == doctest::Approx(s).epsilon(1e-9));
      // analytic dbar s against central differences
      const double d = 1e-6;
      double sx = (elliptic_radius(z + d) - elliptic_radius(z - d)) / (2 * d);
      double sy = (elliptic_radius(z + cplx(0, d)) - elliptic_radius(z - cplx(0, d))) / (2 * d);
      cplx ds = dbar_elliptic_radius(z);
      CHECK(ds.real() == doctest::Approx(0.5 * sx).epsilon(1e-5));
      CHECK(ds.imag() == doctest::Approx(0.5 * sy).epsilon(1e-5));
    }
}

TEST_CASE("geometry constants") {
  auto gc = geometry_constants(0.4);
  // C >= the co-vertex and vertex samples
  for (double e : {0.1, 0.4}) {
    CHECK(gc.C >= std::sinh(e) / e - 1e-12);
    CHECK(gc.C >= (std::cosh(e) - 1) / e - 1e-12);
  }
  CHECK(gc.C < 1.1);
  // E <= sinh(eps/2)/eps from the disk at x = 0, b = 0
  CHECK(gc.E > 0.0);
  CHECK(gc.E <= std::sinh(0.2) / 0.4 + 1e-12);
  CHECK_THROWS_AS(geometry_constants(0.0), Error);
}

TEST_CASE("cutoff") {
  for (double eps : {0.4, 0.2}) {
    CHECK(cutoff_value(eps, 0.0) == 1.0);
    CHECK(cutoff_value(eps, cplx(0, std::sinh(eps))) == 0.0);
    CHECK(cutoff_value(eps, 0.99 * std::cosh(eps / 2)) == 1.0);
  }
  Grid g = Grid::for_ellipse(0.4, 512);
  double prod[3];
  int n = 0;
  for (double eps : {0.4, 0.2, 0.1}) {
    auto c = cutoff_phi(g, eps);
    EllipseDomain half{eps / 2}, full{eps};
    for (std::size_t k = 0; k < g.size(); ++k) {
      double v = c.phi.v[k].real();
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (half.contains(g.z(k))) CHECK(v == 1.0);
      if (!full.contains(g.z(k))) CHECK(v == 0.0);
    }
    prod[n++] = c.max_grad * eps;
  }
  // max |grad phi| ~ 1/eps up to the vertex factor: allow 2x per halving
  CHECK(prod[1] / prod[0] < 4.0);
  CHECK(prod[2] / prod[1] < 4.0);
  CHECK_THROWS_AS(cutoff_phi(Grid::for_ellipse(0.4, 64), 0.05), Error);
}

TEST_CASE("Wirtinger derivative on samples") {
  Grid g = Grid::make(1.0, 1.0, 64);
  GridFn z(g), zb(g), r2(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    z.v[k] = g.z(k);
    zb.v[k] = std::conj(g.z(k));
    r2.v[k] = std::norm(g.z(k));
  }
  auto a = dbar(z), b = dbar(zb), c = dbar(r2), d = dz(z);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(std::abs(a.v[k]) < 1e-12);
    CHECK(std::abs(b.v[k] - 1.0) < 1e-12);
    CHECK(std::abs(d.v[k] - 1.0) < 1e-12);
  }
  // |z|^2 is exact in the interior; the one-sided edge stencils are O(h)
  for (std::size_t j = 1; j + 1 < g.ny; ++j)
    for (std::size_t i = 1; i + 1 < g.nx; ++i) CHECK(std::abs(c.at(i, j) - g.z(i, j)) < 1e-12);
  CHECK(std::abs(c.at(0, 5) - g.z(0, 5)) <= g.h);
}

TEST_CASE("solve_dbar: disk closed form, residual, linearity") {
  Grid g = Grid::make(1.0, 1.0, 128);
  const double R = 0.5;
  GridFn w(g);
  for (std::size_t k = 0; k < g.size(); ++k)
    if (std::abs(g.z(k)) < R) w.v[k] = 1.0;
  std::vector<std::size_t> inner, outer;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double r = std::abs(g.z(k));
    if (r < R / 2) inner.push_back(k);
    if (r > 1.5 * R && r < 0.9) outer.push_back(k);
  }
  auto all = inner;
  all.insert(all.end(), outer.begin(), outer.end());
  auto s = solve_dbar(w, all);
  // v = conj(z) inside, R^2/z outside
  for (auto k : inner) CHECK(std::abs(s.v.v[k] - std::conj(g.z(k))) < 5 * g.h);
  for (auto k : outer) CHECK(std::abs(s.v.v[k] - R * R / g.z(k)) < 5 * g.h);
  CHECK(s.bound >= sup_norm(s.v, all));
  CHECK(s.support_area == doctest::Approx(kPi * R * R).epsilon(0.05));

  // smooth source: dbar of the solution reproduces w in the interior
  GridFn w1(g), w2(g), mix(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    double q = 1 - std::norm(g.z(k)) / (R * R);
    if (q > 0) {
      w1.v[k] = q * q * q;
      w2.v[k] = q * q * q * std::exp(cplx(0, 3 * g.z(k).real()));
    }
    mix.v[k] = 0.5 * w1.v[k] + w2.v[k];
  }
  auto v1 = solve_dbar(w1), v2 = solve_dbar(w2), vm = solve_dbar(mix);
  auto res = dbar(v1.v);
  double worst = 0;
  for (auto k : inner) worst = std::max(worst, std::abs(res.v[k] - w1.v[k]));
  CHECK(worst < g.h);
  double lin = 0;
  for (std::size_t k = 0; k < g.size(); ++k)
    lin = std::max(lin, std::abs(vm.v.v[k] - (0.5 * v1.v.v[k] + v2.v.v[k])));
  CHECK(lin < 1e-13);

  // support radius monotonicity of the sup ratio
  double prev = 0;
  for (double rr : {0.2, 0.4, 0.6}) {
    GridFn wr(g);
    for (std::size_t k = 0; k < g.size(); ++k)
      if (std::abs(g.z(k)) < rr) wr.v[k] = 1.0;
    auto sr = solve_dbar(wr, inner);
    double ratio = sup_norm(sr.v, inner);
    CHECK(ratio >= prev);
    prev = ratio;
  }
}

TEST_CASE("solve_dbar: trivial and edge cases") {
  Grid g = Grid::make(1.0, 1.0, 32);
  GridFn w(g);
  auto s = solve_dbar(w);
  CHECK(sup_norm(s.v, ellipse_nodes(g, 0.5)) == 0.0);
  CHECK(s.bound == 0.0);
  w.at(0, 3) = 1.0;
  CHECK_THROWS_AS(solve_dbar(w), Error);
  // partitioning over targets does not change the values
  GridFn u(g);
  for (std::size_t k = 0; k < g.size(); ++k)
    if (std::abs(g.z(k)) < 0.6) u.v[k] = cplx(std::cos(7 * g.z(k).real()), g.z(k).imag());
  auto full = solve_dbar(u);
  auto part = solve_dbar(u, {5, 100, 400});
  for (std::size_t k : {5u, 100u, 400u}) CHECK(part.v.v[k] == full.v.v[k]);
}

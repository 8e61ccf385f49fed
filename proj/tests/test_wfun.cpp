#include <cmath>
#include <random>

#include "carleman/error.hpp"
#include "carleman/wfun.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace carleman;

namespace {

// max of s u - phi(u) over a fine uniform grid on [0, U]
double grid_sup(const WeightFunction::PhiFn& phi, double s, double U, std::size_t n) {
  double best = -INFINITY;
  for (std::size_t i = 0; i <= n; ++i) {
    double u = U * double(i) / double(n);
    best = std::max(best, s * u - phi(u));
  }
  return best;
}

}  // namespace

TEST_CASE("weight function certificates") {
  auto w = mk_weight_function("power:0.5");
  const auto& c = w.certificates();
  CHECK(c.omega1.ok);
  CHECK(c.omega1.witness == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  CHECK(c.omega2.ok);
  CHECK(c.omega3.ok);
  CHECK(c.omega4.ok);
  CHECK(c.concave.ok);

  CHECK_FALSE(mk_weight_function("power:1").certificates().omega2.ok);
  CHECK_THROWS_AS(mk_weight_function("nope"), Error);

  std::vector<double> g(10), v(10);
  for (int i = 0; i < 10; ++i) g[i] = v[i] = i + 1;
  CHECK_THROWS_AS(WeightFunction::from_samples(g, v, "short"), Error);
}

TEST_CASE("nq_integral") {
  auto w = WeightFunction::from_phi([](double u) { return std::exp(0.5 * u); }, "sqrt", 1e8);
  auto r = nq_integral(w);
  CHECK(r.convergent);
  CHECK(r.value_partial + r.tail_estimate == doctest::Approx(2.0).epsilon(0.01));

  auto l = mk_weight_function("log2");
  auto rl = nq_integral(l);
  CHECK(rl.convergent);
  // oracle: int_1^inf log(1+t)^2/t^2 dt by Simpson in u = log t up to u = 80
  double acc = 0.0;
  const int n = 200000;
  const double U = 80.0, hu = U / n;
  for (int i = 0; i <= n; ++i) {
    double u = i * hu, t = std::exp(u);
    double lg = std::log1p(t);
    double f = lg * lg / t;
    acc += f * (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2));
  }
  acc *= hu / 3.0;
  CHECK(rl.value_partial + rl.tail_estimate == doctest::Approx(acc).epsilon(0.02));

  CHECK_FALSE(nq_integral(mk_weight_function("t-over-log")).convergent);
}

TEST_CASE("discrete_legendre against scan") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2, 2);
  std::vector<double> x(200), f(200);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 0.05 * double(i);
    f[i] = U(rng) + x[i] * x[i];
  }
  std::vector<double> y;
  for (int i = 0; i < 97; ++i) y.push_back(-3.0 + 0.4 * i);
  auto g = discrete_legendre(x, f, y);
  for (std::size_t q = 0; q < y.size(); ++q) {
    double best = -INFINITY;
    for (std::size_t i = 0; i < x.size(); ++i) best = std::max(best, y[q] * x[i] - f[i]);
    CHECK(g[q] == doctest::Approx(best).epsilon(1e-14));
  }
}

TEST_CASE("young conjugate of sqrt") {
  auto w = mk_weight_function("power:0.5");
  std::vector<double> s;
  for (int i = 0; i <= 200; ++i) s.push_back(0.5 + 0.25 * i);
  auto c = young_conjugate(w, s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    double exact = 2 * s[i] * std::log(2 * s[i]) - 2 * s[i];
    // closed form holds for the un-normalized phi
    CHECK(c.vals[i] == doctest::Approx(exact).epsilon(1e-6));
    CHECK(c.argmax_u[i] == doctest::Approx(2 * std::log(2 * s[i])).epsilon(1e-4));
    CHECK(c.vals[i] == doctest::Approx(grid_sup(w.generator(), s[i], 20.0, 400000)).epsilon(1e-6));
  }
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(c.vals[i] >= c.vals[i - 1]);
  for (std::size_t i = 1; i + 1 < s.size(); ++i)
    CHECK(c.vals[i - 1] + c.vals[i + 1] - 2 * c.vals[i] >= -1e-9);

  auto z = young_conjugate(w.normalized(), std::vector<double>{0.0});
  CHECK(z.vals[0] == doctest::Approx(0.0));
}

TEST_CASE("biconjugation of convex PL phi") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.01, 0.4);
  for (int trial = 0; trial < 10; ++trial) {
    // convex PL phi on t-grid with increasing slopes >= 0
    std::vector<double> t(100), v(100);
    double slope = U(rng), p = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      double u = 0.2 * double(i);
      t[i] = std::exp(u);
      v[i] = p;
      slope += U(rng) * 0.05;
      p += 0.2 * slope;
    }
    auto w = WeightFunction::from_samples(t, v, "pl");
    // s below the last slope keeps the sup finite; the step resolves every slope increment
    std::vector<double> s;
    for (int i = 0; i <= 4000; ++i) s.push_back(0.95 * slope * i / 4000.0);
    auto c = young_conjugate(w, s);
    std::vector<double> u(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) u[i] = std::log(t[i]);
    auto bb = biconjugate(c, u);
    // nodes whose supporting slopes lie inside the s range
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      double sl = (v[i + 1] - v[i]) / 0.2;
      if (sl > s.back()) break;
      CHECK(bb[i] == doctest::Approx(v[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("associated matrix of sqrt satisfies fctmod") {
  auto w = mk_weight_function("power:0.5");
  std::vector<double> xs{0.5, 1.0, 2.0};
  auto am = associated_matrix(w, xs, 256);
  CHECK(am.fctmod.worst_slack >= -1e-9);
  CHECK(am.fctmod.pairs > 0);
  REQUIRE(am.matrix.size() == 3);
  for (std::size_t k = 0; k <= 256; ++k) {
    CHECK(am.matrix.at(0).log_M(k) <= am.matrix.at(1).log_M(k) + 1e-12);
    CHECK(am.matrix.at(1).log_M(k) <= am.matrix.at(2).log_M(k) + 1e-12);
  }
  // comparable with (k!)^2 up to geometric factors
  auto G = WeightSequence::make(oracle::gevrey(2.0, 256), "g2");
  const auto& O = am.matrix.at(1);
  CHECK(std::abs(relation(O, G).tail_slope) <= kTrendTol);
  CHECK(std::abs(relation(G, O).tail_slope) <= kTrendTol);
}

TEST_CASE("omega_from_sequence") {
  auto G = WeightSequence::make(oracle::gevrey(2.0, 256), "g2");
  auto w = omega_from_sequence(G);
  CHECK(w(1.0) == doctest::Approx(0.0));
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w.vals()[i] >= w.vals()[i - 1]);
  // slope of log omega vs log t over the last decade
  std::vector<double> lx, ly;
  double T = w.grid().back();
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w.grid()[i] >= T / 10 && w.vals()[i] > 0) {
      lx.push_back(std::log(w.grid()[i]));
      ly.push_back(std::log(w.vals()[i]));
    }
  CHECK(fit_line(lx, ly).slope == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("omega_tilde for sqrt below t/log") {
  auto w = mk_weight_function("power:0.5");
  auto f = mk_weight_function("t-over-log");
  auto o = omega_tilde(w, f, 8);
  CHECK(o.n_reached >= 4);
  CHECK(o.sandwich_ok);
  CHECK(o.worst_left >= -1e-9);
  CHECK(o.worst_right >= -1e-9);
  REQUIRE(o.ratio_to_base.size() >= 3);
  for (std::size_t i = 1; i < o.ratio_to_base.size(); ++i) {
    CHECK(o.ratio_to_base[i] > o.ratio_to_base[i - 1]);
    CHECK(o.ratio_to_target[i] < o.ratio_to_target[i - 1]);
  }
  CHECK(o.tilde.certificates().concave.ok);
  CHECK(nq_integral(o.tilde).convergent);

  CHECK_THROWS_AS(omega_tilde(f, f, 4), Error);
}

TEST_CASE("ell_compare") {
  auto w = mk_weight_function("power:0.5");
  PositiveSequence one{std::vector<double>(64, 0.0), "one"};
  auto e = ell_compare(one, w.normalized());
  CHECK(e.holds);
  CHECK(e.constant == doctest::Approx(0.0).epsilon(1e-12));

  auto am = associated_matrix(w, std::vector<double>{1.0}, 64);
  auto e2 = ell_compare(am.matrix.at(0).M(), w.normalized());
  CHECK(e2.holds);
  CHECK(e2.constant <= 1e-9);
}

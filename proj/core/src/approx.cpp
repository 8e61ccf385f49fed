#include "carleman/approx.hpp"

#include <algorithm>
#include <cmath>

#include "carleman/error.hpp"
#include "carleman/numeric.hpp"

namespace carleman {

// ---------------------------------------------------------- Gamma, growth

ContinuousGamma::ContinuousGamma(const PositiveSequence& m) {
  const std::size_t K = m.K();
  lambda_.resize(K);
  double run = -kInf;
  for (std::size_t k = 0; k < K; ++k) {
    run = std::max(run, m.logv[k + 1] - m.logv[k]);
    lambda_[k] = run;
  }
}

double ContinuousGamma::nu(double log_t, double* dnu) const {
  if (dnu) *dnu = 0.0;
  const double u = -log_t;
  if (lambda_.empty() || u <= lambda_[0]) return 0.0;
  auto it = std::lower_bound(lambda_.begin(), lambda_.end(), u);
  if (it == lambda_.end()) return double(lambda_.size() - 1);
  const std::size_t k = std::size_t(it - lambda_.begin());
  const double span = lambda_[k] - lambda_[k - 1];
  if (dnu) *dnu = -1.0 / span;
  return double(k - 1) + (u - lambda_[k - 1]) / span;
}

double derivative_growth(const SmoothFn1D& f, const WeightSequence& M, std::size_t npts) {
  const std::size_t cap = std::min(f.dcap(), M.K());
  std::vector<double> sup(cap + 1, 0.0), d;
  for (std::size_t i = 0; i < npts; ++i) {
    double x = -1.0 + 2.0 * double(i) / double(npts - 1);
    f.derivatives(x, cap, d);
    for (std::size_t k = 0; k <= cap; ++k) sup[k] = std::max(sup[k], std::fabs(d[k]));
  }
  double best = 0.0;
  for (std::size_t k = std::max<std::size_t>(1, cap / 2); k <= cap; ++k)
    if (sup[k] > 0.0) best = std::max(best, std::exp((std::log(sup[k]) - M.log_M(k)) / double(k)));
  return best;
}

// ------------------------------------------------------ Dynkin extension

namespace {

cplx dbar_dist(cplx z) {
  const double x = z.real(), y = z.imag();
  if (std::fabs(x) <= 1.0) {
    if (y == 0.0) return {0.0, 0.0};
    return {0.0, y > 0 ? 0.5 : -0.5};
  }
  cplx w = z - (x > 0 ? 1.0 : -1.0);
  return w / (2.0 * std::abs(w));
}

}  // namespace

AlmostAnalyticExt almost_analytic_ext(const SmoothFn1D& f, const WeightSequence& M, double rho,
                                      const Grid& g, double chi_s0) {
  const std::size_t dcap = f.dcap();
  if (dcap < 2) throw Error(ErrorCode::InvalidArgument, "almost_analytic_ext: dcap < 2");
  AlmostAnalyticExt out;
  out.F = GridFn(g);
  out.dbarF = GridFn(g);
  out.rho = rho;
  out.nu_max = double(dcap - 1);
  const ContinuousGamma cg(M.m());
  const RadialStep chi{chi_s0, 1.1 * chi_s0};
  const AssocFns hm(M.m());
  const cplx I(0.0, 1.0);

  std::vector<double> d;
  std::vector<cplx> p(dcap + 1);
  for (std::size_t i = 0; i < g.nx; ++i) {
    f.derivatives(g.x(i), dcap, d);
    for (std::size_t j = 0; j < g.ny; ++j) {
      const cplx z = g.z(i, j);
      const double y = z.imag();
      const double dist = dist_to_interval(z);
      double nu = out.nu_max, dnu = 0.0;
      if (dist > 0.0 && rho > 0.0) {
        nu = cg.nu(std::log(rho * dist), &dnu);
        if (nu >= out.nu_max) {
          nu = out.nu_max;
          dnu = 0.0;
          out.cap_binds = true;
          out.d_floor = std::max(out.d_floor, dist);
        }
      } else if (dist > 0.0) {
        out.cap_binds = true;
      }
      const std::size_t n = std::size_t(nu);
      const double th = nu - double(n);
      // p_k = (iy)^k / k!
      p[0] = 1.0;
      for (std::size_t k = 1; k <= n + 1 && k <= dcap; ++k) p[k] = p[k - 1] * (I * y) / double(k);
      Neumaier tr, ti;
      for (std::size_t k = 0; k <= n; ++k) {
        cplx t = d[k] * p[k];
        tr.add(t.real());
        ti.add(t.imag());
      }
      cplx T(tr.value(), ti.value());
      cplx dT = 0.5 * (1.0 - th) * d[n + 1] * p[n];
      if (th > 0.0) {
        cplx next = d[n + 1] * p[n + 1];
        T += th * next;
        dT += 0.5 * th * d[n + 2] * p[n + 1];
        dT += next * (dnu / dist) * dbar_dist(z);
      }
      const double c = chi.value(z);
      out.F.at(i, j) = c * T;
      out.dbarF.at(i, j) = c * dT + T * chi.dbar(z);
    }
  }

  // envelope scan
  std::vector<double> dd, lw;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx z = g.z(k);
    const double dist = dist_to_interval(z);
    const double a = std::abs(out.dbarF.v[k]);
    if (dist < 4.0 * g.h || dist > 0.5 || dist < out.d_floor || a == 0.0) continue;
    if (elliptic_radius(z) > chi_s0) continue;
    dd.push_back(dist);
    lw.push_back(std::log(a));
  }
  if (rho > 0.0 && !dd.empty()) {
    auto spread = [&](double r, double& cmax) {
      Neumaier s1, s2;
      cmax = -kInf;
      for (std::size_t q = 0; q < dd.size(); ++q) {
        double v = lw[q] - hm.log_h(std::log(r * dd[q]));
        cmax = std::max(cmax, v);
        s1.add(v);
        s2.add(v * v);
      }
      double mean = s1.value() / double(dd.size());
      return s2.value() / double(dd.size()) - mean * mean;
    };
    double cm;
    spread(rho, cm);
    out.C_measured = std::exp(cm);
    double best = kInf;
    for (int q = -16; q <= 16; ++q) {
      double r = rho * std::exp2(double(q) / 4.0), c;
      double s = spread(r, c);
      if (s < best) {
        best = s;
        out.rho_fit = r;
        out.C_fit = std::exp(c);
      }
    }
  }
  return out;
}

// ------------------------------------------------------------- curve fit

ErrorCurveFit fit_error_curve(const std::vector<double>& eps, const std::vector<double>& err,
                              const AssocFns& m, double floor) {
  if (eps.size() != err.size() || eps.empty())
    throw Error(ErrorCode::InvalidArgument, "fit_error_curve: size mismatch");
  ErrorCurveFit out;
  // longest strictly decreasing run above the floor, eps in the given order
  std::size_t best_first = 0, best_len = 0;
  for (std::size_t a = 0; a < err.size(); ++a) {
    if (!(err[a] > floor)) continue;
    std::size_t b = a + 1;
    while (b < err.size() && err[b] > floor && err[b] < err[b - 1]) ++b;
    if (b - a > best_len) {
      best_len = b - a;
      best_first = a;
    }
  }
  out.first = best_first;
  out.count = best_len;
  out.at_floor = best_len < 3;

  auto envelope = [&](double c2) {
    double c = -kInf;
    for (std::size_t i = 0; i < err.size(); ++i)
      if (err[i] > 0.0) c = std::max(c, std::log(err[i]) - m.log_h(std::log(c2 * eps[i])));
    return c == -kInf ? 0.0 : std::exp(c);
  };
  if (out.at_floor) {
    out.c2 = 1.0;
    out.c1 = envelope(1.0);
    return out;
  }
  std::vector<double> y(best_len), x(best_len);
  for (std::size_t i = 0; i < best_len; ++i) y[i] = std::log(err[best_first + i]);
  double best = kInf;
  for (std::size_t q = 0; q <= 800; ++q) {
    double c2 = std::pow(10.0, -4.0 + 8.0 * double(q) / 800.0);
    for (std::size_t i = 0; i < best_len; ++i) x[i] = m.log_h(std::log(c2 * eps[best_first + i]));
    Neumaier s;
    for (std::size_t i = 0; i < best_len; ++i) s.add(y[i] - x[i]);
    double mean = s.value() / double(best_len), rss = 0.0;
    for (std::size_t i = 0; i < best_len; ++i) rss += (y[i] - x[i] - mean) * (y[i] - x[i] - mean);
    if (rss < best) {
      best = rss;
      out.c2 = c2;
    }
  }
  for (std::size_t i = 0; i < best_len; ++i) x[i] = m.log_h(std::log(out.c2 * eps[best_first + i]));
  out.correlation = pearson(x, y);
  out.c1 = envelope(out.c2);
  return out;
}

// ---------------------------------------------------------- holo_forward

std::vector<double> ApproxFamily::eps() const {
  std::vector<double> e;
  for (const auto& l : levels) e.push_back(l.eps);
  return e;
}

std::vector<double> ApproxFamily::errors() const {
  std::vector<double> e;
  for (const auto& l : levels) e.push_back(l.err);
  return e;
}

const ApproxLevel* ApproxFamily::level(double e) const {
  for (const auto& l : levels)
    if (std::fabs(l.eps - e) <= 1e-12 * e) return &l;
  return nullptr;
}

namespace {

std::vector<std::size_t> with_ring(const Grid& g, const std::vector<std::size_t>& nodes) {
  std::vector<char> mark(g.size(), 0);
  for (auto k : nodes) {
    mark[k] = 1;
    const std::size_t i = k % g.nx, j = k / g.nx;
    if (i > 0) mark[k - 1] = 1;
    if (i + 1 < g.nx) mark[k + 1] = 1;
    if (j > 0) mark[k - g.nx] = 1;
    if (j + 1 < g.ny) mark[k + g.nx] = 1;
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (mark[k]) out.push_back(k);
  return out;
}

double pair_constant(const PositiveSequence& a, const PositiveSequence& b) {
  double c = -kInf;
  for (std::size_t j = 0; j + 1 <= std::min(a.K(), b.K()); ++j)
    c = std::max(c, (a.logv[j + 1] - b.logv[j]) / double(j + 1));
  return std::exp(c);
}

}  // namespace

ApproxFamily holo_forward(const SmoothFn1D& f, const std::array<WeightSequence, 3>& chain,
                          const HoloForwardOptions& opt) {
  if (!(opt.eps0 > 0.0) || opt.eps0 > 1.0 || opt.levels == 0)
    throw Error(ErrorCode::InvalidArgument, "holo_forward: need 0 < eps0 <= 1 and levels >= 1");
  ApproxFamily fam;
  fam.f_name = f.name();
  for (int i = 0; i < 3; ++i) fam.chain[i] = chain[i].label();
  fam.grid = Grid::for_ellipse(opt.eps0, opt.cells);
  fam.interval = interval_nodes(fam.grid);
  fam.m3 = chain[2].m();
  fam.B0 = derivative_growth(f, chain[0]);
  fam.B1 = gamma_link_constant(AssocFns(chain[0].m()), AssocFns(chain[1].m()));
  fam.B2 = pair_constant(chain[1].m(), chain[2].m());
  fam.Cgeom = geometry_constants(opt.eps0).C;
  fam.c2_pred = fam.Cgeom * fam.B0 * fam.B1;

  const Grid& g = fam.grid;
  auto ext = almost_analytic_ext(f, chain[0], fam.B0, g, opt.eps0);
  fam.d_floor = ext.d_floor;
  for (std::size_t i = 0; i < opt.levels; ++i) {
    ApproxLevel L;
    L.eps = opt.eps0 * std::ldexp(1.0, -int(i));
    L.nodes = ellipse_nodes(g, L.eps);
    L.support = with_ring(g, L.nodes);
    GridFn w(g);
    for (auto k : L.nodes) w.v[k] = ext.dbarF.v[k];
    auto sol = solve_dbar(w, L.support);
    L.f = GridFn(g);
    for (auto k : L.support) L.f.v[k] = ext.F.v[k] - sol.v.v[k];
    L.sup_omega = sup_norm(L.f, L.nodes);
    for (auto k : fam.interval) L.err = std::max(L.err, std::abs(f.value(g.z(k).real()) - L.f.v[k]));
    L.w_sup = sol.w_sup;
    L.v_bound = sol.bound;
    fam.K = std::max(fam.K, L.sup_omega);
    fam.levels.push_back(std::move(L));
  }
  auto fit = fit_error_curve(fam.eps(), fam.errors(), AssocFns(fam.m3));
  fam.c1 = fit.c1;
  fam.c2 = fit.c2;
  fam.correlation = fit.correlation;
  fam.at_floor = fit.at_floor;
  return fam;
}

// ----------------------------------------------------------- three lines

ThreeLinesResult three_lines_shrink(const GridFn& g, double eps, const ThreeLinesBounds& b,
                                    const AssocFns& m, const AssocFns& n) {
  const Grid& G = g.grid;
  auto full = ellipse_nodes(G, eps);
  auto half = ellipse_nodes(G, 0.5 * eps);
  const double rel = 1e-12;
  double sup_full = sup_norm(g, full);
  double sup_int = sup_norm(g, interval_nodes(G));
  if (sup_full > b.L * (1 + rel) + b.noise)
    throw Error(ErrorCode::HypothesisFailed, "three_lines_shrink: |g| exceeds L on the ellipse");
  double hm = m.h(b.a2 * eps).h;
  if (sup_int > b.a1 * hm * (1 + rel) + b.noise)
    throw Error(ErrorCode::HypothesisFailed, "three_lines_shrink: interval bound fails");

  ThreeLinesResult out;
  out.a3 = std::max(b.a1, b.L);
  out.a4 = std::exp(1.0) * b.C * b.a2;
  out.certified = out.a3 * n.h(out.a4 * eps).h + b.noise;
  out.measured = sup_norm(g, half);
  std::vector<char> in(G.size(), 0);
  for (auto k : full) in[k] = 1;
  for (auto k : half) {
    const std::size_t i = k % G.nx, j = k / G.nx;
    const std::size_t nb[4] = {i > 0 ? k - 1 : k, i + 1 < G.nx ? k + 1 : k, j > 0 ? k - G.nx : k,
                               j + 1 < G.ny ? k + G.nx : k};
    for (auto q : nb)
      if (q != k && in[q]) out.lipschitz = std::max(out.lipschitz, std::abs(g.v[q] - g.v[k]) / G.h);
  }
  out.slack = 2.0 * G.h * out.lipschitz;
  out.holds = out.measured <= out.certified + out.slack;
  return out;
}

std::vector<FamilyShrink> three_lines_family(const ApproxFamily& fam) {
  std::vector<FamilyShrink> out;
  const AssocFns m(fam.m3);
  const double C = moderate_growth_constant(fam.m3, fam.m3).value;
  for (std::size_t i = 1; i < fam.levels.size(); ++i) {
    const auto& a = fam.levels[i];
    const auto& b = fam.levels[i - 1];
    GridFn gdiff(fam.grid);
    for (auto k : a.support) gdiff.v[k] = a.f.v[k] - b.f.v[k];
    ThreeLinesBounds tb{2.0 * fam.K, 2.0 * fam.c1, 2.0 * fam.c2, C};
    out.push_back({a.eps, three_lines_shrink(gdiff, a.eps, tb, m, m)});
  }
  return out;
}

// ----------------------------------------------------------- inverse

double inverse_sigma(double D1, double D2, double c2, double E, double b) {
  return 2.0 * std::exp(1.0) * D1 * D2 * c2 / (E * (1.0 - b));
}

InverseCertificate holo_inverse(const ApproxFamily& fam, const std::array<WeightSequence, 3>& chain,
                                double b, const SmoothFn1D* f) {
  if (!(b > 0.0 && b < 1.0)) throw Error(ErrorCode::InvalidArgument, "holo_inverse: 0 < b < 1");
  if (fam.levels.empty()) throw Error(ErrorCode::InvalidArgument, "holo_inverse: empty family");
  InverseCertificate out;
  out.b = b;
  out.D1 = moderate_growth_constant(chain[0], chain[1]).value;
  out.D2 = moderate_growth_constant(chain[1], chain[2]).value;
  const double eps0 = fam.levels.front().eps;
  out.E = geometry_constants(eps0).E;
  out.sigma = inverse_sigma(out.D1, out.D2, fam.c2, out.E, b);
  out.target = chain[2].label();

  const AssocFns n(fam.m3);
  const double C = moderate_growth_constant(fam.m3, fam.m3).value;
  const double log_a3 = std::log(std::max(2.0 * fam.c1, 2.0 * fam.K));
  const double a4 = std::exp(1.0) * C * 2.0 * fam.c2;
  const std::size_t kmax = std::min<std::size_t>(f ? f->dcap() : kDefaultDerivativeCap, chain[2].K());
  const double log_r0 = std::log(out.E * (1.0 - b) * eps0);

  out.log_bound.assign(kmax + 1, -kInf);
  for (std::size_t k = 0; k <= kmax; ++k) {
    double total = fam.K > 0.0 ? std::log(fam.K) - double(k) * log_r0 : -kInf;
    double prev = kInf;
    int falling = 0;
    std::size_t j = 1;
    for (; j <= 400; ++j) {
      const double eps = eps0 * std::ldexp(1.0, -int(j));
      double term = log_a3 + n.log_h(std::log(a4 * eps)) - double(k) * (log_r0 - double(j) * std::log(2.0));
      total = log_add(total, term);
      falling = term < prev ? falling + 1 : 0;
      prev = term;
      if (falling >= 3 && term < total - 46.0) break;
    }
    if (j > 400) throw Error(ErrorCode::TailNotSummable, "holo_inverse: level sum does not settle");
    out.levels_summed = std::max(out.levels_summed, j);
    out.log_bound[k] = log_factorial(k) + total;
  }
  out.log_A = -kInf;
  const double ls = std::log(out.sigma);
  for (std::size_t k = 0; k <= kmax; ++k)
    out.log_A = std::max(out.log_A, out.log_bound[k] - double(k) * ls - chain[2].log_M(k));

  if (f) {
    out.log_measured.assign(kmax + 1, -kInf);
    std::vector<double> d;
    for (std::size_t i = 0; i < 1001; ++i) {
      f->derivatives(-b + 2.0 * b * double(i) / 1000.0, kmax, d);
      for (std::size_t k = 0; k <= kmax; ++k)
        if (d[k] != 0.0) out.log_measured[k] = std::max(out.log_measured[k], std::log(std::fabs(d[k])));
    }
    out.k_verified = 0;
    for (std::size_t k = 0; k <= kmax; ++k) {
      if (out.log_measured[k] > out.log_bound[k] + 1e-9) break;
      out.k_verified = k;
    }
  }
  return out;
}

double seminorm(const SmoothFn1D& f, const WeightSequence& M, double sigma) {
  const std::size_t cap = std::min(f.dcap(), M.K());
  const double ls = std::log(sigma);
  double best = -kInf;
  std::vector<double> d;
  for (std::size_t i = 0; i < 1001; ++i) {
    f.derivatives(-1.0 + 2.0 * double(i) / 1000.0, cap, d);
    for (std::size_t k = 0; k <= cap; ++k)
      if (d[k] != 0.0) best = std::max(best, std::log(std::fabs(d[k])) - double(k) * ls - M.log_M(k));
  }
  return best == -kInf ? 0.0 : std::exp(best);
}

}  // namespace carleman

#include "carleman/cplane.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "carleman/error.hpp"
#include "carleman/numeric.hpp"

namespace carleman {

double EllipseDomain::a() const { return std::cosh(eps); }
double EllipseDomain::b() const { return std::sinh(eps); }

bool EllipseDomain::contains(cplx z) const {
  double u = z.real() / a(), w = z.imag() / b();
  return u * u + w * w < 1.0;
}

double elliptic_radius(cplx z) {
  double sigma = 0.5 * (std::abs(z - 1.0) + std::abs(z + 1.0));
  return std::acosh(std::max(1.0, sigma));
}

cplx dbar_elliptic_radius(cplx z) {
  double r1 = std::abs(z - 1.0), r2 = std::abs(z + 1.0);
  double sigma = 0.5 * (r1 + r2);
  double q = sigma * sigma - 1.0;
  if (!(q > 1e-300) || r1 == 0.0 || r2 == 0.0) return {0.0, 0.0};
  // dbar |z - a| = (z - a) / (2 |z - a|)
  cplx ds = 0.25 * ((z - 1.0) / r1 + (z + 1.0) / r2);
  return ds / std::sqrt(q);
}

double dist_to_interval(cplx z) {
  double x = z.real(), y = z.imag();
  if (std::fabs(x) <= 1.0) return std::fabs(y);
  return std::hypot(std::fabs(x) - 1.0, y);
}

Grid Grid::make(double X, double Ymin, std::size_t cells) {
  if (cells < 8 || cells % 2) throw Error(ErrorCode::GridTooCoarse, "grid needs an even number >= 8 of cells");
  Grid g;
  g.X = X;
  g.h = 2.0 * X / double(cells);
  g.nx = cells + 1;
  std::size_t half = static_cast<std::size_t>(std::ceil(Ymin / g.h - 1e-12));
  g.Y = double(half) * g.h;
  g.ny = 2 * half + 1;
  return g;
}

Grid Grid::for_ellipse(double eps0, std::size_t cells) {
  // margin so the closed ellipse keeps two clear rings of nodes inside the box
  double X = 1.04 * std::cosh(eps0);
  return make(X, std::sinh(eps0) + 0.04 * std::cosh(eps0), cells);
}

std::vector<std::size_t> ellipse_nodes(const Grid& g, double eps) {
  EllipseDomain D{eps};
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (D.contains(g.z(k))) out.push_back(k);
  return out;
}

std::vector<std::size_t> interval_nodes(const Grid& g) {
  std::vector<std::size_t> out;
  const std::size_t j = g.j_axis();
  for (std::size_t i = 0; i < g.nx; ++i)
    if (std::fabs(g.x(i)) <= 1.0 + 1e-12) out.push_back(g.index(i, j));
  return out;
}

double sup_norm(const GridFn& f, const std::vector<std::size_t>& nodes) {
  double m = 0.0;
  for (auto k : nodes) m = std::max(m, std::abs(f.v[k]));
  return m;
}

// ---------------------------------------------------------------- geometry

GeometryConstants geometry_constants(double epsmax) {
  if (!(epsmax > 0.0) || epsmax > 1.0)
    throw Error(ErrorCode::InvalidArgument, "geometry_constants: 0 < epsmax <= 1");
  const std::size_t n_eps = 64, n_theta = 2048, n_b = 100, n_x = 64;
  GeometryConstants out;
  std::vector<double> bgrid;
  for (std::size_t i = 0; i < n_b; ++i) bgrid.push_back(0.99 * double(i) / double(n_b - 1));

  std::vector<double> ratios;  // dist(x, boundary of eps/2 ellipse) / ((1-b) eps), worst over x
  for (std::size_t e = 1; e <= n_eps; ++e) {
    double eps = epsmax * double(e) / double(n_eps);
    double ca = std::cosh(eps), sb = std::sinh(eps);
    double ha = std::cosh(0.5 * eps), hb = std::sinh(0.5 * eps);
    std::vector<cplx> bnd(n_theta);
    for (std::size_t t = 0; t < n_theta; ++t) {
      double th = 2.0 * kPi * double(t) / double(n_theta);
      out.C = std::max(out.C, dist_to_interval({ca * std::cos(th), sb * std::sin(th)}) / eps);
      bnd[t] = {ha * std::cos(th), hb * std::sin(th)};
    }
    // distance table of real points to the eps/2 boundary (upper half suffices)
    auto dist = [&](double x) {
      double d = kInf;
      for (std::size_t t = 0; t <= n_theta / 2; ++t) d = std::min(d, std::abs(cplx{x, 0.0} - bnd[t]));
      return d;
    };
    for (double b : bgrid) {
      double worst = kInf;
      for (std::size_t i = 0; i < n_x; ++i) worst = std::min(worst, dist(b * double(i) / double(n_x - 1)));
      ratios.push_back(worst / ((1.0 - b) * eps));
    }
  }
  // largest E such that every disk fits: bisection on the inclusion predicate
  double lo = 0.0, hi = 2.0;
  auto fits = [&](double E) {
    return std::all_of(ratios.begin(), ratios.end(), [E](double r) { return E <= r; });
  };
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (fits(mid))
      lo = mid;
    else
      hi = mid;
  }
  out.E = lo;
  return out;
}

// ------------------------------------------------------------------ cutoff

namespace {

struct Step {
  double psi, dpsi;  // value and derivative in s
};

Step smooth_step(double s0, double s1, double s) {
  if (s <= s0) return {1.0, 0.0};
  if (s >= s1) return {0.0, 0.0};
  const double w = s1 - s0;
  double tau = (s - s0) / w;
  double A = std::exp(-1.0 / (1.0 - tau)), B = std::exp(-1.0 / tau);
  double S = A + B;
  double dtau = -A * B * (1.0 / ((1.0 - tau) * (1.0 - tau)) + 1.0 / (tau * tau)) / (S * S);
  return {A / S, dtau / w};
}

}  // namespace

double RadialStep::value(cplx z) const { return smooth_step(s0, s1, elliptic_radius(z)).psi; }

cplx RadialStep::dbar(cplx z) const {
  Step st = smooth_step(s0, s1, elliptic_radius(z));
  if (st.dpsi == 0.0) return {0.0, 0.0};
  return st.dpsi * dbar_elliptic_radius(z);
}

double cutoff_value(double eps, cplx z) { return RadialStep{0.5 * eps, 0.9 * eps}.value(z); }

cplx cutoff_dbar(double eps, cplx z) { return RadialStep{0.5 * eps, 0.9 * eps}.dbar(z); }

Cutoff cutoff_phi(const Grid& g, double eps) {
  double gap = std::sinh(eps) - std::sinh(0.5 * eps);
  if (gap < 8.0 * g.h)
    throw Error(ErrorCode::GridTooCoarse, "cutoff_phi: fewer than 8 cells between the eps/2 and eps ellipses");
  Cutoff out{GridFn(g), 0.0};
  for (std::size_t k = 0; k < g.size(); ++k) {
    cplx z = g.z(k);
    out.phi.v[k] = cutoff_value(eps, z);
    out.max_grad = std::max(out.max_grad, 2.0 * std::abs(cutoff_dbar(eps, z)));
  }
  return out;
}

// ------------------------------------------------------------------ dbar

namespace {

void partials(const GridFn& F, std::size_t i, std::size_t j, cplx& fx, cplx& fy) {
  const Grid& g = F.grid;
  const double h = g.h;
  if (i == 0)
    fx = (F.at(1, j) - F.at(0, j)) / h;
  else if (i + 1 == g.nx)
    fx = (F.at(i, j) - F.at(i - 1, j)) / h;
  else
    fx = (F.at(i + 1, j) - F.at(i - 1, j)) / (2.0 * h);
  if (j == 0)
    fy = (F.at(i, 1) - F.at(i, 0)) / h;
  else if (j + 1 == g.ny)
    fy = (F.at(i, j) - F.at(i, j - 1)) / h;
  else
    fy = (F.at(i, j + 1) - F.at(i, j - 1)) / (2.0 * h);
}

}  // namespace

GridFn dbar(const GridFn& F) {
  GridFn out(F.grid);
  const cplx I(0.0, 1.0);
  for (std::size_t j = 0; j < F.grid.ny; ++j)
    for (std::size_t i = 0; i < F.grid.nx; ++i) {
      cplx fx, fy;
      partials(F, i, j, fx, fy);
      out.at(i, j) = 0.5 * (fx + I * fy);
    }
  return out;
}

GridFn dz(const GridFn& F) {
  GridFn out(F.grid);
  const cplx I(0.0, 1.0);
  for (std::size_t j = 0; j < F.grid.ny; ++j)
    for (std::size_t i = 0; i < F.grid.nx; ++i) {
      cplx fx, fy;
      partials(F, i, j, fx, fy);
      out.at(i, j) = 0.5 * (fx - I * fy);
    }
  return out;
}

// ------------------------------------------------------------ Cauchy solver

namespace {

struct RowSupport {
  std::size_t lo = 1, hi = 0;  // inclusive; empty when lo > hi
};

}  // namespace

DbarSolution solve_dbar(const GridFn& w, const std::vector<std::size_t>& targets_in) {
  const Grid& g = w.grid;
  const std::size_t nx = g.nx, ny = g.ny;
  DbarSolution out;
  out.v = GridFn(g);

  // structure-of-arrays copy of the sources and per-row support
  std::vector<double> wr(g.size()), wi(g.size());
  std::vector<RowSupport> rows(ny);
  std::size_t nnz = 0;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      cplx c = w.at(i, j);
      wr[g.index(i, j)] = c.real();
      wi[g.index(i, j)] = c.imag();
      if (c == cplx{}) continue;
      if (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny)
        throw Error(ErrorCode::SupportTouchesEdge, "solve_dbar: source on the box edge");
      ++nnz;
      out.w_sup = std::max(out.w_sup, std::abs(c));
      RowSupport& r = rows[j];
      if (r.lo > r.hi) r.lo = r.hi = i;
      r.lo = std::min(r.lo, i);
      r.hi = std::max(r.hi, i);
    }
  out.support_area = double(nnz) * g.h * g.h;
  out.bound = 2.0 * out.w_sup * std::sqrt(out.support_area / kPi);
  if (nnz == 0) return out;

  // kernel 1/((di + i dj) h) for di in (-nx, nx), dj in (-ny, ny); zero at the origin
  const std::size_t kw = 2 * nx - 1;
  std::vector<double> kr(kw * (2 * ny - 1)), ki(kr.size());
  for (std::size_t b = 0; b < 2 * ny - 1; ++b) {
    double dj = double(b) - double(ny - 1);
    for (std::size_t a = 0; a < kw; ++a) {
      double di = double(a) - double(nx - 1);
      double r2 = di * di + dj * dj;
      kr[b * kw + a] = r2 == 0.0 ? 0.0 : di / (r2 * g.h);
      ki[b * kw + a] = r2 == 0.0 ? 0.0 : -dj / (r2 * g.h);
    }
  }

  std::vector<std::size_t> targets = targets_in;
  if (targets.empty()) {
    targets.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) targets[k] = k;
  }
  const double scale = -g.h * g.h / kPi;

  auto eval = [&](std::size_t t) {
    const std::size_t it = t % nx, jt = t / nx;
    Neumaier sr, si;
    for (std::size_t js = 0; js < ny; ++js) {
      const RowSupport& r = rows[js];
      if (r.lo > r.hi) continue;
      const double* Kr = &kr[(js + ny - 1 - jt) * kw + (nx - 1) - it];
      const double* Ki = &ki[(js + ny - 1 - jt) * kw + (nx - 1) - it];
      const double* Wr = &wr[js * nx];
      const double* Wi = &wi[js * nx];
      double ar[4] = {0, 0, 0, 0}, ai[4] = {0, 0, 0, 0};
      std::size_t i = r.lo;
      for (; i + 4 <= r.hi + 1; i += 4)
        for (int l = 0; l < 4; ++l) {
          ar[l] += Wr[i + l] * Kr[i + l] - Wi[i + l] * Ki[i + l];
          ai[l] += Wr[i + l] * Ki[i + l] + Wi[i + l] * Kr[i + l];
        }
      for (int l = 0; i <= r.hi; ++i, ++l) {
        ar[l] += Wr[i] * Kr[i] - Wi[i] * Ki[i];
        ai[l] += Wr[i] * Ki[i] + Wi[i] * Kr[i];
      }
      sr.add((ar[0] + ar[1]) + (ar[2] + ar[3]));
      si.add((ai[0] + ai[1]) + (ai[2] + ai[3]));
    }
    out.v.v[t] = scale * cplx(sr.value(), si.value());
  };

  const unsigned nw = worker_count(targets.size());
  if (nw <= 1) {
    for (auto t : targets) eval(t);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (targets.size() + nw - 1) / nw;
    for (unsigned p = 0; p < nw; ++p)
      pool.emplace_back([&, p] {
        std::size_t lo = p * chunk, hi = std::min(targets.size(), lo + chunk);
        for (std::size_t q = lo; q < hi; ++q) eval(targets[q]);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace carleman

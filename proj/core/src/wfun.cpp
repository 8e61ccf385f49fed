#include "carleman/wfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "carleman/error.hpp"

namespace carleman {

namespace {

constexpr double kUCap = 60.0;

double slope_rel_tol(double s) { return 1e-9 * (1.0 + std::fabs(s)); }

double parse_number(const std::string& s, const std::string& spec) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad number in '" + spec + "'");
  }
}

// golden-section maximization of a concave function on [a, b]
template <class F>
double golden_max(F&& g, double a, double b, double& arg) {
  const double r = 0.6180339887498949;
  double c = b - r * (b - a), d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 100 && (b - a) > 1e-13 * (1.0 + std::fabs(a)); ++it) {
    if (gc < gd) {
      a = c;
      c = d;
      gc = gd;
      d = a + r * (b - a);
      gd = g(d);
    } else {
      b = d;
      d = c;
      gd = gc;
      c = b - r * (b - a);
      gc = g(c);
    }
  }
  if (gc >= gd) {
    arg = c;
    return gc;
  }
  arg = d;
  return gd;
}

}  // namespace

WeightFunction WeightFunction::from_samples(std::vector<double> grid, std::vector<double> vals,
                                            std::string name) {
  if (grid.size() != vals.size()) throw Error(ErrorCode::InvalidArgument, "grid/vals size mismatch");
  if (grid.size() < 64) throw Error(ErrorCode::GridTooCoarse, "weight function needs >= 64 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0) || !std::isfinite(vals[i]) || vals[i] < 0)
      throw Error(ErrorCode::InvalidArgument, "grid must be positive and vals finite, nonnegative");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "grid must be strictly increasing");
    if (i > 0 && vals[i] < vals[i - 1] - 1e-12 * (1.0 + std::fabs(vals[i - 1]))) {
      std::ostringstream os;
      os << name << ": decreasing at t=" << grid[i];
      throw Error(ErrorCode::NotIncreasing, os.str());
    }
  }
  WeightFunction w;
  w.name_ = std::move(name);
  w.t_ = std::move(grid);
  w.w_ = std::move(vals);
  w.compute_certificates();
  return w;
}

WeightFunction WeightFunction::from_phi(PhiFn phi, std::string name, double tmax, std::size_t n) {
  std::vector<double> t = logspace(1.0, tmax, n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = phi(std::log(t[i]));
  WeightFunction w = from_samples(std::move(t), std::move(v), std::move(name));
  w.phi_fn_ = std::move(phi);
  return w;
}

double WeightFunction::phi(double u) const {
  if (phi_fn_) return phi_fn_(u);
  const std::size_t n = t_.size();
  double u0 = std::log(t_.front()), un = std::log(t_.back());
  if (u <= u0) return w_.front();
  if (u >= un) {
    double du = un - std::log(t_[n - 2]);
    double slope = (w_[n - 1] - w_[n - 2]) / du;
    return w_.back() + slope * (u - un);
  }
  auto it = std::upper_bound(t_.begin(), t_.end(), std::exp(u));
  std::size_t i = std::min<std::size_t>(n - 1, std::max<std::ptrdiff_t>(1, it - t_.begin()));
  double ua = std::log(t_[i - 1]), ub = std::log(t_[i]);
  double lam = (u - ua) / (ub - ua);
  return w_[i - 1] + lam * (w_[i] - w_[i - 1]);
}

double WeightFunction::operator()(double t) const {
  if (t <= t_.front()) return w_.front();
  return phi(std::log(t));
}

double WeightFunction::derivative_at_node(std::size_t i) const {
  const std::size_t n = t_.size();
  double d;
  if (i == 0)
    d = (w_[1] - w_[0]) / (t_[1] - t_[0]);
  else if (i + 1 == n)
    d = (w_[n - 1] - w_[n - 2]) / (t_[n - 1] - t_[n - 2]);
  else
    d = (w_[i + 1] - w_[i - 1]) / (t_[i + 1] - t_[i - 1]);
  return std::max(0.0, d);
}

WeightFunction WeightFunction::normalized() const {
  const double base = (*this)(1.0);
  std::vector<double> t, v;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    t.push_back(t_[i]);
    v.push_back(t_[i] <= 1.0 ? 0.0 : std::max(0.0, w_[i] - base));
  }
  WeightFunction out = from_samples(std::move(t), std::move(v), name_ + ".normalized");
  if (phi_fn_) {
    PhiFn g = phi_fn_;
    double g0 = g(0.0);
    out.phi_fn_ = [g, g0](double u) { return u <= 0 ? 0.0 : std::max(0.0, g(u) - g0); };
  }
  return out;
}

void WeightFunction::sample_phi(double U, std::size_t n, std::vector<double>& u,
                                std::vector<double>& p) const {
  u.resize(n);
  p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = U * double(i) / double(n - 1);
    p[i] = phi(u[i]);
  }
  u.back() = U;
}

void WeightFunction::compute_certificates() {
  const std::size_t n = t_.size();
  const std::size_t half = n / 2;
  auto interp = [&](double t) { return (*this)(t); };

  // (omega1)
  {
    double tail = 0.0, head = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (w_[i] <= 0 || 2.0 * t_[i] > t_.back()) continue;
      double r = interp(2.0 * t_[i]) / w_[i];
      if (i >= half)
        tail = std::max(tail, r);
      else
        head = std::max(head, r);
    }
    bool ok = tail <= 2.0 + 1e-9 || tail <= 1.05 * head;
    cert_.omega1 = {ok, tail, 1e-9, "sup omega(2t)/omega(t) over the grid tail"};
  }
  // (omega2), (omega3): value at the end plus tail trend
  {
    std::vector<double> lx, l2, l3;
    for (std::size_t i = half; i < n; ++i) {
      if (w_[i] <= 0 || t_[i] <= 1.0) continue;
      lx.push_back(std::log(t_[i]));
      l2.push_back(std::log(w_[i] / t_[i]));
      l3.push_back(std::log(std::log(t_[i]) / w_[i]));
    }
    double r2 = w_.back() / t_.back();
    double s2 = fit_line(lx, l2).slope;
    cert_.omega2 = {r2 <= 1e-2 && s2 < -kTrendTol, r2, kTrendTol, "omega(t)/t at grid end, decreasing"};
    double r3 = w_.back() > 0 ? std::log(t_.back()) / w_.back() : kInf;
    double s3 = lx.size() >= 2 ? fit_line(lx, l3).slope : 0.0;
    cert_.omega3 = {r3 <= 0.5 && s3 < 0.0, r3, 0.0, "log t/omega(t) at grid end, decreasing"};
  }
  // (omega4): phi convex in u = log t -> slopes nondecreasing
  {
    double worst = kInf;
    bool ok = true;
    double prev = 0.0;
    bool have = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (t_[i] < 1.0) continue;
      double s = (w_[i + 1] - w_[i]) / (std::log(t_[i + 1]) - std::log(t_[i]));
      if (have) {
        double inc = s - prev;
        worst = std::min(worst, inc);
        if (inc < -slope_rel_tol(prev)) ok = false;
      }
      prev = s;
      have = true;
    }
    cert_.omega4 = {ok, worst, 1e-9, "slope increments of phi(u) = omega(e^u)"};
  }
  // concavity in t: slopes nonincreasing
  {
    double worst = -kInf;
    bool ok = true;
    double prev = 0.0;
    bool have = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (t_[i] < 1.0) continue;
      double s = (w_[i + 1] - w_[i]) / (t_[i + 1] - t_[i]);
      if (have) {
        double inc = s - prev;
        worst = std::max(worst, inc);
        if (inc > slope_rel_tol(prev)) ok = false;
      }
      prev = s;
      have = true;
    }
    cert_.concave = {ok, worst, 1e-9, "slope increments of omega(t)"};
  }
}

WeightFunction mk_weight_function(const std::string& spec) {
  if (spec.rfind("power:", 0) == 0) {
    double a = parse_number(spec.substr(6), spec);
    if (!(a > 0)) throw Error(ErrorCode::ParseError, "power exponent must be positive");
    return WeightFunction::from_phi([a](double u) { return std::exp(a * u); }, spec);
  }
  if (spec == "log2") {
    return WeightFunction::from_phi(
        [](double u) {
          double l = u > 0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
          return l * l;
        },
        spec);
  }
  if (spec == "t-over-log") {
    return WeightFunction::from_phi(
        [](double u) {
          double t = std::exp(u);
          return t / std::log(std::exp(1.0) + t);
        },
        spec);
  }
  throw Error(ErrorCode::ParseError, "unknown weight function '" + spec + "'");
}

NqIntegral nq_integral(const WeightFunction& w) {
  NqIntegral out;
  const auto& t = w.grid();
  const auto& v = w.vals();
  Neumaier acc;
  double prev_u = 0.0, prev_f = w(1.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] <= 1.0) continue;
    double u = std::log(t[i]);
    double f = v[i] * std::exp(-u);
    acc.add(0.5 * (u - prev_u) * (f + prev_f * std::exp(-prev_u)));
    prev_u = u;
    prev_f = v[i];
  }
  out.value_partial = acc.value();

  const double T = t.back();
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= T / 10.0 && v[i] > 0) {
      lx.push_back(std::log(t[i]));
      ly.push_back(std::log(v[i]));
    }
  out.tail_slope = fit_line(lx, ly).slope;
  double p = out.tail_slope;
  out.log_exponent = (1.0 - p) * std::log(T / std::sqrt(10.0));
  out.convergent = p < 1.0 && out.log_exponent > 1.5;
  out.tail_estimate = out.convergent ? v.back() / (T * (1.0 - p)) : kInf;
  return out;
}

std::vector<double> discrete_legendre(std::span<const double> x, std::span<const double> f,
                                      std::span<const double> y,
                                      std::vector<std::size_t>* argmax) {
  const std::size_t n = x.size();
  if (n == 0 || f.size() != n) throw Error(ErrorCode::InvalidArgument, "discrete_legendre sizes");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x[i] > x[i - 1])) throw Error(ErrorCode::InvalidArgument, "nodes must be increasing");
  // lower convex hull
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      std::size_t a = hull[hull.size() - 2], b = hull.back();
      // remove b if it lies on or above segment a-i
      double lhs = (f[b] - f[a]) * (x[i] - x[a]);
      double rhs = (f[i] - f[a]) * (x[b] - x[a]);
      if (lhs >= rhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  std::vector<double> slopes(hull.size() > 1 ? hull.size() - 1 : 0);
  for (std::size_t e = 0; e + 1 < hull.size(); ++e)
    slopes[e] = (f[hull[e + 1]] - f[hull[e]]) / (x[hull[e + 1]] - x[hull[e]]);

  std::vector<double> out(y.size());
  if (argmax) argmax->assign(y.size(), 0);
  for (std::size_t q = 0; q < y.size(); ++q) {
    // first edge whose slope exceeds y: its left vertex maximizes
    std::size_t e = std::upper_bound(slopes.begin(), slopes.end(), y[q]) - slopes.begin();
    std::size_t v = hull[e];
    double best = y[q] * x[v] - f[v];
    // guard rounding at ties
    if (e > 0) {
      std::size_t vl = hull[e - 1];
      double alt = y[q] * x[vl] - f[vl];
      if (alt > best) {
        best = alt;
        v = vl;
      }
    }
    out[q] = best;
    if (argmax) (*argmax)[q] = v;
  }
  return out;
}

YoungConjugate young_conjugate(const WeightFunction& w, std::span<const double> sgrid) {
  YoungConjugate out;
  out.owner = w.name();
  out.omega3_ok = w.certificates().omega3.ok;
  out.s.assign(sgrid.begin(), sgrid.end());
  if (sgrid.empty()) return out;
  double smax = *std::max_element(sgrid.begin(), sgrid.end());

  const auto& t = w.grid();
  double U = std::max(1.0, std::log(t.back()));
  double du = (std::log(t.back()) - std::log(std::max(1.0, t.front()))) / double(t.size() - 1);
  if (!(du > 0)) du = 1e-2;
  du = std::min(du, 0.01);

  std::vector<double> u, p;
  std::vector<std::size_t> arg;
  std::vector<double> probe{smax};
  while (true) {
    std::size_t n = static_cast<std::size_t>(std::ceil(U / du)) + 1;
    w.sample_phi(U, n, u, p);
    discrete_legendre(u, p, probe, &arg);
    if (arg[0] + 1 < n) break;
    if (U >= kUCap) {
      std::ostringstream os;
      os << w.name() << ": maximizer for s=" << smax << " at u cap " << kUCap;
      throw Error(ErrorCode::MaximizerAtBoundary, os.str());
    }
    U = std::min(kUCap, 1.5 * U);
  }
  out.u_max_used = U;
  out.vals = discrete_legendre(u, p, sgrid, &arg);
  out.argmax_u.resize(sgrid.size());
  const auto& gen = w.generator();
  for (std::size_t q = 0; q < sgrid.size(); ++q) {
    std::size_t i = arg[q];
    out.argmax_u[q] = u[i];
    if (!gen) continue;
    double a = u[i > 0 ? i - 1 : 0], b = u[std::min(i + 1, u.size() - 1)];
    double s = sgrid[q], um = u[i];
    double best = golden_max([&](double uu) { return s * uu - gen(uu); }, a, b, um);
    if (best > out.vals[q]) {
      out.vals[q] = best;
      out.argmax_u[q] = um;
    }
  }
  return out;
}

std::vector<double> biconjugate(const YoungConjugate& c, std::span<const double> u) {
  // sort s for the hull
  std::vector<std::size_t> order(c.s.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return c.s[a] < c.s[b]; });
  std::vector<double> s, v;
  for (auto i : order) {
    if (!s.empty() && c.s[i] == s.back()) {
      v.back() = std::min(v.back(), c.vals[i]);
      continue;
    }
    s.push_back(c.s[i]);
    v.push_back(c.vals[i]);
  }
  return discrete_legendre(s, v, u);
}

AssociatedMatrix associated_matrix(const WeightFunction& w, std::span<const double> xlist,
                                   std::size_t K) {
  if (xlist.empty()) throw Error(ErrorCode::InvalidArgument, "empty xlist");
  WeightFunction wn = w.normalized();
  std::vector<double> xs(xlist.begin(), xlist.end());
  std::sort(xs.begin(), xs.end());
  std::vector<std::pair<double, WeightSequence>> members;
  std::vector<std::vector<double>> logs;
  for (double x : xs) {
    if (!(x > 0)) throw Error(ErrorCode::InvalidArgument, "matrix index must be positive");
    std::vector<double> s(K + 1);
    for (std::size_t k = 0; k <= K; ++k) s[k] = x * double(k);
    YoungConjugate c = young_conjugate(wn, s);
    std::vector<double> lm(K + 1);
    for (std::size_t k = 0; k <= K; ++k) lm[k] = c.vals[k] / x;
    lm[0] = 0.0;
    logs.push_back(lm);
    std::ostringstream label;
    label << "Omega[" << w.name() << "]^" << x;
    members.emplace_back(x, WeightSequence::make(std::move(lm), label.str()));
  }
  AssociatedMatrix out;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    for (std::size_t b = 0; b < xs.size(); ++b) {
      if (std::fabs(xs[b] - 2.0 * xs[a]) > 1e-12 * xs[b]) continue;
      ++out.fctmod.pairs;
      for (std::size_t j = 0; j <= K; ++j)
        for (std::size_t k = 0; j + k <= K; ++k) {
          double slack = logs[b][j] + logs[b][k] - logs[a][j + k];
          if (slack < out.fctmod.worst_slack) {
            out.fctmod.worst_slack = slack;
            out.fctmod.x = xs[a];
            out.fctmod.j = j;
            out.fctmod.k = k;
          }
        }
    }
  }
  if (out.fctmod.pairs > 0 && out.fctmod.worst_slack < -kLogTol) {
    std::ostringstream os;
    os << "x=" << out.fctmod.x << " j=" << out.fctmod.j << " k=" << out.fctmod.k
       << " slack=" << out.fctmod.worst_slack;
    throw Error(ErrorCode::FctmodViolation, os.str());
  }
  out.matrix = WeightMatrix(std::move(members));
  return out;
}

WeightFunction omega_from_sequence(const WeightSequence& M, std::size_t n) {
  const std::size_t K = M.K();
  double umax = M.log_mu(K);
  if (!(umax > 0.5)) throw Error(ErrorCode::InvalidArgument, "mu_K too small for omega_M");
  std::vector<double> logM = M.M().logv;
  auto phi = [logM](double u) {
    double best = 0.0;
    for (std::size_t k = 0; k < logM.size(); ++k) best = std::max(best, double(k) * u - logM[k]);
    return best;
  };
  return WeightFunction::from_phi(phi, "omega[" + M.label() + "]", std::exp(umax), n);
}

OmegaTilde omega_tilde(const WeightFunction& w, const WeightFunction& f, std::size_t Nmax) {
  if (!w.certificates().concave.ok) throw Error(ErrorCode::NotConcave, w.name() + " is not concave");
  NqIntegral nq = nq_integral(w);
  if (!nq.convergent)
    throw Error(ErrorCode::InvalidArgument, w.name() + " must be non-quasianalytic");

  const auto& t = w.grid();
  const auto& om = w.vals();
  const std::size_t n = t.size();
  if (f(t.back()) <= om.back())
    throw Error(ErrorCode::InvalidArgument, "omega = o(f) fails on the grid tail");

  std::vector<double> d(n), fv(n), itail(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = w.derivative_at_node(i);
    fv[i] = f(t[i]);
  }
  // int_{t_i}^inf omega/(1+t^2), trapezoid backwards plus the power-law tail
  itail[n - 1] = nq.tail_estimate;
  for (std::size_t i = n - 1; i-- > 0;) {
    double a = om[i] / (1 + t[i] * t[i]), b = om[i + 1] / (1 + t[i + 1] * t[i + 1]);
    itail[i] = itail[i + 1] + 0.5 * (t[i + 1] - t[i]) * (a + b);
  }

  OmegaTilde out;
  out.base = w.name();
  out.target = f.name();
  out.x = {0.0};
  out.y = {0.0};
  out.z = {0.0};
  out.omega_z = {0.0};
  std::vector<std::size_t> xi{0}, yi{0};

  auto inverse_omega = [&](double val) {
    if (val <= om.front()) return t.front();
    auto it = std::lower_bound(om.begin(), om.end(), val);
    if (it == om.end()) return t.back();
    std::size_t i = it - om.begin();
    if (i == 0) return t.front();
    double lam = (val - om[i - 1]) / (om[i] - om[i - 1]);
    return t[i - 1] + lam * (t[i] - t[i - 1]);
  };

  for (std::size_t nn = 2; nn <= Nmax; ++nn) {
    const double N = double(nn);
    std::size_t i0 = 0;
    // (px0)
    while (i0 < n && itail[i0] > 1.0 / (N * N * N)) ++i0;
    // (px1)
    double lim = 2.0 * out.y.back() + N;
    while (i0 < n && !(t[i0] > lim)) ++i0;
    // f >= n^2 omega beyond x_n
    std::size_t last_bad = 0;
    bool any_bad = false;
    for (std::size_t i = 0; i < n; ++i)
      if (fv[i] < N * N * om[i]) {
        last_bad = i;
        any_bad = true;
      }
    if (any_bad) i0 = std::max(i0, last_bad + 1);
    // (px3)
    double need = 0.0;
    for (std::size_t i = 1; i <= nn - 1; ++i)
      need = std::max(need, std::ldexp(1.0, int(nn - i)) * out.omega_z[i - 1]);
    while (i0 < n && om[i0] < need) ++i0;
    if (i0 >= n) {
      out.exhausted = true;
      break;
    }
    // y_n from omega'(y) = (n-1)/n omega'(x)
    double target = (N - 1.0) / N * d[i0];
    std::size_t j0 = i0 + 1;
    while (j0 < n && d[j0] > target) ++j0;
    if (j0 >= n) {
      out.exhausted = true;
      break;
    }
    double xn = t[i0], yn = t[j0];
    double Z = N * om[j0] - (N - 1.0) * (om[i0] + (yn - xn) * d[i0]);
    out.x.push_back(xn);
    out.y.push_back(yn);
    out.omega_z.push_back(Z);
    out.z.push_back(Z > 0 ? inverse_omega(Z) : 0.0);
    xi.push_back(i0);
    yi.push_back(j0);
    out.n_reached = nn;
  }

  // assemble on the nodes
  const std::size_t Nr = out.n_reached;
  std::vector<double> S(Nr + 1, 0.0);  // S[m] = sum_{i=2}^{m+1} omega(z_i)
  for (std::size_t m = 1; m <= Nr; ++m) S[m] = S[m - 1] + (m < out.omega_z.size() ? out.omega_z[m] : 0.0);
  std::vector<double> tv(n);
  std::vector<std::size_t> block(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    // block m: x_m <= t < x_{m+1}
    std::size_t m = 1;
    for (std::size_t q = 2; q <= Nr; ++q)
      if (i >= xi[q - 1]) m = q;
    block[i] = m;
    if (m == 1) {
      tv[i] = om[i];
    } else if (i < yi[m - 1]) {
      double M1 = double(m) - 1.0;
      tv[i] = M1 * (om[xi[m - 1]] + (t[i] - t[xi[m - 1]]) * d[xi[m - 1]]) - S[m - 2];
    } else {
      tv[i] = double(m) * om[i] - S[m - 1];
    }
  }
  out.worst_left = out.worst_right = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = block[i];
    if (m < 2) continue;
    out.worst_left = std::min(out.worst_left, (tv[i] - (double(m) - 2.0) * om[i]) / (1.0 + om[i]));
    out.worst_right = std::min(out.worst_right, (double(m) * om[i] - tv[i]) / (1.0 + om[i]));
  }
  out.sandwich_ok = out.worst_left >= -1e-9 && out.worst_right >= -1e-9;
  for (std::size_t m = 2; m <= Nr; ++m) {
    std::size_t i = xi[m - 1];
    out.ratio_to_base.push_back(om[i] > 0 ? tv[i] / om[i] : 0.0);
    out.ratio_to_target.push_back(fv[i] > 0 ? tv[i] / fv[i] : 0.0);
  }
  out.tilde = WeightFunction::from_samples(t, std::move(tv), "tilde[" + w.name() + "," + f.name() + "]");
  return out;
}

EllCompare ell_compare(const PositiveSequence& L, const WeightFunction& tilde) {
  const std::size_t K = L.K();
  std::vector<double> s(K + 1);
  for (std::size_t k = 0; k <= K; ++k) s[k] = double(k);
  YoungConjugate c = young_conjugate(tilde, s);
  EllCompare out;
  out.constant = -kInf;
  for (std::size_t k = 0; k <= K; ++k) {
    double ell = std::max(L[k], 0.0);
    double gap = ell - c.vals[k];
    if (gap > out.constant) {
      out.constant = gap;
      out.argmax = k;
    }
  }
  out.holds = std::isfinite(out.constant);
  return out;
}

}  // namespace carleman

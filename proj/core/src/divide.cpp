#include "carleman/divide.hpp"

#include <algorithm>
#include <cmath>

#include "carleman/construct.hpp"
#include "carleman/error.hpp"
#include "carleman/numeric.hpp"

namespace carleman {

std::size_t division_chain_length(int j) {
  if (j < 1) throw Error(ErrorCode::InvalidArgument, "division_chain_length: j >= 1");
  const double p = double(j) * double(j + 1);
  return std::size_t(std::ceil(std::log2(p) - 1e-12)) + 7;
}

double division_exponent(std::size_t k) { return std::ldexp(1.0, int(k) - 6); }

bool DivisionReport::ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.ok; });
}

namespace {

std::vector<std::size_t> ring_of(const Grid& g, const std::vector<std::size_t>& nodes) {
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

// nodes whose four neighbours are all in `nodes`
std::vector<std::size_t> interior_of(const Grid& g, const std::vector<std::size_t>& nodes) {
  std::vector<char> in(g.size(), 0);
  for (auto k : nodes) in[k] = 1;
  std::vector<std::size_t> out;
  for (auto k : nodes) {
    const std::size_t i = k % g.nx, j = k / g.nx;
    if (i == 0 || j == 0 || i + 1 == g.nx || j + 1 == g.ny) continue;
    if (in[k - 1] && in[k + 1] && in[k - g.nx] && in[k + g.nx]) out.push_back(k);
  }
  return out;
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

double envelope(const std::vector<double>& num, const std::vector<double>& den) {
  double c = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (num[i] == 0.0) continue;
    c = den[i] > 0.0 ? std::max(c, num[i] / den[i]) : kInf;
  }
  return c;
}

}  // namespace

DivisionReport joris_divide(const SmoothFn1D* f_true, const SmoothFn1D& g, const SmoothFn1D& h, int j,
                            const std::vector<WeightSequence>& chain, const DivideOptions& opt) {
  if (j < 1) throw Error(ErrorCode::InvalidArgument, "joris_divide: j >= 1");
  DivisionReport rep;
  rep.j = j;
  rep.k = division_chain_length(j);
  rep.s = division_exponent(rep.k);
  rep.has_truth = f_true != nullptr;
  rep.f_name = f_true ? f_true->name() : g.name() + "," + h.name();
  if (chain.size() != rep.k)
    throw Error(ErrorCode::InvalidArgument, "joris_divide: chain needs " + std::to_string(rep.k) + " sequences");
  for (const auto& c : chain) rep.chain.push_back(c.label());

  const double dj = double(j);
  for (std::size_t i = 0; i <= 1000; ++i) {
    double x = -1.0 + 2.0 * double(i) / 1000.0;
    double a = std::pow(std::fabs(g.value(x)), dj + 1.0), b = std::pow(std::fabs(h.value(x)), dj);
    rep.powers_residual = std::max(rep.powers_residual, std::fabs(a - b));
  }
  if (rep.powers_residual > opt.power_tol)
    throw Error(ErrorCode::InconsistentPowers, "joris_divide: |g|^(j+1) and |h|^j disagree on [-1,1]");

  std::array<WeightSequence, 3> fwd{chain[0], chain[1], chain[2]};
  auto fg = holo_forward(g, fwd, opt.forward);
  auto fh = holo_forward(h, fwd, opt.forward);
  const Grid& G = fg.grid;
  rep.grid_h = G.h;
  rep.K = std::max(fg.K, fh.K);
  rep.c1 = std::max(fg.c1, fh.c1);
  rep.c2 = std::max(fg.c2, fh.c2);
  double Kx = rep.K;
  for (auto k : fg.interval) {
    double x = G.z(k).real();
    Kx = std::max({Kx, std::fabs(g.value(x)), std::fabs(h.value(x))});
  }
  rep.c3 = (dj * std::pow(Kx, dj - 1.0) + (dj + 1.0) * std::pow(Kx, dj)) * rep.c1;

  const AssocFns m3(chain[2].m()), m4(chain[3].m());
  const double C34 = moderate_growth_constant(chain[2].m(), chain[3].m()).value;
  const auto& iv = fg.interval;
  auto f_ref = [&](double x) { return f_true ? f_true->value(x) : 0.0; };

  // pass 1: P = h^j - g^(j+1) and its three-lines shrink on every level
  const std::size_t nl = fg.levels.size();
  std::vector<DivisionLevel> lv(nl);
  for (std::size_t li = 0; li < nl; ++li) {
    const auto& Lg = fg.levels[li];
    const auto& Lh = fh.levels[li];
    const double eps = Lg.eps;
    DivisionLevel& D = lv[li];
    D.eps = eps;

    // delta from the three-lines shrink of P = h^j - g^(j+1)
    GridFn P(G);
    for (auto k : Lg.support) P.v[k] = ipow(Lh.f.v[k], j) - ipow(Lg.f.v[k], j + 1);
    ThreeLinesBounds tb;
    // Measured inputs; values below the rounding floor count as zero. The
    // certified bound is kept as a check; delta is the measured sup it bounds.
    const double noise = 64.0 * 2.220446049250313e-16 * std::pow(std::max(1.0, Kx), dj + 1.0);
    tb.L = sup_norm(P, Lg.nodes);
    tb.a2 = rep.c2;
    const double hm = m3.h(rep.c2 * eps).h;
    tb.a1 = hm > 0.0 ? std::max(0.0, sup_norm(P, iv) - noise) / hm : 0.0;
    tb.C = C34;
    tb.noise = noise;
    D.shrink = three_lines_shrink(P, eps, tb, m3, m4);
    D.P_sup = std::max(D.shrink.measured, noise);
  }
  // delta: smallest majorant of the measured sups that is nondecreasing in eps
  for (std::size_t li = nl; li-- > 0;) {
    lv[li].delta = li + 1 < nl ? std::max(lv[li].P_sup, lv[li + 1].delta) : lv[li].P_sup;
    lv[li].r = std::pow(lv[li].delta, 1.0 / (dj + 1.0));
    lv[li].admissible = lv[li].delta <= lv[li].r && lv[li].r <= 1.0;
  }

  // pass 2: u, the floor correction v and the eps/2 approximant
  std::vector<GridFn> finals;
  std::vector<std::vector<cplx>> u_iv;
  for (std::size_t li = 0; li < nl; ++li) {
    const auto& Lg = fg.levels[li];
    const auto& Lh = fh.levels[li];
    const double eps = Lg.eps;
    DivisionLevel D = lv[li];

    // u = phi conj(g) h / max(|g|, r)^2 on the support of the level
    const auto half = ellipse_nodes(G, 0.5 * eps);
    const auto half_ring = ring_of(G, half);
    GridFn u(G);
    for (auto k : Lg.support) {
      const cplx gv = Lg.f.v[k], hv = Lh.f.v[k];
      const double den = std::max(std::abs(gv), D.r);
      if (den == 0.0) continue;
      u.v[k] = cutoff_value(eps, G.z(k)) * std::conj(gv) * hv / (den * den);
    }
    // dbar u on Omega_{eps/2}: phi = 1 there, so only the floor region contributes
    GridFn w(G);
    const GridFn dg = dz(Lg.f);
    for (auto k : half) {
      if (!(std::abs(Lg.f.v[k]) < D.r)) continue;
      ++D.floor_nodes;
      w.v[k] = Lh.f.v[k] * std::conj(dg.v[k]) / (D.r * D.r);
    }
    GridFn v(G);
    if (D.floor_nodes > 0) v = solve_dbar(w, half_ring).v;
    GridFn fe(G);
    for (auto k : half_ring) fe.v[k] = u.v[k] - v.v[k];

    D.u_sup = sup_norm(u, half);
    D.u_bound = std::pow(2.0 * rep.K, 1.0 / dj);
    D.v_sup = sup_norm(v, half);
    for (auto k : iv) {
      const double x = G.z(k).real(), fx = f_ref(x);
      D.err_u = std::max(D.err_u, std::abs(fx - u.v[k]));
      const double e = std::abs(fx - fe.v[k]);
      if (e > D.err_final) {
        D.err_final = e;
        D.err_final_x = x;
      }
    }
    const GridFn db = dbar(fe);
    D.dbar_flat = sup_norm(db, interior_of(G, half));
    rep.levels.push_back(D);
    finals.push_back(std::move(fe));
    u_iv.emplace_back();
    for (auto k : iv) u_iv.back().push_back(u.v[k]);
  }

  // recovered values: h/g off the floor, finest approximant on it
  const double r_last = rep.levels.back().r;
  for (auto k : iv) {
    const double x = G.z(k).real();
    const double gv = g.value(x);
    rep.x.push_back(x);
    if (std::fabs(gv) > r_last && gv != 0.0) {
      rep.recovered.push_back(h.value(x) / gv);
      rep.floor_region.push_back(0);
    } else {
      rep.recovered.push_back(finals.back().v[k].real());
      rep.floor_region.push_back(1);
    }
  }
  if (!f_true) {
    // no truth: measure against the recovered values
    for (std::size_t li = 0; li < rep.levels.size(); ++li) {
      auto& D = rep.levels[li];
      D.err_u = D.err_final = 0.0;
      for (std::size_t q = 0; q < iv.size(); ++q) {
        D.err_u = std::max(D.err_u, std::abs(rep.recovered[q] - u_iv[li][q]));
        D.err_final = std::max(D.err_final, std::abs(rep.recovered[q] - finals[li].v[iv[q]]));
      }
    }
  }

  // envelope constants over the admissible levels
  std::vector<double> eu, ru, vs, ds, ef;
  for (const auto& D : rep.levels) {
    if (!D.admissible) continue;
    eu.push_back(D.err_u);
    ru.push_back(std::pow(D.r, 1.0 / dj));
    vs.push_back(D.v_sup);
    ds.push_back(std::pow(D.delta, 1.0 / rep.s));
    ef.push_back(D.err_final);
  }
  rep.c5 = envelope(eu, ru);
  rep.c6 = envelope(vs, ds);
  rep.c7 = envelope(ef, ds);
  for (auto& D : rep.levels) D.bound_final = rep.c7 * std::pow(D.delta, 1.0 / rep.s);

  // correlation on the longest decreasing run above the floor
  std::vector<double> lx, ly;
  {
    std::size_t best_a = 0, best_n = 0;
    const auto& L = rep.levels;
    for (std::size_t a = 0; a < L.size(); ++a) {
      if (!L[a].admissible || !(L[a].err_final > opt.floor) || !(L[a].delta > 0.0)) continue;
      std::size_t b = a + 1;
      while (b < L.size() && L[b].admissible && L[b].err_final > opt.floor && L[b].delta > 0.0 &&
             L[b].err_final < L[b - 1].err_final)
        ++b;
      if (b - a > best_n) {
        best_n = b - a;
        best_a = a;
      }
    }
    for (std::size_t q = best_a; q < best_a + best_n; ++q) {
      lx.push_back(std::log(L[q].delta) / rep.s);
      ly.push_back(std::log(L[q].err_final));
    }
    rep.at_floor = best_n < 3;
    rep.correlation = rep.at_floor ? 0.0 : pearson(lx, ly);
  }

  // verdicts
  auto add = [&](std::string name, bool ok, std::string note = {}) {
    rep.verdicts.push_back({std::move(name), ok, std::move(note)});
  };
  std::size_t n_adm = 0;
  bool uep = true, shrink = true, mono = true;
  const double tol = 1e-9;
  double prev_err = kInf;
  for (const auto& D : rep.levels) {
    if (!D.admissible) continue;
    ++n_adm;
    uep = uep && D.u_sup <= D.u_bound * (1 + tol);
    shrink = shrink && D.shrink.holds;
    mono = mono && D.err_final <= prev_err + opt.floor;
    prev_err = D.err_final;
  }
  add("admissible_levels", n_adm > 0,
      std::to_string(n_adm) + " of " + std::to_string(rep.levels.size()) + " levels with delta <= r <= 1");
  add("uepbound", uep);
  add("three_lines", shrink);
  add("final_nonincreasing", mono);
  if (rep.has_truth && !rep.at_floor)
    add("final_correlation", rep.correlation >= 0.9, "r = " + std::to_string(rep.correlation));
  return rep;
}

// --------------------------------------------------------------- chains

Chain chain_select(const WeightMatrix& mat, int j, RegularityMode mode, std::size_t target) {
  if (mat.size() == 0) throw Error(ErrorCode::InvalidArgument, "chain_select: empty matrix");
  if (target >= mat.size()) throw Error(ErrorCode::InvalidArgument, "chain_select: target out of range");
  const std::size_t k = division_chain_length(j);
  Chain out;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t idx;
    if (mode == RegularityMode::R)
      idx = std::min(i, mat.size() - 1);
    else
      idx = (k - 1 - i) > target ? 0 : target - (k - 1 - i);
    out.members.push_back(mat.at(idx));
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const auto& a = out.members[i];
    const auto& b = out.members[i + 1];
    ChainLink L;
    L.from = i;
    if (i == 0) {
      L.kind = "gamma";
      L.constant = gamma_link_constant(AssocFns(a.m()), AssocFns(b.m()));
      L.ok = L.constant > 0.0;
    } else {
      L.kind = "mg";
      auto mg = moderate_growth_constant(a, b);
      L.constant = mg.value;
      L.ok = std::isfinite(mg.value) && !mg.divergent;
    }
    if (!L.ok)
      throw Error(ErrorCode::CertificateMissing,
                  "chain_select: " + L.kind + " link " + std::to_string(i) + " has no verified constant");
    out.links.push_back(L);
  }
  return out;
}

std::vector<WitnessRun> quasi_driver(const SmoothFn1D* f_true, const SmoothFn1D& g, const SmoothFn1D& h,
                                     int j, const WeightSequence& M,
                                     const std::vector<WeightSequence>& witnesses,
                                     const DivideOptions& opt) {
  std::vector<WitnessRun> out;
  const std::size_t k = division_chain_length(j);
  for (const auto& N : witnesses) {
    WitnessRun run;
    run.witness = N.label();
    std::vector<WeightSequence> chain(k);
    chain[k - 1] = N;
    run.audits_ok = true;
    for (std::size_t i = k - 1; i > 0; --i) {
      auto np = nprime(chain[i], M, false);
      run.audits_ok = run.audits_ok && np.ok();
      chain[i - 1] = np.Nprime;
    }
    for (const auto& c : chain) run.chain.push_back(c.label());
    run.report = joris_divide(f_true, g, h, j, chain, opt);
    out.push_back(std::move(run));
  }
  return out;
}

}  // namespace carleman

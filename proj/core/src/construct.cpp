#include "carleman/construct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "carleman/error.hpp"
#include "carleman/numeric.hpp"

namespace carleman {

namespace {

Check make_check(bool ok, double witness, std::string note, double tol = kLogTol) {
  Check c;
  c.ok = ok;
  c.witness = witness;
  c.tol = tol;
  c.note = std::move(note);
  return c;
}

// Largest convex minorant of (k, a_k) evaluated at every integer k.
std::vector<double> convex_minorant(const std::vector<double>& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k < n; ++k) {
    while (hull.size() >= 2) {
      std::size_t i = hull[hull.size() - 2], j = hull.back();
      // drop j if it lies on or above the chord from i to k
      double lhs = (a[j] - a[i]) * double(k - i);
      double rhs = (a[k] - a[i]) * double(j - i);
      if (lhs >= rhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }
  std::vector<double> out(n);
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    std::size_t i = hull[h], j = hull[h + 1];
    for (std::size_t k = i; k <= j; ++k) {
      double w = double(k - i) / double(j - i);
      out[k] = (1.0 - w) * a[i] + w * a[j];
    }
    out[j] = a[j];
  }
  if (hull.size() == 1) out[0] = a[0];
  return out;
}

// max(0, max_{k>=1} (a_k - b_k)/k): the log of the smallest c >= 1 with a <= c^k b
double lift_exponent(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t k = 1; k < std::min(a.size(), b.size()); ++k)
    if (std::isfinite(a[k])) e = std::max(e, (a[k] - b[k]) / double(k));
  return e;
}

std::vector<double> with_geometric(std::vector<double> v, double log_c) {
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += double(k) * log_c;
  return v;
}

}  // namespace

LambdaMembership lambda_membership(const PositiveSequence& c, const WeightSequence& M) {
  const std::size_t K = std::min(c.K(), M.K());
  LambdaMembership out;
  std::vector<double> e(K + 1, -kInf);
  out.log_rho = -kInf;
  for (std::size_t k = 1; k <= K; ++k) {
    if (!std::isfinite(c[k])) continue;
    e[k] = (c[k] - M.log_M(k)) / double(k);
    out.log_rho = std::max(out.log_rho, e[k]);
  }
  out.rho = std::exp(out.log_rho);
  out.tail_slope = tail_slope_vs_log_k(e);
  out.member = std::isfinite(out.rho) && out.tail_slope <= kTrendTol;
  return out;
}

// ------------------------------------------------------------ reduction

bool ReductionAudit::ok() const { return first_failure().empty(); }

std::string ReductionAudit::first_failure() const {
  const std::pair<const char*, const Check*> all[] = {
      {"divergent", &divergent},   {"zero_sequence", &zero_sequence},
      {"decreasing", &decreasing}, {"nqthm", &nqthm},
      {"L_le_S", &L_le_S},         {"S_lhd_M", &S_lhd_M},
      {"s_log_convex", &s_log_convex}, {"moderate_growth", &moderate_growth},
      {"derivation", &derivation},
  };
  for (const auto& [name, c] : all)
    if (!c->ok) return name;
  if (nq_required && !nonquasianalytic.ok) return "nonquasianalytic";
  return {};
}

ReductionResult reduce_L_to_M(const PositiveSequence& L_in, const WeightSequence& M_in,
                              bool strict) {
  const std::size_t K = std::min(L_in.K(), M_in.K());
  PositiveSequence L = L_in.truncated(K);
  WeightSequence M = M_in.truncated(K);
  if (!M.is_log_convex()) throw Error(ErrorCode::NotLogConvex, M.label() + " is not log-convex");
  auto rel = relation(L, M.M(), kInf);
  if (rel.verdict != Relation::Lhd)
    throw Error(ErrorCode::NotLhd, L.label + " is not below " + M.label());

  ReductionResult out;
  std::vector<double> logbeta(K + 1, -kInf), logdelta(K + 1, 0.0), logmu(K + 1, 0.0);
  double run = -kInf;
  for (std::size_t p = K; p >= 1; --p) {
    if (std::isfinite(L[p])) run = std::max(run, (L[p] - M.log_M(p)) / double(p));
    logbeta[p] = run;
  }
  for (std::size_t k = 1; k <= K; ++k) logmu[k] = M.log_mu(k);

  for (std::size_t k = 1; k <= K; ++k) {
    double raw = std::min(-0.5 * logbeta[k], 0.5 * logmu[k]);
    if (k == 1) {
      logdelta[k] = raw;
      continue;
    }
    double d = std::max(logdelta[k - 1], raw);
    logdelta[k] = std::min(d, logdelta[k - 1] + logmu[k] - logmu[k - 1]);
  }
  out.beta = PositiveSequence{logbeta, "beta"};
  out.delta = PositiveSequence{logdelta, "delta"};

  std::vector<double> logN(K + 1, 0.0);
  double acc = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    acc += logdelta[k];
    logN[k] = M.log_M(k) - acc;
  }
  out.log_C = lift_exponent(L.logv, logN);
  logN = with_geometric(std::move(logN), out.log_C);
  out.N = WeightSequence::make(logN, "N");

  std::vector<double> n(K + 1);
  for (std::size_t k = 0; k <= K; ++k) n[k] = logN[k] - log_factorial(k);
  std::vector<double> s = convex_minorant(n);
  std::vector<double> logS(K + 1);
  for (std::size_t k = 0; k <= K; ++k) logS[k] = s[k] + log_factorial(k);
  out.log_C_S = lift_exponent(L.logv, logS);
  logS = with_geometric(std::move(logS), out.log_C_S);
  out.S = WeightSequence::make(logS, "S(" + L.label + "," + M.label() + ")");

  auto& a = out.audit;
  {
    double sl = tail_slope_vs_log_k(logdelta);
    a.divergent = make_check(sl > kTrendTol, sl, "tail slope of log delta vs log k", kTrendTol);
  }
  {
    std::vector<double> db(K + 1, -kInf);
    for (std::size_t k = 1; k <= K; ++k) db[k] = logdelta[k] + logbeta[k];
    bool all_inf = std::none_of(db.begin() + 1, db.end(), [](double v) { return std::isfinite(v); });
    double sl = all_inf ? -kInf : tail_slope_vs_log_k(db);
    a.zero_sequence = make_check(sl < -kTrendTol, sl, "tail slope of log(delta beta) vs log k", kTrendTol);
  }
  {
    double worst = kInf;
    for (std::size_t k = 2; k <= K; ++k)
      worst = std::min(worst, (logmu[k] - logdelta[k]) - (logmu[k - 1] - logdelta[k - 1]));
    a.decreasing = make_check(worst >= -kLogTol, worst, "min increment of log(mu/delta)");
  }
  {
    Neumaier lhs, base;
    for (std::size_t k = 1; k <= K; ++k) {
      lhs.add(std::exp(logdelta[k] - logmu[k]));
      base.add(std::exp(-logmu[k]));
    }
    double ratio = lhs.value() / (8.0 * std::exp(logdelta[1]) * base.value());
    a.nqthm = make_check(ratio <= 1.0, ratio, "sum delta/mu over 8 delta_1 sum 1/mu");
  }
  {
    double worst = -kInf;
    for (std::size_t k = 0; k <= K; ++k)
      if (std::isfinite(L[k])) worst = std::max(worst, L[k] - logS[k]);
    a.L_le_S = make_check(worst <= kLogTol, worst, "max log(L/S)");
  }
  {
    // trend only: the decay (S/M)^{1/k} -> 0 can be as slow as k^{-1/2}
    auto r = relation(out.S.M(), M.M(), kInf);
    a.S_lhd_M = make_check(r.verdict == Relation::Lhd, r.tail_slope, "tail slope of log(S/M)/k", kTrendTol);
  }
  a.s_log_convex = out.S.certificates().m_log_convex;
  {
    auto mg = moderate_growth_constant(out.S, out.S);
    a.moderate_growth = make_check(!mg.divergent, mg.log_value, "log mg(S,S), tail vs head");
  }
  {
    double head = -kInf, tail = -kInf;
    for (std::size_t k = 1; k <= K; ++k) {
      double e = logS[k] / double(k * k);
      if (k < K / 2)
        head = std::max(head, e);
      else
        tail = std::max(tail, e);
    }
    a.derivation = make_check(tail <= head + kLogTol, std::max(head, tail), "max log S_k / k^2, tail vs head");
  }
  {
    a.nq_required = !is_quasianalytic(M).quasianalytic;
    auto q = is_quasianalytic(out.S);
    a.nonquasianalytic = make_check(!q.quasianalytic, q.partial_sum, "partial sum of 1/sigma_k");
  }
  if (strict && !a.ok())
    throw Error(ErrorCode::AuditFailed, "reduction audit failed: " + a.first_failure());
  return out;
}

// -------------------------------------------------------- intersectability

Intersectability check_intersectable(const WeightSequence& M) {
  const std::size_t K = M.K();
  std::vector<double> logc(K + 1, 0.0);
  double sum = 0.0;
  for (std::size_t j = 1; j <= K; ++j) {
    double root = M.log_M(j) / double(j);
    if (!(root > 0.0)) {
      std::ostringstream os;
      os << M.label() << ": M_j^{1/j} <= 1 at j = " << j;
      throw Error(ErrorCode::FactorNonpositive, os.str());
    }
    sum += std::log1p(-std::exp(-root));
    logc[j] = M.log_M(j) + double(j) * sum;
  }
  Intersectability out;
  out.Mcheck = WeightSequence::make(logc, M.label() + "-check");
  const auto& m = out.Mcheck.m().logv;
  out.threshold = K;
  for (std::size_t k = K - 1; k >= 1; --k) {
    if (m[k - 1] + m[k + 1] - 2.0 * m[k] < -kLogTol) break;
    out.threshold = k;
  }
  out.passes = out.threshold <= K / 4;
  return out;
}

WeightSequence family_Q(int n, std::size_t K) {
  if (n < 0 || n > 4) throw Error(ErrorCode::InvalidArgument, "family_Q: n must be in 0..4");
  std::vector<double> v(K + 1, 0.0);
  const double e = std::exp(1.0);
  auto log_g = [n](double k) {
    double acc = std::log(k), l = k;
    for (int i = 0; i < n; ++i) {
      l = std::max(1.0, std::log(l));
      acc += std::log(l);
    }
    return acc;
  };
  for (std::size_t k = 1; k <= K; ++k) {
    double kd = double(k);
    if (n == 0)
      v[k] = kd * (std::log(kd) + std::log(std::log(kd + e)));
    else
      v[k] = kd * (k >= 3 ? log_g(kd) : log_g(3.0));
  }
  return WeightSequence::make(std::move(v), "q:" + std::to_string(n));
}

WeightSequence lift_to_majorant(const WeightSequence& N, const WeightSequence& M) {
  const std::size_t K = std::min(N.K(), M.K());
  auto Nt = N.truncated(K);
  double e = lift_exponent(M.truncated(K).M().logv, Nt.M().logv);
  if (e == 0.0) return Nt;
  std::ostringstream os;
  os << N.label() << "*" << std::exp(e) << "^k";
  return Nt.scaled(e, os.str());
}

// ------------------------------------------------------------------ N'

bool NPrimeResult::ok() const {
  return balanced.ok && log_convex.ok && majorizes.ok && nq_bound.ok && nonquasianalytic.ok &&
         std::isfinite(mg_with_N);
}

NPrimeResult nprime(const WeightSequence& N_in, const WeightSequence& M_in, bool strict) {
  const std::size_t K = std::min(N_in.K(), M_in.K());
  WeightSequence N = N_in.truncated(K), M = M_in.truncated(K);
  auto mg = moderate_growth_constant(M.m(), M.m());
  if (mg.divergent) throw Error(ErrorCode::HypothesisFailed, M.label() + " lacks moderate growth");
  NPrimeResult out;
  const double logC = mg.log_value;
  out.C = std::exp(logC);

  const auto& n = N.m().logv;
  std::vector<double> np(K + 1, 0.0), logNp(K + 1, 0.0);
  double worst_balance = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    double best = kInf;
    for (std::size_t j = 0; j <= k; ++j) best = std::min(best, n[j] + n[k - j]);
    double bal = n[k / 2] + n[k - k / 2];
    worst_balance = std::max(worst_balance, bal - best);
    np[k] = double(k) * logC + best;
    logNp[k] = np[k] + log_factorial(k);
  }
  out.balanced = make_check(worst_balance <= kLogTol, worst_balance, "balanced split excess");
  out.Nprime = WeightSequence::make(logNp, N.label() + "'");

  out.log_convex = out.Nprime.certificates().m_log_convex;
  {
    double worst = kInf;
    for (std::size_t k = 0; k <= K; ++k) worst = std::min(worst, logNp[k] - M.log_M(k));
    out.majorizes = make_check(worst >= -kLogTol, worst, "min log(N'/M)");
  }
  {
    double worst = kInf;
    const double lc = std::log(2.0 * out.C / std::exp(1.0));
    for (std::size_t j = 1; 2 * j <= K; ++j) {
      double lhs = logNp[2 * j] / double(2 * j);
      double rhs = lc + std::log(double(j)) + n[j] / double(j);
      worst = std::min(worst, lhs - rhs);
    }
    out.nq_bound = make_check(worst >= -kLogTol, worst, "min over j of the root bound slack");
  }
  {
    auto q = is_quasianalytic(out.Nprime);
    out.nonquasianalytic = make_check(!q.quasianalytic, q.exponent, "exponent of the fitted tail model");
  }
  {
    auto r = moderate_growth_constant(out.Nprime, N);
    out.mg_with_N = r.divergent ? kInf : r.log_value;
  }
  if (strict && !out.ok()) throw Error(ErrorCode::AuditFailed, "nprime audit failed for " + N.label());
  return out;
}

// ------------------------------------------------------ derivative bounds

PositiveSequence derivative_bound_sequence(const SmoothFn1D& g, const SmoothFn1D& h,
                                           std::size_t kmax, std::size_t npts) {
  if (kmax > g.dcap() || kmax > h.dcap())
    throw Error(ErrorCode::DerivativeCapExceeded, "derivative_bound_sequence: kmax above cap");
  if (npts < 2) throw Error(ErrorCode::InvalidArgument, "derivative_bound_sequence: npts < 2");
  std::vector<double> L(kmax + 1, 0.0), d;
  for (std::size_t i = 0; i < npts; ++i) {
    double x = -1.0 + 2.0 * double(i) / double(npts - 1);
    g.derivatives(x, kmax, d);
    for (std::size_t k = 0; k <= kmax; ++k) L[k] = std::max(L[k], std::fabs(d[k]));
    h.derivatives(x, kmax, d);
    for (std::size_t k = 0; k <= kmax; ++k) L[k] = std::max(L[k], std::fabs(d[k]));
  }
  for (auto& v : L) v = std::log(v);
  return PositiveSequence{std::move(L), "L(" + g.name() + "," + h.name() + ")"};
}

// ---------------------------------------------------------------- Frobenius

FrobeniusCover frobenius_cover(long p, long q) {
  if (p < 1 || q < 1) throw Error(ErrorCode::InvalidArgument, "frobenius_cover: p, q >= 1");
  if (std::gcd(p, q) != 1) throw Error(ErrorCode::NotCoprime, "frobenius_cover: gcd(p, q) != 1");
  auto represent = [p, q](long j, long& a1, long& a2) {
    for (a1 = 0; a1 * p <= j; ++a1) {
      if ((j - a1 * p) % q == 0) {
        a2 = (j - a1 * p) / q;
        return true;
      }
    }
    return false;
  };
  FrobeniusCover out;
  out.p = p;
  out.q = q;
  out.all_covered = true;
  for (long j = p * q; j <= 3 * p * q; ++j) {
    long a1 = 0, a2 = 0;
    if (represent(j, a1, a2))
      out.rows.push_back({j, a1, a2});
    else
      out.all_covered = false;
  }
  for (long j = p * q - 1; j >= 0; --j) {
    long a1, a2;
    if (!represent(j, a1, a2)) {
      out.largest_gap = j;
      break;
    }
  }
  return out;
}

}  // namespace carleman

#include "carleman/seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "carleman/error.hpp"

namespace carleman {

namespace {

constexpr double kTieTol = 1e-13;

struct Block {
  std::size_t lo, hi;  // inclusive
};

Block tail_block(std::size_t K) { return {std::max<std::size_t>(1, K / 2), K}; }

// Regression slope of y[k] vs log k over [lo, hi].
double slope_vs_log_k(const std::vector<double>& y, Block b) {
  std::vector<double> xs, ys;
  for (std::size_t k = b.lo; k <= b.hi; ++k) {
    if (!std::isfinite(y[k])) continue;
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(y[k]);
  }
  return fit_line(xs, ys).slope;
}

void require_finite(const std::vector<double>& v, const std::string& label) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k])) {
      std::ostringstream os;
      os << label << ": entry " << k << " is not finite";
      throw Error(ErrorCode::NonPositive, os.str());
    }
  }
}

Check root_increasing_check(const std::vector<double>& logv) {
  Check c;
  c.ok = true;
  c.witness = kInf;
  for (std::size_t k = 2; k < logv.size(); ++k) {
    double d = logv[k] / k - logv[k - 1] / (k - 1);
    c.witness = std::min(c.witness, d);
    if (!(d > 0)) c.ok = false;
  }
  c.note = "strict increase of root sequence over stored range (surrogate)";
  return c;
}

}  // namespace

double tail_slope_vs_log_k(std::span<const double> y) {
  if (y.size() < 3) return 0.0;
  return slope_vs_log_k(std::vector<double>(y.begin(), y.end()), tail_block(y.size() - 1));
}

PositiveSequence PositiveSequence::truncated(std::size_t K) const {
  PositiveSequence out;
  out.label = label;
  out.logv.assign(logv.begin(), logv.begin() + std::min(logv.size(), K + 1));
  return out;
}

std::pair<double, int> min_second_difference(std::span<const double> a, double tol) {
  double worst = kInf;
  int first = -1;
  for (std::size_t k = 1; k + 1 < a.size(); ++k) {
    double d = a[k - 1] + a[k + 1] - 2.0 * a[k];
    worst = std::min(worst, d);
    if (d < -tol && first < 0) first = static_cast<int>(k);
  }
  return {worst, first};
}

WeightSequence WeightSequence::make(std::vector<double> logM, std::string label) {
  if (logM.size() < 8) throw Error(ErrorCode::InvalidArgument, "weight sequence needs length >= 8");
  require_finite(logM, label);
  if (logM[0] != 0.0) throw Error(ErrorCode::InvalidArgument, "logM[0] must be 0");

  WeightSequence w;
  w.M_.logv = std::move(logM);
  w.M_.label = label;
  w.m_.label = label + ".m";
  w.m_.logv.resize(w.M_.logv.size());
  for (std::size_t k = 0; k < w.M_.logv.size(); ++k) w.m_.logv[k] = w.M_.logv[k] - log_factorial(k);

  auto [d, first] = min_second_difference(w.M_.logv);
  w.cert_.log_convex = {d >= -kLogTol, d, kLogTol, "min second difference of log M"};
  w.cert_.first_nonconvex = first;
  auto [dm, firstm] = min_second_difference(w.m_.logv);
  (void)firstm;
  w.cert_.m_log_convex = {dm >= -kLogTol, dm, kLogTol, "min second difference of log m"};
  w.cert_.root_increasing = root_increasing_check(w.M_.logv);
  w.cert_.m_root_increasing = root_increasing_check(w.m_.logv);
  w.kind_ = w.cert_.log_convex.ok ? SequenceKind::Weight : SequenceKind::General;
  return w;
}

WeightSequence WeightSequence::truncated(std::size_t K) const {
  return make(M_.truncated(K).logv, M_.label);
}

WeightSequence WeightSequence::scaled(double log_c, std::string label) const {
  std::vector<double> v = M_.logv;
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += log_c * k;
  return make(std::move(v), label.empty() ? M_.label : label);
}

// ---------------------------------------------------------------- relations

const char* to_string(Relation r) {
  switch (r) {
    case Relation::Preceq: return "Preceq";
    case Relation::Lhd: return "Lhd";
    case Relation::Neither: return "Neither";
  }
  return "?";
}

RelationResult relation(const PositiveSequence& M, const PositiveSequence& N,
                        double lhd_threshold) {
  if (M.K() != N.K()) throw Error(ErrorCode::InvalidArgument, "LengthMismatch: relation needs equal K");
  const std::size_t K = M.K();
  RelationResult out;
  out.r.assign(K + 1, 0.0);
  out.sup_r = -kInf;
  for (std::size_t k = 1; k <= K; ++k) {
    out.r[k] = (M[k] - N[k]) / static_cast<double>(k);
    if (out.r[k] > out.sup_r) {
      out.sup_r = out.r[k];
      out.argsup = k;
    }
  }
  out.r_last = out.r[K];
  out.tail_slope = slope_vs_log_k(out.r, tail_block(K));
  if (out.tail_slope < -kTrendTol && out.r_last < lhd_threshold)
    out.verdict = Relation::Lhd;
  else if (out.tail_slope <= kTrendTol)
    out.verdict = Relation::Preceq;
  else
    out.verdict = Relation::Neither;
  return out;
}

RelationResult relation(const WeightSequence& M, const WeightSequence& N, double lhd_threshold) {
  return relation(M.M(), N.M(), lhd_threshold);
}

MgResult moderate_growth_constant(const PositiveSequence& M, const PositiveSequence& N) {
  const std::size_t K = std::min(M.K(), N.K());
  MgResult out;
  out.log_value = out.log_head = out.log_tail = -kInf;
  const std::size_t split = K / 2;
  for (std::size_t s = 1; s <= K; ++s) {
    double best = -kInf;
    std::size_t bj = 0;
    for (std::size_t j = 0; j <= s; ++j) {
      double v = (M[s] - N[j] - N[s - j]) / static_cast<double>(s);
      if (v > best) {
        best = v;
        bj = j;
      }
    }
    if (best > out.log_value) {
      out.log_value = best;
      out.argj = bj;
      out.argk = s - bj;
    }
    if (s < split)
      out.log_head = std::max(out.log_head, best);
    else
      out.log_tail = std::max(out.log_tail, best);
  }
  out.value = std::exp(out.log_value);
  out.divergent = out.log_tail - out.log_head > kDivergenceTol;
  return out;
}

MgResult moderate_growth_constant(const WeightSequence& M, const WeightSequence& N) {
  return moderate_growth_constant(M.M(), N.M());
}

DerivationClosed is_derivation_closed(const WeightSequence& M) {
  const std::size_t K = M.K();
  DerivationClosed out;
  double best = -kInf;
  out.log_head = out.log_tail = -kInf;
  for (std::size_t k = 0; k + 1 <= K; ++k) {
    double e = (M.log_M(k + 1) - M.log_M(k)) / static_cast<double>(k + 1);
    best = std::max(best, e);
    if (k < K / 2)
      out.log_head = std::max(out.log_head, e);
    else
      out.log_tail = std::max(out.log_tail, e);
  }
  out.C = std::exp(best);
  double cp = -kInf;
  for (std::size_t k = 1; k <= K; ++k) cp = std::max(cp, M.log_M(k) / double(k * k));
  out.C_prime = std::exp(cp);
  out.ok = out.log_tail - out.log_head <= kDivergenceTol;
  return out;
}

const char* to_string(GrowthModel g) {
  switch (g) {
    case GrowthModel::Power: return "power";
    case GrowthModel::Log: return "log";
    case GrowthModel::LogLog: return "loglog";
  }
  return "?";
}

QuasianalyticResult is_quasianalytic(const WeightSequence& M) {
  const std::size_t K = M.K();
  QuasianalyticResult out;
  Neumaier acc;
  std::vector<double> logmu(K + 1, 0.0);
  bool increasing = true;
  for (std::size_t k = 1; k <= K; ++k) {
    logmu[k] = M.log_mu(k);
    acc.add(std::exp(-logmu[k]));
    if (k > 1 && logmu[k] < logmu[k - 1] - kLogTol) increasing = false;
  }
  out.partial_sum = acc.value();
  out.tail_available = increasing;

  out.slope = slope_vs_log_k(logmu, tail_block(K));
  // For log-convex M, sum 1/mu_k and sum M_k^{-1/k} diverge together; the
  // roots carry no (1 + 1/log k) corrections, so the models are fitted to
  // log M_k / k - (fixed part) = a + e * x with x = log k, log log k, log log log k.
  Block b = tail_block(K);
  double best_rss = kInf;
  for (int m = 0; m < 3; ++m) {
    std::vector<double> xs, ys;
    for (std::size_t k = std::max<std::size_t>(b.lo, 16); k <= b.hi; ++k) {
      double l1 = std::log(double(k)), l2 = std::log(l1), l3 = std::log(l2);
      double x = m == 0 ? l1 : (m == 1 ? l2 : l3);
      double fixed = m == 0 ? 0.0 : (m == 1 ? l1 : l1 + l2);
      xs.push_back(x);
      ys.push_back(M.log_M(k) / double(k) - fixed);
    }
    if (xs.size() < 3) continue;
    LineFit f = fit_line(xs, ys);
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double r = ys[i] - f.intercept - f.slope * xs[i];
      rss += r * r;
    }
    if (rss < best_rss) {
      best_rss = rss;
      out.model = static_cast<GrowthModel>(m);
      out.exponent = f.slope;
    }
  }
  bool convergent = out.exponent > 1.0 + kTrendTol;
  out.quasianalytic = !convergent;
  if (convergent && increasing) {
    // integral of 1/(c k L(k)^e) beyond K with L the model's last log factor
    double lk = std::log(double(K)), fac = double(K);
    if (out.model == GrowthModel::Log) fac *= lk;
    if (out.model == GrowthModel::LogLog) fac *= lk * std::log(lk);
    out.tail_bound = fac / (std::exp(logmu[K]) * (out.exponent - 1.0));
  } else {
    out.tail_bound = kInf;
  }
  return out;
}

// ------------------------------------------------------- associated functions

AssocFns::AssocFns(PositiveSequence seq) : seq_(std::move(seq)) {
  if (seq_.logv.size() < 2) throw Error(ErrorCode::InvalidArgument, "AssocFns needs K >= 1");
  for (std::size_t k = 3; k < seq_.logv.size(); ++k) {
    double r1 = seq_.logv[k] - seq_.logv[k - 1];
    double r0 = seq_.logv[k - 1] - seq_.logv[k - 2];
    if (r1 < r0 - kLogTol) {
      ratio_monotone_ = false;
      break;
    }
  }
}

double AssocFns::log_h(double log_t) const {
  double best = kInf;
  for (std::size_t k = 0; k < seq_.logv.size(); ++k) {
    double v = seq_.logv[k] + static_cast<double>(k) * log_t;
    if (v < best) best = v;
  }
  return best;
}

double AssocFns::log_h(double log_t, std::size_t kmax) const {
  double best = kInf;
  const std::size_t n = std::min(seq_.logv.size(), kmax + 1);
  for (std::size_t k = 0; k < n; ++k) {
    double v = seq_.logv[k] + static_cast<double>(k) * log_t;
    if (v < best) best = v;
  }
  return best;
}

HValue AssocFns::h(double t) const {
  HValue out;
  if (t < 0) throw Error(ErrorCode::InvalidArgument, "h_eval needs t >= 0");
  if (t == 0) {
    out.h = 0.0;
    out.log_h = -kInf;
    return out;
  }
  const double lt = std::log(t);
  double best = kInf;
  for (std::size_t k = 0; k < seq_.logv.size(); ++k) {
    double v = seq_.logv[k] + static_cast<double>(k) * lt;
    if (v < best) best = v;
  }
  // smallest minimizer; values within rounding of the minimum count as ties
  const double tie = kTieTol * (1.0 + std::fabs(best));
  for (std::size_t k = 0; k < seq_.logv.size(); ++k) {
    if (seq_.logv[k] + static_cast<double>(k) * lt <= best + tie) {
      out.kstar = k;
      break;
    }
  }
  out.log_h = best;
  out.h = std::exp(best);
  out.saturated = out.kstar == seq_.K();
  return out;
}

GammaValue AssocFns::gamma_lower(double t) const {
  GammaValue out;
  out.ratio_monotone = ratio_monotone_;
  const std::size_t K = seq_.K();
  if (t <= 0) {
    out.k = K;
    out.saturated = true;
    return out;
  }
  const double lt = std::log(t);
  for (std::size_t k = 0; k < K; ++k) {
    double inc = seq_.logv[k + 1] - seq_.logv[k] + lt;
    if (inc >= -kTieTol * (1.0 + std::fabs(seq_.logv[k]) + std::fabs(lt) * double(k))) {
      out.k = k;
      return out;
    }
  }
  out.k = K;
  out.saturated = true;
  return out;
}

double AssocFns::one_threshold() const {
  double worst = -kInf;
  for (std::size_t k = 1; k < seq_.logv.size(); ++k)
    worst = std::max(worst, -seq_.logv[k] / static_cast<double>(k));
  return std::exp(worst);
}

HInequalityReport verify_h_inequalities(const AssocFns& m, const AssocFns& n, double C,
                                        std::span<const double> tgrid, int jmax, double tol) {
  HInequalityReport rep;
  const double logC = std::log(C);
  const PositiveSequence& nseq = n.sequence();
  const std::size_t K = m.K();
  for (double t : tgrid) {
    if (!(t > 0)) continue;
    ++rep.points;
    const double lt = std::log(t);
    const double lhs = m.log_h(lt);
    for (int j = 0; j <= jmax && static_cast<std::size_t>(j) <= std::min(nseq.K(), K); ++j) {
      double rhs = j * logC + nseq[j] + j * lt + n.log_h(logC + lt, K - j);
      double slack = rhs - lhs;
      if (slack < rep.worst_slack_mg) {
        rep.worst_slack_mg = slack;
        rep.worst_t_mg = t;
        rep.worst_j = j;
      }
    }
    double rhs_sq = 2.0 * n.log_h(1.0 + logC + lt - std::log(2.0), K / 2);
    double slack_sq = rhs_sq - lhs;
    if (slack_sq < rep.worst_slack_sq) {
      rep.worst_slack_sq = slack_sq;
      rep.worst_t_sq = t;
    }
  }
  if (rep.worst_slack_mg < -tol) {
    std::ostringstream os;
    os << "h_m(t) <= C^j n_j t^j h_n(Ct) fails at t=" << rep.worst_t_mg << " j=" << rep.worst_j
       << " slack=" << rep.worst_slack_mg;
    throw Error(ErrorCode::ViolationFound, os.str());
  }
  if (rep.worst_slack_sq < -tol) {
    std::ostringstream os;
    os << "h_m(t) <= h_n(eCt/2)^2 fails at t=" << rep.worst_t_sq << " slack=" << rep.worst_slack_sq;
    throw Error(ErrorCode::ViolationFound, os.str());
  }
  return rep;
}

std::vector<double> m_circle_all(const PositiveSequence& m) {
  const std::size_t K = m.K();
  // B[j][k]: best product of j parts summing to k
  std::vector<std::vector<double>> B(K + 1, std::vector<double>(K + 1, -kInf));
  B[0][0] = 0.0;
  for (std::size_t j = 1; j <= K; ++j) {
    for (std::size_t k = j; k <= K; ++k) {
      double best = -kInf;
      for (std::size_t a = 1; a + (j - 1) <= k; ++a) {
        double prev = B[j - 1][k - a];
        if (prev == -kInf) continue;
        best = std::max(best, m[a] + prev);
      }
      B[j][k] = best;
    }
  }
  std::vector<double> out(K + 1, 0.0);
  for (std::size_t k = 1; k <= K; ++k) {
    double best = -kInf;
    for (std::size_t j = 1; j <= k; ++j) best = std::max(best, m[j] + B[j][k]);
    out[k] = best;
  }
  return out;
}

double m_circle(const PositiveSequence& m, std::size_t k) {
  if (k < 1 || k > m.K()) throw Error(ErrorCode::InvalidArgument, "m_circle needs 1 <= k <= K");
  return m_circle_all(m.truncated(k))[k];
}

namespace {

// Thresholds t where Γ̲ drops: Γ̲(t) <= k iff t >= exp(-(logv[k+1]-logv[k])).
double gamma_threshold(const PositiveSequence& s, std::size_t k) {
  return std::exp(-(s[k + 1] - s[k]));
}

}  // namespace

double gamma_link_constant(const AssocFns& a, const AssocFns& b, double* t_lo_out,
                           double* t_hi_out) {
  const std::size_t K = std::min(a.K(), b.K());
  const std::size_t half = K / 2;
  const PositiveSequence& sa = a.sequence();
  const PositiveSequence& sb = b.sequence();
  double t_hi = 2.0 * std::max(gamma_threshold(sa, 0), gamma_threshold(sb, 0));
  double t_lo = std::max(gamma_threshold(sa, half), gamma_threshold(sb, half));
  // For non-monotone ratios the first crossing can still exceed K/2: shrink.
  while (a.gamma_lower(t_lo).k > half && t_lo < t_hi) t_lo *= 1.05;
  if (!(t_lo < t_hi)) throw Error(ErrorCode::TruncationSaturated, "empty Gamma grid");
  if (t_lo_out) *t_lo_out = t_lo;
  if (t_hi_out) *t_hi_out = t_hi;
  std::vector<double> ts = logspace(t_lo, t_hi, 200);
  std::vector<std::size_t> lower(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) lower[i] = a.gamma_lower(ts[i]).k;
  for (int e = 0; e <= 20; ++e) {
    double C = std::ldexp(1.0, e);
    bool ok = true;
    for (std::size_t i = 0; i < ts.size() && ok; ++i) {
      if (b.gamma_upper(C * ts[i]) > lower[i]) ok = false;
    }
    if (ok) return C;
  }
  return 0.0;
}

RegularityCertificate regularity_certificate(const WeightSequence& M, const WeightSequence& N,
                                             RegularityMode mode) {
  const WeightSequence& A = (mode == RegularityMode::R) ? M : N;  // Γ̲ side, larger index
  const WeightSequence& Bs = (mode == RegularityMode::R) ? N : M;  // Γ̄ side
  RegularityCertificate out;
  AssocFns fa = AssocFns::of_m(A), fb = AssocFns::of_m(Bs);
  out.C_gamma = gamma_link_constant(fa, fb, &out.t_lo, &out.t_hi);

  // pair condition A_{j+1} <= C^{j+1} B_j
  const std::size_t K = std::min(A.K(), Bs.K());
  double best = -kInf, head = -kInf, tail = -kInf;
  for (std::size_t j = 0; j + 1 <= K; ++j) {
    double e = (A.log_M(j + 1) - Bs.log_M(j)) / double(j + 1);
    best = std::max(best, e);
    if (j < K / 2)
      head = std::max(head, e);
    else
      tail = std::max(tail, e);
  }
  out.C_pair = std::exp(best);
  out.pair_bounded = tail - head <= kDivergenceTol;
  out.ok = out.C_gamma > 0 && out.pair_bounded;
  out.C = out.ok ? std::max(out.C_gamma, out.C_pair) : 0.0;
  return out;
}

WeightMatrix::WeightMatrix(std::vector<std::pair<double, WeightSequence>> members)
    : members_(std::move(members)) {
  std::stable_sort(members_.begin(), members_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < members_.size(); ++i) {
    const auto& lo = members_[i - 1].second;
    const auto& hi = members_[i].second;
    if (lo.K() != hi.K()) throw Error(ErrorCode::InvalidArgument, "matrix members need equal K");
    for (std::size_t k = 0; k <= lo.K(); ++k) {
      if (lo.log_M(k) > hi.log_M(k) + kLogTol) {
        std::ostringstream os;
        os << "members " << i - 1 << " and " << i << " out of order at k=" << k;
        throw Error(ErrorCode::NotOrdered, os.str());
      }
    }
  }
}

}  // namespace carleman

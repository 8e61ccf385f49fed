#pragma once

// Weight sequences in log domain, their associated functions and relations.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "carleman/numeric.hpp"

namespace carleman {

inline constexpr double kLogTol = 1e-9;

// Tail block used by every finite-truncation trend verdict: k in [K/2, K].
inline constexpr double kTrendTol = 0.05;
inline constexpr double kDivergenceTol = 0.1;

// Regression slope of y[k] against log k over the tail block of y (K = size-1),
// skipping non-finite entries.
double tail_slope_vs_log_k(std::span<const double> y);

struct PositiveSequence {
  std::vector<double> logv;  // logv[k] = log V_k; -inf encodes an exact zero
  std::string label;

  std::size_t K() const { return logv.empty() ? 0 : logv.size() - 1; }
  double operator[](std::size_t k) const { return logv[k]; }

  PositiveSequence truncated(std::size_t K) const;
};

struct Check {
  bool ok = false;
  double witness = 0.0;
  double tol = kLogTol;
  std::string note;
};

struct SequenceCertificates {
  Check log_convex;        // witness: most negative second difference
  Check m_log_convex;      // same for m_k = M_k/k!
  Check root_increasing;   // M_k^{1/k} strictly increasing (surrogate for -> inf)
  Check m_root_increasing; // m_k^{1/k} strictly increasing
  int first_nonconvex = -1;
};

enum class SequenceKind { Weight, General };

class WeightSequence {
 public:
  WeightSequence() = default;

  // Validates, computes all views and certificates. Throws NonPositive for
  // non-finite entries and InvalidArgument if logM[0] != 0 or size < 8.
  static WeightSequence make(std::vector<double> logM, std::string label);

  const PositiveSequence& M() const { return M_; }
  const PositiveSequence& m() const { return m_; }
  std::size_t K() const { return M_.K(); }
  const std::string& label() const { return M_.label; }

  double log_M(std::size_t k) const { return M_.logv[k]; }
  double log_m(std::size_t k) const { return m_.logv[k]; }
  // log mu_k = log M_k - log M_{k-1}, k >= 1
  double log_mu(std::size_t k) const { return M_.logv[k] - M_.logv[k - 1]; }

  const SequenceCertificates& certificates() const { return cert_; }
  SequenceKind kind() const { return kind_; }
  bool is_log_convex() const { return cert_.log_convex.ok; }

  WeightSequence truncated(std::size_t K) const;
  // M_k * c^k, c = exp(log_c)
  WeightSequence scaled(double log_c, std::string label = {}) const;

 private:
  PositiveSequence M_;
  PositiveSequence m_;
  SequenceCertificates cert_;
  SequenceKind kind_ = SequenceKind::General;
};

// log-convexity: a[k-1] + a[k+1] - 2 a[k] >= -tol. Returns the minimum
// second difference and the first index where it fails (-1 if none).
std::pair<double, int> min_second_difference(std::span<const double> a, double tol = kLogTol);

// ---------------------------------------------------------------- relations

enum class Relation { Preceq, Lhd, Neither };
const char* to_string(Relation r);

struct RelationResult {
  Relation verdict = Relation::Neither;
  double sup_r = 0.0;       // sup_k r_k, r_k = (log M_k - log N_k)/k
  std::size_t argsup = 0;
  double tail_slope = 0.0;  // slope of r_k vs log k over the tail block
  double r_last = 0.0;
  std::vector<double> r;    // r[0] unused (0)
};

RelationResult relation(const PositiveSequence& M, const PositiveSequence& N,
                        double lhd_threshold = -2.302585092994046);
RelationResult relation(const WeightSequence& M, const WeightSequence& N,
                        double lhd_threshold = -2.302585092994046);

struct MgResult {
  double log_value = 0.0;  // log mg
  double value = 1.0;
  std::size_t argj = 0, argk = 0;
  double log_head = 0.0;   // sup restricted to j+k < K/2
  double log_tail = 0.0;   // sup restricted to j+k >= K/2
  bool divergent = false;
};

MgResult moderate_growth_constant(const PositiveSequence& M, const PositiveSequence& N);
MgResult moderate_growth_constant(const WeightSequence& M, const WeightSequence& N);

struct DerivationClosed {
  bool ok = false;
  double C = 1.0;        // exp(max_k (log M_{k+1} - log M_k)/(k+1))
  double C_prime = 1.0;  // exp(max_k log M_k / k^2)
  double log_head = 0.0, log_tail = 0.0;
};

DerivationClosed is_derivation_closed(const WeightSequence& M);

// Tail growth families for mu_k, compared by least squares over [K/2, K]:
// Power: c k^e; Log: c k (log k)^e; LogLog: c k log k (log log k)^e.
enum class GrowthModel { Power, Log, LogLog };
const char* to_string(GrowthModel g);

struct QuasianalyticResult {
  bool quasianalytic = true;
  double partial_sum = 0.0;       // sum_{k<=K} 1/mu_k
  double tail_bound = 0.0;        // +inf when the extrapolated series diverges
  bool tail_available = false;    // false when mu is not increasing
  double slope = 0.0;             // slope of log mu_k vs log k over the tail
  GrowthModel model = GrowthModel::Power;
  double exponent = 0.0;          // exponent of the best model; > 1 + kTrendTol means convergent
};

QuasianalyticResult is_quasianalytic(const WeightSequence& M);

// ------------------------------------------------------- associated functions

struct HValue {
  double h = 0.0;
  double log_h = 0.0;
  std::size_t kstar = 0;
  bool saturated = false;  // minimizer at k = K
};

struct GammaValue {
  std::size_t k = 0;
  bool ratio_monotone = true;  // false: ratio not increasing beyond index 2
  bool saturated = false;      // no index up to K-1 qualifies
};

// h_m(t) = min_k m_k t^k and the counting functions, over a fixed sequence
// (usually the m-view). No cache: evaluation is a linear scan.
class AssocFns {
 public:
  AssocFns() = default;
  explicit AssocFns(PositiveSequence seq);
  static AssocFns of_m(const WeightSequence& M) { return AssocFns(M.m()); }
  static AssocFns of_M(const WeightSequence& M) { return AssocFns(M.M()); }

  const PositiveSequence& sequence() const { return seq_; }
  std::size_t K() const { return seq_.K(); }

  HValue h(double t) const;
  double log_h(double log_t) const;
  // min over k <= kmax only
  double log_h(double log_t, std::size_t kmax) const;
  GammaValue gamma_lower(double t) const;
  std::size_t gamma_upper(double t) const { return h(t).kstar; }
  // h = 1 for t >= this value
  double one_threshold() const;

 private:
  PositiveSequence seq_;
  bool ratio_monotone_ = true;
};

inline HValue h_eval(const AssocFns& A, double t) { return A.h(t); }
inline GammaValue gamma_lower(const AssocFns& A, double t) { return A.gamma_lower(t); }

struct HInequalityReport {
  double worst_slack_mg = kInf;
  double worst_t_mg = 0.0;
  int worst_j = 0;
  double worst_slack_sq = kInf;
  double worst_t_sq = 0.0;
  std::size_t points = 0;
};

// Checks h_m(t) <= C^j n_j t^j h_n(Ct) (j <= jmax) and h_m(t) <= h_n(eCt/2)^2.
// With K = m.K(), the right-hand h_n runs over k <= K - j and k <= K/2
// respectively, so that each term it compares against is one m_{k+j} or m_{2k}
// the left side actually saw. Throws ViolationFound if any slack < -tol.
HInequalityReport verify_h_inequalities(const AssocFns& m, const AssocFns& n, double C,
                                        std::span<const double> tgrid, int jmax = 16,
                                        double tol = kLogTol);

// m°_k for all k <= K (index 0 is log 1 = 0), in log domain.
std::vector<double> m_circle_all(const PositiveSequence& m);
double m_circle(const PositiveSequence& m, std::size_t k);

enum class RegularityMode { R, B };

struct RegularityCertificate {
  bool ok = false;
  double C = 0.0;          // max of the Gamma constant and the pair constant
  double C_gamma = 0.0;    // smallest 2^i making the Gamma inequality hold (0 if none)
  double C_pair = 0.0;     // exp(max_j (log A_{j+1} - log B_j)/(j+1))
  bool pair_bounded = false;
  double t_lo = 0.0, t_hi = 0.0;
};

// R: Γ̄_n(Ct) <= Γ̲_m(t) and M_{j+1} <= C^{j+1} N_j.
// B: Γ̄_m(Ct) <= Γ̲_n(t) and N_{j+1} <= C^{j+1} M_j.
RegularityCertificate regularity_certificate(const WeightSequence& M, const WeightSequence& N,
                                             RegularityMode mode);

// Smallest C in {2^0..2^20} with Γ̄_b(Ct) <= Γ̲_a(t) on the automatic t grid, or 0.
double gamma_link_constant(const AssocFns& a, const AssocFns& b, double* t_lo = nullptr,
                           double* t_hi = nullptr);

// ----------------------------------------------------------- weight matrices

class WeightMatrix {
 public:
  WeightMatrix() = default;
  // Sorts by x; throws NotOrdered if the pointwise order fails.
  explicit WeightMatrix(std::vector<std::pair<double, WeightSequence>> members);

  std::size_t size() const { return members_.size(); }
  double x(std::size_t i) const { return members_[i].first; }
  const WeightSequence& at(std::size_t i) const { return members_[i].second; }
  const std::vector<std::pair<double, WeightSequence>>& members() const { return members_; }

 private:
  std::vector<std::pair<double, WeightSequence>> members_;
};

}  // namespace carleman

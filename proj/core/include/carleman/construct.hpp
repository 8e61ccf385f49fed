#pragma once

// Constructive sequence lemmas: the reduction of L below M, intersectability,
// the Q families, N', derivative bound sequences and Frobenius covers.

#include <cstddef>
#include <string>
#include <vector>

#include "carleman/seqcore.hpp"
#include "carleman/smooth_fn.hpp"

namespace carleman {

struct LambdaMembership {
  bool member = false;
  double rho = 0.0;
  double log_rho = 0.0;
  double tail_slope = 0.0;  // slope of the per-k exponent vs log k over the tail
};

// rho = exp(sup_k (log c_k - log M_k)/k), k >= 1; member when the exponent
// does not trend upward.
LambdaMembership lambda_membership(const PositiveSequence& c, const WeightSequence& M);

struct ReductionAudit {
  Check divergent;        // delta_k -> inf (tail trend of log delta)
  Check zero_sequence;    // delta_k beta_k -> 0
  Check decreasing;       // mu_k/delta_k nondecreasing
  Check nqthm;            // sum delta_k/mu_k <= 8 delta_1 sum 1/mu_k
  Check L_le_S;
  Check S_lhd_M;          // trend of (S_k/M_k)^{1/k}
  Check s_log_convex;
  Check moderate_growth;  // mg(S, S) bounded
  Check derivation;       // S_k <= C^{k^2}
  Check nonquasianalytic; // only required when M is non-quasianalytic
  bool nq_required = false;

  bool ok() const;
  std::string first_failure() const;
};

struct ReductionResult {
  WeightSequence S;
  WeightSequence N;
  PositiveSequence beta;
  PositiveSequence delta;  // index 0 unused (log 1)
  double log_C = 0.0;      // N rescaling making L <= N
  double log_C_S = 0.0;    // S rescaling making L <= S
  ReductionAudit audit;
};

// Throws NotLhd unless L is below M with the trend rule, AuditFailed when
// strict and some audited condition fails.
ReductionResult reduce_L_to_M(const PositiveSequence& L, const WeightSequence& M,
                              bool strict = true);

struct Intersectability {
  bool passes = false;
  std::size_t threshold = 0;  // first index of sustained log-convexity of the check m-view
  WeightSequence Mcheck;
};

Intersectability check_intersectable(const WeightSequence& M);

// n = 0: (k log(k+e))^k. n in 1..4: (k log k ... log^[n] k)^k for k >= 3 with
// each iterated log clamped below by 1, geometric below k = 3.
WeightSequence family_Q(int n, std::size_t K);

// Smallest c >= 1 with c^k N_k >= M_k for all k; returns c^k N_k.
WeightSequence lift_to_majorant(const WeightSequence& N, const WeightSequence& M);

struct NPrimeResult {
  WeightSequence Nprime;
  double C = 1.0;  // mg(m, m)
  Check balanced;  // min_j n_j n_{k-j} attained at floor(k/2)
  Check log_convex;
  Check majorizes;  // N' >= M
  Check nq_bound;   // (N'_{2j})^{1/(2j)} >= (2C/e) j n_j^{1/j}
  Check nonquasianalytic;
  double mg_with_N = 0.0;  // log mg(N', N)
  bool ok() const;
};

NPrimeResult nprime(const WeightSequence& N, const WeightSequence& M, bool strict = true);

// log L_k = log max over an x grid on [-1, 1] of |g^{(k)}|, |h^{(k)}|;
// -inf where both vanish.
PositiveSequence derivative_bound_sequence(const SmoothFn1D& g, const SmoothFn1D& h,
                                           std::size_t kmax, std::size_t npts = 1001);

struct FrobeniusRow {
  long j, a1, a2;
};

struct FrobeniusCover {
  long p = 0, q = 0;
  std::vector<FrobeniusRow> rows;  // j in [pq, 3pq]
  long largest_gap = -1;           // largest non-representable integer, -1 if none
  bool all_covered = false;
};

FrobeniusCover frobenius_cover(long p, long q);

}  // namespace carleman

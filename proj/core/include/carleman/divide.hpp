#pragma once

// Division by coprime powers: recover f from g = f^j and h = f^(j+1) through
// holomorphic approximants on shrinking ellipses.

#include <cstddef>
#include <string>
#include <vector>

#include "carleman/approx.hpp"
#include "carleman/seqcore.hpp"
#include "carleman/smooth_fn.hpp"

namespace carleman {

// ceil(log2(j(j+1))) + 7
std::size_t division_chain_length(int j);
// 2^(k-6)
double division_exponent(std::size_t k);

struct DivisionLevel {
  double eps = 0.0;          // level of g_eps, h_eps, u_eps, v_eps
  double delta = 0.0;        // max of P_sup over this and the finer levels
  double r = 0.0;            // delta^(1/(j+1))
  bool admissible = false;   // delta <= r <= 1
  double P_sup = 0.0;        // measured |h^j - g^(j+1)| on Omega_{eps/2}, at least the rounding floor
  ThreeLinesResult shrink;   // certified bound over the measured delta
  double u_sup = 0.0;        // |u| on Omega_{eps/2}
  double u_bound = 0.0;      // (2K)^(1/j)
  double err_u = 0.0;        // |f - u| on [-1, 1]
  double v_sup = 0.0;        // |v| on Omega_{eps/2}
  double err_final = 0.0;    // |f - (u - v)| on [-1, 1]: the eps/2 approximant
  double err_final_x = 0.0;  // where err_final is attained
  double bound_final = 0.0;  // c7 delta^(1/s)
  double dbar_flat = 0.0;    // |dbar (u - v)| on interior nodes of Omega_{eps/2}
  std::size_t floor_nodes = 0;  // nodes of Omega_{eps/2} with |g| < r
};

struct DivisionReport {
  int j = 0;
  std::size_t k = 0;
  double s = 0.0;
  std::vector<std::string> chain;
  std::string f_name;
  bool has_truth = false;
  double K = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double c5 = 0.0, c6 = 0.0, c7 = 0.0;  // smallest constants valid on every admissible level
  double correlation = 0.0;             // log err_final vs log delta on the decreasing segment
  bool at_floor = false;                // fewer than three final errors above the noise floor
  double powers_residual = 0.0;         // max | |g|^(j+1) - |h|^j | on [-1, 1]
  double grid_h = 0.0;
  std::vector<DivisionLevel> levels;

  // recovered values on the interval nodes: h/g where |g| > r, else the finest approximant
  std::vector<double> x, recovered;
  std::vector<char> floor_region;

  struct Verdict {
    std::string name;
    bool ok = true;
    std::string note;
  };
  std::vector<Verdict> verdicts;
  bool ok() const;
};

struct DivideOptions {
  HoloForwardOptions forward;
  double power_tol = 1e-8;
  double floor = 1e-12;  // errors at or below this count as the noise floor
};

// chain: k sequences, chain[0..2] feed the forward approximation and
// (chain[2], chain[3]) the three-lines shrink that defines delta.
// Throws InconsistentPowers if |g|^(j+1) and |h|^j differ beyond power_tol.
DivisionReport joris_divide(const SmoothFn1D* f_true, const SmoothFn1D& g, const SmoothFn1D& h, int j,
                            const std::vector<WeightSequence>& chain, const DivideOptions& opt = {});

struct ChainLink {
  std::size_t from = 0;  // link between chain[from] and chain[from + 1]
  std::string kind;      // "gamma" for the first link, "mg" after
  double constant = 0.0;
  bool ok = false;
};

struct Chain {
  std::vector<WeightSequence> members;
  std::vector<ChainLink> links;
};

// R: start at the smallest member and move up one member per step;
// B: end at member `target` and move down. The walk stays at the end member
// once the matrix is exhausted. Throws CertificateMissing for a failed link.
Chain chain_select(const WeightMatrix& mat, int j, RegularityMode mode, std::size_t target = 0);

struct WitnessRun {
  std::string witness;
  std::vector<std::string> chain;
  bool audits_ok = false;
  DivisionReport report;
};

// For every witness N: N^(k) = N and N^(i) = nprime(N^(i+1), M), then
// joris_divide along N^(1..k).
std::vector<WitnessRun> quasi_driver(const SmoothFn1D* f_true, const SmoothFn1D& g, const SmoothFn1D& h,
                                     int j, const WeightSequence& M,
                                     const std::vector<WeightSequence>& witnesses,
                                     const DivideOptions& opt = {});

}  // namespace carleman

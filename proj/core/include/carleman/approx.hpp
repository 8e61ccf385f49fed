#pragma once

// Almost analytic extension, holomorphic approximation on shrinking
// ellipses, the three-lines shrink and the inverse certificate.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "carleman/cplane.hpp"
#include "carleman/seqcore.hpp"
#include "carleman/smooth_fn.hpp"

namespace carleman {

// Piecewise-linear continuation of the ratio-crossing index: nu(t) interpolates
// k - 1 + (u - l_{k-1})/(l_k - l_{k-1}) with u = -log t, l_k = log m_{k+1} - log m_k,
// so Γ̲(t) - 1 <= nu(t) <= Γ̲(t). dnu is d nu / d log t.
struct ContinuousGamma {
  explicit ContinuousGamma(const PositiveSequence& m);

  double nu(double log_t, double* dnu = nullptr) const;

 private:
  std::vector<double> lambda_;
};

// max over k in [cap/2, cap] of (sup_{[-1,1]} |f^(k)| / M_k)^(1/k); 0 for
// polynomials of degree below cap/2.
double derivative_growth(const SmoothFn1D& f, const WeightSequence& M, std::size_t npts = 1001);

struct AlmostAnalyticExt {
  GridFn F;
  GridFn dbarF;            // exact Wirtinger derivative of the construction
  double rho = 0.0;
  double nu_max = 0.0;     // truncation clip, dcap - 1
  double d_floor = 0.0;    // the clip binds for d(z) < d_floor
  bool cap_binds = false;
  // envelope |dbar F| <= C h_m(rho' d) on d in [4 h, 0.5], d >= d_floor
  double C_measured = 0.0;  // with rho' = rho
  double rho_fit = 0.0;     // rho' minimizing the spread of log(|dbar F| / h_m(rho' d))
  double C_fit = 0.0;
};

// F(x+iy) = chi(z) sum_k c_k f^(k)(x) (iy)^k / k!, with c_k = 1 for k <= nu,
// c_k = frac(nu) for the next order and nu = min(dcap - 1, nu_m(rho d(z))).
// chi is RadialStep{chi_s0, 1.1 chi_s0}.
AlmostAnalyticExt almost_analytic_ext(const SmoothFn1D& f, const WeightSequence& M, double rho,
                                      const Grid& g, double chi_s0);

struct ErrorCurveFit {
  double c1 = 0.0, c2 = 0.0;
  double correlation = 0.0;  // Pearson r of log err vs log h_m(c2 eps)
  std::size_t first = 0, count = 0;  // fitted segment
  bool at_floor = false;             // fewer than three points above the noise floor
};

// Least squares of log err - log c1 - log h_m(c2 eps) over c2 on a log grid,
// on the longest strictly decreasing segment above `floor`; c1 is then the
// smallest constant bounding every point.
ErrorCurveFit fit_error_curve(const std::vector<double>& eps, const std::vector<double>& err,
                              const AssocFns& m, double floor = 1e-13);

struct ApproxLevel {
  double eps = 0.0;
  std::vector<std::size_t> nodes;    // Omega_eps
  std::vector<std::size_t> support;  // Omega_eps plus one ring of neighbours
  GridFn f;                          // F - v on `support`, zero elsewhere
  double sup_omega = 0.0;            // |f_eps| on Omega_eps
  double err = 0.0;                  // |f - f_eps| on [-1, 1]
  double w_sup = 0.0;
  double v_bound = 0.0;
};

struct HoloForwardOptions {
  double eps0 = 0.4;
  std::size_t levels = 5;
  std::size_t cells = 512;
};

struct ApproxFamily {
  std::string f_name;
  std::array<std::string, 3> chain;
  Grid grid;
  std::vector<std::size_t> interval;
  std::vector<ApproxLevel> levels;
  double K = 0.0, c1 = 0.0, c2 = 0.0;
  double c2_pred = 0.0;  // Cgeom * B0 * B1
  double correlation = 0.0;
  bool at_floor = false;
  double B0 = 0.0, B1 = 0.0, B2 = 0.0, Cgeom = 0.0;
  double d_floor = 0.0;
  PositiveSequence m3;   // m-view of the third chain member

  std::vector<double> eps() const;
  std::vector<double> errors() const;
  const ApproxLevel* level(double eps) const;
};

// chain = (M1, M2, M3): f in class M1, B1 from the Gamma link m1 -> m2,
// B2 = sup (m2_{j+1} / m3_j)^(1/(j+1)). Levels eps0 2^-i.
ApproxFamily holo_forward(const SmoothFn1D& f, const std::array<WeightSequence, 3>& chain,
                          const HoloForwardOptions& opt = {});

struct ThreeLinesBounds {
  double L = 0.0;   // |g| on Omega_eps
  double a1 = 0.0;  // |g| on [-1,1] <= a1 h_m(a2 eps)
  double a2 = 0.0;
  double C = 0.0;   // mg constant of (m, n)
  double noise = 0.0;  // absolute rounding allowance added to both hypotheses and the bound
};

struct ThreeLinesResult {
  double a3 = 0.0, a4 = 0.0;
  double certified = 0.0;  // a3 h_n(a4 eps) + noise
  double measured = 0.0;   // |g| on Omega_{eps/2}
  double lipschitz = 0.0;
  double slack = 0.0;      // 2 h lipschitz
  bool holds = false;      // measured <= certified + slack
};

// g sampled on `support` (Omega_eps and neighbours). Throws HypothesisFailed
// when the input bounds do not hold on the grid.
ThreeLinesResult three_lines_shrink(const GridFn& g, double eps, const ThreeLinesBounds& b,
                                    const AssocFns& m, const AssocFns& n);

struct FamilyShrink {
  double eps = 0.0;  // g = f_eps - f_{2 eps}
  ThreeLinesResult result;
};

// Every g_eps = f_eps - f_{2 eps} of the family with L = 2K, a1 = 2 c1,
// a2 = 2 c2 and n = m = m3, C = mg(m3, m3).
std::vector<FamilyShrink> three_lines_family(const ApproxFamily& fam);

struct InverseCertificate {
  double sigma = 0.0;
  double log_A = 0.0;
  std::size_t k_verified = 0;  // measured |f^(k)| <= bound for all k <= k_verified
  double D1 = 0.0, D2 = 0.0, E = 0.0, b = 0.0;
  std::size_t levels_summed = 0;
  std::vector<double> log_bound;     // telescoped bound on |f^(k)|_[-b,b]
  std::vector<double> log_measured;  // empty without f
  std::string target;                // label of the certified sequence
};

// sigma = 2 e D1 D2 c2 / (E (1 - b))
double inverse_sigma(double D1, double D2, double c2, double E, double b);

// Cauchy estimates on the telescoped family f_eps0 + sum g_{eps0 2^-j}, each
// g bounded on Omega_{eps/2} by the certified three-lines formula.
// Throws TailNotSummable if the level sum does not settle within 400 levels.
InverseCertificate holo_inverse(const ApproxFamily& fam, const std::array<WeightSequence, 3>& chain,
                                double b, const SmoothFn1D* f = nullptr);

// sup over 1001 points of [-1,1] and k <= dcap of |f^(k)| / (sigma^k M_k)
double seminorm(const SmoothFn1D& f, const WeightSequence& M, double sigma);

}  // namespace carleman

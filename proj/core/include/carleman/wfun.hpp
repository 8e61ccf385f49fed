#pragma once

// Weight functions omega, phi(u) = omega(e^u), Young conjugates and the
// associated weight matrix.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "carleman/seqcore.hpp"

namespace carleman {

struct WeightFunctionCertificates {
  Check omega1;    // witness: sup omega(2t)/omega(t) over the tail
  Check omega2;    // witness: omega(t)/t at the grid end
  Check omega3;    // witness: log t / omega(t) at the grid end
  Check omega4;    // witness: most negative slope increment of phi
  Check concave;   // witness: largest slope increment of omega in t
};

class WeightFunction {
 public:
  using PhiFn = std::function<double(double)>;

  WeightFunction() = default;

  // Sampled data; grid strictly increasing and positive, vals nondecreasing.
  static WeightFunction from_samples(std::vector<double> grid, std::vector<double> vals,
                                     std::string name);
  // Closed form given through phi(u) = omega(e^u); sampled on t in [1, tmax]
  // with n log-spaced nodes. The generator is kept for grid extension.
  static WeightFunction from_phi(PhiFn phi, std::string name, double tmax = 1e12,
                                 std::size_t n = 4096);

  const std::string& name() const { return name_; }
  const std::vector<double>& grid() const { return t_; }
  const std::vector<double>& vals() const { return w_; }
  std::size_t size() const { return t_.size(); }
  bool has_generator() const { return static_cast<bool>(phi_fn_); }

  double operator()(double t) const;
  double phi(double u) const;
  // omega'(t) at node i by centered differences, clamped nonnegative
  double derivative_at_node(std::size_t i) const;

  const WeightFunctionCertificates& certificates() const { return cert_; }

  // omega - omega(1) on [1, inf), 0 below; phi(0) = 0 afterwards.
  WeightFunction normalized() const;

  // phi on a uniform u grid [0, U]; uses the generator when present,
  // otherwise the interpolant with linear extrapolation of the last slope.
  void sample_phi(double U, std::size_t n, std::vector<double>& u, std::vector<double>& p) const;
  const PhiFn& generator() const { return phi_fn_; }

 private:
  void compute_certificates();

  std::string name_;
  std::vector<double> t_, w_;
  PhiFn phi_fn_;
  WeightFunctionCertificates cert_;
};

WeightFunction mk_weight_function(const std::string& spec);

struct NqIntegral {
  double value_partial = 0.0;
  double tail_estimate = 0.0;  // +inf when divergent
  bool convergent = false;
  double tail_slope = 0.0;     // slope of log omega vs log t over the last decade
  double log_exponent = 0.0;   // q in omega ~ t/(log t)^q
};

NqIntegral nq_integral(const WeightFunction& w);

// max_i (y x_i - f_i) for each y, via the lower convex hull of (x_i, f_i).
// argmax receives the maximizing index when non-null.
std::vector<double> discrete_legendre(std::span<const double> x, std::span<const double> f,
                                      std::span<const double> y,
                                      std::vector<std::size_t>* argmax = nullptr);

struct YoungConjugate {
  std::vector<double> s;
  std::vector<double> vals;
  std::vector<double> argmax_u;
  double u_max_used = 0.0;
  bool omega3_ok = true;
  std::string owner;
};

YoungConjugate young_conjugate(const WeightFunction& w, std::span<const double> sgrid);

// phi**(u) = max_s (s u - phi*(s)) over the stored s grid
std::vector<double> biconjugate(const YoungConjugate& c, std::span<const double> u);

struct FctmodReport {
  double worst_slack = kInf;
  double x = 0.0;
  std::size_t j = 0, k = 0;
  std::size_t pairs = 0;
};

struct AssociatedMatrix {
  WeightMatrix matrix;
  FctmodReport fctmod;
};

// Omega^x_k = exp(phi*(xk)/x) on the normalized omega. Throws FctmodViolation
// if the log slack drops below -1e-9.
AssociatedMatrix associated_matrix(const WeightFunction& w, std::span<const double> xlist,
                                   std::size_t K);

// omega_M(t) = -log h_M(1/t), sampled on t in [1, mu_K].
WeightFunction omega_from_sequence(const WeightSequence& M, std::size_t n = 2048);

struct OmegaTilde {
  std::string base, target;
  std::vector<double> x, y, z, omega_z;  // index n-1 holds x_n etc.
  std::size_t n_reached = 1;
  bool exhausted = false;
  WeightFunction tilde;
  double worst_left = kInf;   // min over blocks of omega~ - (n-2) omega
  double worst_right = kInf;  // min over blocks of n omega - omega~
  bool sandwich_ok = false;
  std::vector<double> ratio_to_base;    // omega~/omega at x_n
  std::vector<double> ratio_to_target;  // omega~/f at x_n
};

OmegaTilde omega_tilde(const WeightFunction& w, const WeightFunction& f, std::size_t Nmax);

struct EllCompare {
  bool holds = false;
  double constant = 0.0;
  std::size_t argmax = 0;
};

EllCompare ell_compare(const PositiveSequence& L, const WeightFunction& tilde);

}  // namespace carleman

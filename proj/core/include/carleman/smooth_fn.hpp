#pragma once

// Smooth functions on [-1, 1] with exact or spectral derivatives up to a cap.

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace carleman {

inline constexpr std::size_t kDefaultDerivativeCap = 40;

class SmoothFn1D {
 public:
  enum class Kind { Polynomial, Lacunary, RationalPole, Chebyshev, Power };

  SmoothFn1D();  // the zero function

  // sum_i c_i x^i
  static SmoothFn1D polynomial(std::vector<double> coeffs, std::string name = "poly");
  // sum_{j<terms} exp(-theta 2^{j/s}) cos(2^j x); Gevrey of order s
  static SmoothFn1D lacunary(double s, double theta = 1.0, std::size_t terms = 20,
                             std::string name = {});
  // c (a - x)^{-p}, a > 1
  static SmoothFn1D rational_pole(double c, double a, double p, std::string name = {});
  // sum_i c_i T_i(x)
  static SmoothFn1D chebyshev(std::vector<double> coeffs, std::string name = "cheb");
  // interpolant at n Chebyshev points of the first kind
  static SmoothFn1D chebyshev_interpolant(const std::function<double(double)>& f, std::size_t n,
                                          std::string name = "cheb");
  // base^n via repeated Leibniz products
  static SmoothFn1D power(const SmoothFn1D& base, unsigned n);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::size_t dcap() const { return dcap_; }
  void set_dcap(std::size_t cap);
  // true when every derivative beyond degree() vanishes identically
  bool is_polynomial() const;
  std::size_t degree() const;

  double value(double x) const;
  // out[k] = f^{(k)}(x) for k <= kmax; throws DerivativeCapExceeded past dcap
  void derivatives(double x, std::size_t kmax, std::vector<double>& out) const;
  double derivative(double x, std::size_t k) const;

 private:
  Kind kind_ = Kind::Polynomial;
  std::string name_ = "zero";
  std::size_t dcap_ = kDefaultDerivativeCap;
  std::vector<double> c_;                   // polynomial or Chebyshev coefficients
  std::vector<std::vector<double>> dcheb_;  // Chebyshev coefficients of f^{(k)}
  std::vector<double> log_a_, log_b_;       // lacunary amplitudes and frequencies
  double pole_c_ = 0.0, pole_a_ = 0.0, pole_p_ = 0.0;
  std::shared_ptr<const SmoothFn1D> base_;
  unsigned exponent_ = 0;
};

}  // namespace carleman

#include "carleman/smooth_fn.hpp"

#include <algorithm>
#include <cmath>

#include "carleman/error.hpp"
#include "carleman/numeric.hpp"

namespace carleman {

namespace {

void check_cap(std::size_t kmax, std::size_t cap, const std::string& name) {
  if (kmax > cap)
    throw Error(ErrorCode::DerivativeCapExceeded,
                name + ": order " + std::to_string(kmax) + " exceeds cap " + std::to_string(cap));
}

double clenshaw(const std::vector<double>& c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) {
    double b0 = 2.0 * x * b1 - b2 + c[i];
    b2 = b1;
    b1 = b0;
  }
  return c.empty() ? 0.0 : x * b1 - b2 + c[0];
}

std::vector<double> cheb_derivative(const std::vector<double>& c) {
  std::size_t n = c.size();
  if (n <= 1) return {0.0};
  // c'_{i-1} = c'_{i+1} + 2 i c_i, two trailing zeros as sentinels
  std::vector<double> d(n + 1, 0.0);
  for (std::size_t i = n - 1; i >= 1; --i) d[i - 1] = d[i + 1] + 2.0 * double(i) * c[i];
  d[0] *= 0.5;
  d.resize(n - 1);
  return d;
}

}  // namespace

SmoothFn1D::SmoothFn1D() = default;

SmoothFn1D SmoothFn1D::polynomial(std::vector<double> coeffs, std::string name) {
  SmoothFn1D f;
  f.kind_ = Kind::Polynomial;
  f.c_ = std::move(coeffs);
  while (!f.c_.empty() && f.c_.back() == 0.0) f.c_.pop_back();
  f.name_ = std::move(name);
  return f;
}

SmoothFn1D SmoothFn1D::lacunary(double s, double theta, std::size_t terms, std::string name) {
  if (!(s > 0) || !(theta > 0) || terms == 0)
    throw Error(ErrorCode::InvalidArgument, "lacunary: s, theta must be positive");
  SmoothFn1D f;
  f.kind_ = Kind::Lacunary;
  for (std::size_t j = 0; j < terms; ++j) {
    double lb = double(j) * std::log(2.0);
    f.log_b_.push_back(lb);
    f.log_a_.push_back(-theta * std::exp(lb / s));
  }
  f.name_ = name.empty() ? "lacunary:" + std::to_string(s) : std::move(name);
  return f;
}

SmoothFn1D SmoothFn1D::rational_pole(double c, double a, double p, std::string name) {
  if (!(a > 1.0) || !(p > 0))
    throw Error(ErrorCode::InvalidArgument, "rational_pole: need a > 1 and p > 0");
  SmoothFn1D f;
  f.kind_ = Kind::RationalPole;
  f.pole_c_ = c;
  f.pole_a_ = a;
  f.pole_p_ = p;
  f.name_ = name.empty() ? "pole" : std::move(name);
  return f;
}

SmoothFn1D SmoothFn1D::chebyshev(std::vector<double> coeffs, std::string name) {
  if (coeffs.size() > 2048) throw Error(ErrorCode::InvalidArgument, "chebyshev: more than 2048 coefficients");
  SmoothFn1D f;
  f.kind_ = Kind::Chebyshev;
  f.c_ = std::move(coeffs);
  if (f.c_.empty()) f.c_.push_back(0.0);
  f.dcheb_.push_back(f.c_);
  for (std::size_t k = 1; k <= f.dcap_; ++k) f.dcheb_.push_back(cheb_derivative(f.dcheb_.back()));
  f.name_ = std::move(name);
  return f;
}

SmoothFn1D SmoothFn1D::chebyshev_interpolant(const std::function<double(double)>& fn, std::size_t n,
                                             std::string name) {
  if (n == 0 || n > 2048) throw Error(ErrorCode::InvalidArgument, "chebyshev_interpolant: 1 <= n <= 2048");
  std::vector<double> fx(n), c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) fx[i] = fn(std::cos(kPi * (double(i) + 0.5) / double(n)));
  for (std::size_t k = 0; k < n; ++k) {
    Neumaier acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(fx[i] * std::cos(kPi * double(k) * (double(i) + 0.5) / double(n)));
    c[k] = (k == 0 ? 1.0 : 2.0) * acc.value() / double(n);
  }
  // chop the rounding-noise tail; high derivatives amplify it by ~n^{2k}
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::fabs(v));
  while (c.size() > 1 && std::fabs(c.back()) <= 4e-16 * cmax) c.pop_back();
  return chebyshev(std::move(c), std::move(name));
}

SmoothFn1D SmoothFn1D::power(const SmoothFn1D& base, unsigned n) {
  SmoothFn1D f;
  f.kind_ = Kind::Power;
  f.base_ = std::make_shared<const SmoothFn1D>(base);
  f.exponent_ = n;
  f.dcap_ = base.dcap_;
  f.name_ = base.name_ + "^" + std::to_string(n);
  return f;
}

void SmoothFn1D::set_dcap(std::size_t cap) {
  dcap_ = cap;
  while (kind_ == Kind::Chebyshev && dcheb_.size() <= dcap_) dcheb_.push_back(cheb_derivative(dcheb_.back()));
}

bool SmoothFn1D::is_polynomial() const {
  switch (kind_) {
    case Kind::Polynomial:
    case Kind::Chebyshev:
      return true;
    case Kind::Power:
      return base_->is_polynomial();
    default:
      return false;
  }
}

std::size_t SmoothFn1D::degree() const {
  switch (kind_) {
    case Kind::Polynomial:
    case Kind::Chebyshev:
      return c_.empty() ? 0 : c_.size() - 1;
    case Kind::Power:
      return base_->degree() * exponent_;
    default:
      return dcap_;
  }
}

double SmoothFn1D::value(double x) const { return derivative(x, 0); }

double SmoothFn1D::derivative(double x, std::size_t k) const {
  std::vector<double> d;
  derivatives(x, k, d);
  return d[k];
}

void SmoothFn1D::derivatives(double x, std::size_t kmax, std::vector<double>& out) const {
  check_cap(kmax, dcap_, name_);
  out.assign(kmax + 1, 0.0);
  switch (kind_) {
    case Kind::Polynomial: {
      // Horner on each derivative's coefficients
      for (std::size_t k = 0; k <= kmax && k < c_.size(); ++k) {
        double acc = 0.0;
        for (std::size_t i = c_.size(); i-- > k;) {
          double fall = 1.0;
          for (std::size_t r = 0; r < k; ++r) fall *= double(i - r);
          acc = acc * x + c_[i] * fall;
        }
        out[k] = acc;
      }
      return;
    }
    case Kind::Lacunary: {
      for (std::size_t k = 0; k <= kmax; ++k) {
        Neumaier acc;
        for (std::size_t j = 0; j < log_a_.size(); ++j) {
          double amp = std::exp(log_a_[j] + double(k) * log_b_[j]);
          double arg = std::exp(log_b_[j]) * x;
          // d^k cos(bx) = b^k cos(bx + k pi/2)
          double v;
          switch (k % 4) {
            case 0: v = std::cos(arg); break;
            case 1: v = -std::sin(arg); break;
            case 2: v = -std::cos(arg); break;
            default: v = std::sin(arg); break;
          }
          acc.add(amp * v);
        }
        out[k] = acc.value();
      }
      return;
    }
    case Kind::RationalPole: {
      double lr = -std::log(pole_a_ - x);
      double rising = 1.0;
      for (std::size_t k = 0; k <= kmax; ++k) {
        out[k] = pole_c_ * rising * std::exp((pole_p_ + double(k)) * lr);
        rising *= pole_p_ + double(k);
      }
      return;
    }
    case Kind::Chebyshev: {
      for (std::size_t k = 0; k <= kmax; ++k) out[k] = clenshaw(dcheb_[k], x);
      return;
    }
    case Kind::Power: {
      std::vector<double> d;
      base_->derivatives(x, kmax, d);
      out[0] = 1.0;
      std::vector<double> next(kmax + 1);
      for (unsigned e = 0; e < exponent_; ++e) {
        for (std::size_t k = 0; k <= kmax; ++k) {
          Neumaier acc;
          double binom = 1.0;
          for (std::size_t i = 0; i <= k; ++i) {
            acc.add(binom * d[i] * out[k - i]);
            binom = binom * double(k - i) / double(i + 1);
          }
          next[k] = acc.value();
        }
        out.swap(next);
      }
      return;
    }
  }
}

}  // namespace carleman

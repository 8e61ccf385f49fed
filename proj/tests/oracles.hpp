#pragma once

// Brute-force reference implementations used only by tests. They share no
// code with the library beyond the data types.

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

inline std::vector<double> log_factorials(std::size_t K) {
  std::vector<double> v(K + 1);
  for (std::size_t k = 0; k <= K; ++k) v[k] = std::lgamma(double(k) + 1.0);
  return v;
}

inline std::vector<double> gevrey(double s, std::size_t K) {
  auto f = log_factorials(K);
  for (auto& x : f) x *= s;
  return f;
}

// min_k (a_k + k log t) by plain scan in long double; smallest argmin
inline std::pair<long double, std::size_t> hmin(const std::vector<double>& a, double t) {
  long double lt = std::log((long double)t);
  long double best = INFINITY;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    long double v = (long double)a[k] + (long double)k * lt;
    if (v < best) {
      best = v;
      arg = k;
    }
  }
  return {best, arg};
}

// min{k : a_{k+1}/a_k >= 1/t} from the definition
inline std::size_t gamma_lower(const std::vector<double>& a, double t) {
  for (std::size_t k = 0; k + 1 < a.size(); ++k)
    if (std::exp((long double)a[k + 1] - a[k]) * (long double)t >= 1.0L) return k;
  return a.size() - 1;
}

// random log-convex sequence with a_0 = 0 and increasing positive increments
inline std::vector<double> random_log_convex(std::mt19937_64& rng, std::size_t K) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(K + 1, 0.0);
  double inc = -3.0 + 2.0 * u(rng);
  for (std::size_t k = 1; k <= K; ++k) {
    inc += 0.02 + 0.3 * u(rng) * u(rng);
    a[k] = a[k - 1] + inc;
  }
  return a;
}

}  // namespace oracle

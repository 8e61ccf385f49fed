#pragma once

// Small numerical helpers shared by all modules: log-domain arithmetic,
// compensated summation, least squares on short series, thread count.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace carleman {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

// log k! for k >= 0. Exact table up to 4096, Stirling series beyond.
double log_factorial(std::size_t k);

// log(e^a + e^b) without overflow; -inf is the additive identity.
double log_add(double a, double b);

// Neumaier's variant of Kahan summation.
class Neumaier {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double correlation = 0.0;  // Pearson r; 0 when either series is constant
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

double pearson(std::span<const double> x, std::span<const double> y);

// Log-spaced points, endpoints included.
std::vector<double> logspace(double lo, double hi, std::size_t n);

// Worker count for parallel loops: CARLEMAN_THREADS if set (>=1), else
// hardware concurrency, capped by the amount of work.
unsigned worker_count(std::size_t work_items);

}  // namespace carleman

#include "carleman/numeric.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "carleman/error.hpp"

namespace carleman {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::NotOrdered: return "NotOrdered";
    case ErrorCode::NotIncreasing: return "NotIncreasing";
    case ErrorCode::NotConcave: return "NotConcave";
    case ErrorCode::NotLhd: return "NotLhd";
    case ErrorCode::NotLogConvex: return "NotLogConvex";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::GridExhausted: return "GridExhausted";
    case ErrorCode::MaximizerAtBoundary: return "MaximizerAtBoundary";
    case ErrorCode::TruncationSaturated: return "TruncationSaturated";
    case ErrorCode::ViolationFound: return "ViolationFound";
    case ErrorCode::FctmodViolation: return "FctmodViolation";
    case ErrorCode::DerivativeCapExceeded: return "DerivativeCapExceeded";
    case ErrorCode::FactorNonpositive: return "FactorNonpositive";
    case ErrorCode::AuditFailed: return "AuditFailed";
    case ErrorCode::SupportTouchesEdge: return "SupportTouchesEdge";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::TailNotSummable: return "TailNotSummable";
    case ErrorCode::CertificateMissing: return "CertificateMissing";
    case ErrorCode::InconsistentPowers: return "InconsistentPowers";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

constexpr std::size_t kFactTable = 4096;

const std::vector<double>& fact_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kFactTable + 1, 0.0);
    Neumaier acc;
    for (std::size_t k = 1; k <= kFactTable; ++k) {
      acc.add(std::log(static_cast<double>(k)));
      t[k] = acc.value();
    }
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(std::size_t k) {
  if (k <= kFactTable) return fact_table()[k];
  double n = static_cast<double>(k) + 1.0;
  // Stirling for log Gamma(n)
  return (n - 0.5) * std::log(n) - n + 0.5 * std::log(2.0 * kPi) + 1.0 / (12.0 * n) -
         1.0 / (360.0 * n * n * n);
}

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  LineFit out;
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return out;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0) {
    out.intercept = my;
    return out;
  }
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.correlation = (syy > 0) ? sxy / std::sqrt(sxx * syy) : 0.0;
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  return fit_line(x, y).correlation;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi > 0) || n == 0)
    throw Error(ErrorCode::InvalidArgument, "logspace needs positive bounds");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / double(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

unsigned worker_count(std::size_t work_items) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CARLEMAN_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  if (work_items < n) n = static_cast<unsigned>(std::max<std::size_t>(1, work_items));
  return n;
}

}  // namespace carleman

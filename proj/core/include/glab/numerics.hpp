#pragma once
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace glab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(e^a + e^b), safe for -inf operands.
inline double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = a > b ? a : b;
  return m + std::log1p(std::exp(-(std::fabs(a - b))));
}

inline double logsumexp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs)
    if (x > m) m = x;
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Ordinary least squares line fit y ~ intercept + slope * x, with the slope
// standard error taken from the fit residuals. Callers that need a fixed
// polynomial correction -c*log(n) adjust ys before calling.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
};

SlopeFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

// Floats in CSV output are written with 17 significant digits so that
// round-tripping is exact.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace glab

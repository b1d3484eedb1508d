#include "glab/gurevich.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "glab/errors.hpp"

namespace glab {

SlopeFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  size_t n = xs.size();
  if (n != ys.size() || n < 2)
    throw std::invalid_argument("fit_line: need at least two points");
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_line: degenerate abscissae");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = static_cast<int>(n);
  if (n > 2) {
    double rss = 0;
    for (size_t i = 0; i < n; ++i) {
      double e = ys[i] - (f.intercept + f.slope * xs[i]);
      rss += e * e;
    }
    f.stderr_slope = std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx);
  }
  return f;
}

GurevichEstimate gurevich_estimate(const Environment& env,
                                   const std::vector<std::vector<int>>& ns,
                                   const std::vector<std::vector<double>>& log_z,
                                   const GurevichOptions& opts) {
  if (ns.size() != log_z.size() ||
      static_cast<int>(ns.size()) != env.period)
    throw std::invalid_argument("gurevich: series shape disagrees with environment");

  GurevichEstimate out;
  double var_acc = 0.0;
  for (int s = 0; s < env.period; ++s) {
    std::vector<double> xs, ys;
    std::vector<int> used;
    for (size_t i = 0; i < ns[s].size(); ++i) {
      int n = ns[s][i];
      double y = log_z[s][i];
      if (!std::isfinite(y)) continue;  // empty word set at this n
      if (opts.window_lo && n < opts.window_lo) continue;
      if (opts.window_hi && n > opts.window_hi) continue;
      xs.push_back(n);
      ys.push_back(y + opts.correction * std::log(static_cast<double>(n)));
      used.push_back(n);
    }
    if (static_cast<int>(xs.size()) < opts.min_points)
      throw EstimationError("gurevich: state " + std::to_string(s) + " has " +
                            std::to_string(xs.size()) +
                            " usable points, needs " +
                            std::to_string(opts.min_points));
    StateSlope slope;
    slope.state = s;
    slope.fit = fit_line(xs, ys);
    slope.ns_used = std::move(used);
    out.value += env.weights[s] * slope.fit.slope;
    var_acc += env.weights[s] * env.weights[s] * slope.fit.stderr_slope *
               slope.fit.stderr_slope;
    out.per_state.push_back(std::move(slope));
  }
  out.stderr_ = std::sqrt(var_acc);
  return out;
}

}  // namespace glab

#pragma once
#include <vector>

#include "glab/numerics.hpp"
#include "glab/sft.hpp"

namespace glab {

struct GurevichOptions {
  int window_lo = 0;        // restrict fit to n in [lo, hi]; 0 = open end
  int window_hi = 0;
  double correction = 0.0;  // fit log Z~_n + correction * log n
  int min_points = 4;       // per-state usable points required
};

struct StateSlope {
  int state = 0;
  SlopeFit fit;
  std::vector<int> ns_used;
};

struct GurevichEstimate {
  double value = 0.0;    // environment-weighted slope
  double stderr_ = 0.0;  // combined least-squares slope error
  std::vector<StateSlope> per_state;
};

// Weighted average of per-state log-partition growth rates along return
// times. Points with log_z = -inf or outside the window are dropped;
// too few survivors at any state is an estimation failure.
GurevichEstimate gurevich_estimate(const Environment& env,
                                   const std::vector<std::vector<int>>& ns,
                                   const std::vector<std::vector<double>>& log_z,
                                   const GurevichOptions& opts = {});

}  // namespace glab

#include "glab/kesten.hpp"

#include <algorithm>
#include <cmath>

namespace glab {

KestenExtrapolation richardson_extrapolate(const std::vector<KestenPoint>& pts) {
  KestenExtrapolation out;
  std::vector<KestenPoint> sorted = pts;
  std::sort(sorted.begin(), sorted.end(),
            [](const KestenPoint& a, const KestenPoint& b) {
              return a.truncation < b.truncation;
            });
  sorted.erase(std::unique(sorted.begin(), sorted.end(),
                           [](const KestenPoint& a, const KestenPoint& b) {
                             return a.truncation == b.truncation;
                           }),
               sorted.end());
  if (sorted.size() < 2) return out;

  // Dirichlet compression converges like est(L) = A - B/(L+2)^2; solve for
  // A from the two largest levels.
  const KestenPoint& p1 = sorted[sorted.size() - 2];
  const KestenPoint& p2 = sorted[sorted.size() - 1];
  double u1 = 1.0 / ((p1.truncation + 2.0) * (p1.truncation + 2.0));
  double u2 = 1.0 / ((p2.truncation + 2.0) * (p2.truncation + 2.0));
  out.value = (p2.estimate * u1 - p1.estimate * u2) / (u1 - u2);
  out.ok = true;
  if (sorted.size() >= 3) {
    const KestenPoint& p0 = sorted[sorted.size() - 3];
    double b = (out.value - p1.estimate) / u1;
    double u0 = 1.0 / ((p0.truncation + 2.0) * (p0.truncation + 2.0));
    out.model_residual = std::fabs((out.value - b * u0) - p0.estimate);
  }
  return out;
}

}  // namespace glab

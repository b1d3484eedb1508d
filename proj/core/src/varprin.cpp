#include "glab/varprin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "glab/errors.hpp"

namespace glab {

namespace {

// phi + <xi, label(w_0)> as a potential of range max(1, r): the tilt only
// reads the first symbol.
LocallyConstantPotential tilt_potential(const RandomSFT& sft,
                                        const LocallyConstantPotential& phi,
                                        const TiltDirections& dirs, int dim,
                                        const std::vector<double>& xi) {
  if (static_cast<int>(xi.size()) != dim)
    throw std::invalid_argument("tilted pressure: xi dimension mismatch");
  int r = std::max(1, phi.range());
  std::vector<LocallyConstantPotential::Entry> entries;
  for (int s = 0; s < sft.states(); ++s) {
    for (const auto& w : admissible_words(sft, s, r)) {
      double inner = 0.0;
      const auto& lab = dirs.of(s, w[0]);
      for (int i = 0; i < dim; ++i) inner += xi[i] * lab.v[i];
      entries.push_back({s, w, phi.value(s, w) + inner});
    }
  }
  return LocallyConstantPotential(sft, r, entries);
}

}  // namespace

TiltedPressure tilted_pressure(const RandomSFT& sft,
                               const LocallyConstantPotential& phi,
                               const TiltDirections& dirs, int dim,
                               const std::vector<double>& xi,
                               const RuelleOptions& opts) {
  validate_labeling(sft, dirs);
  TiltedPressure out;
  out.eig = fiber_ruelle(sft, tilt_potential(sft, phi, dirs, dim, xi), opts);
  out.value = out.eig.pressure;
  return out;
}

std::vector<double> equilibrium_drift(const RandomSFT& sft,
                                      const LocallyConstantPotential& phi,
                                      const TiltDirections& dirs, int dim,
                                      const std::vector<double>& xi,
                                      double fd_step, const RuelleOptions& opts) {
  if (!(fd_step > 0))
    throw std::invalid_argument("equilibrium_drift: step must be positive");
  std::vector<double> g(dim);
  for (int i = 0; i < dim; ++i) {
    std::vector<double> hi = xi, lo = xi;
    hi[i] += fd_step;
    lo[i] -= fd_step;
    double up = tilted_pressure(sft, phi, dirs, dim, hi, opts).value;
    double dn = tilted_pressure(sft, phi, dirs, dim, lo, opts).value;
    g[i] = (up - dn) / (2.0 * fd_step);
  }
  return g;
}

DescentResult minimize_pressure(const RandomSFT& sft,
                                const LocallyConstantPotential& phi,
                                const TiltDirections& dirs, int dim,
                                const std::vector<double>& xi0,
                                const DescentOptions& opts) {
  std::vector<double> xi = xi0;
  if (static_cast<int>(xi.size()) != dim)
    throw std::invalid_argument("minimize_pressure: xi0 dimension mismatch");

  DescentResult res;
  double value = tilted_pressure(sft, phi, dirs, dim, xi, opts.ruelle).value;
  for (int it = 0; it < opts.max_iters; ++it) {
    std::vector<double> g =
        equilibrium_drift(sft, phi, dirs, dim, xi, opts.fd_step, opts.ruelle);
    double gnorm = 0.0;
    for (double x : g) gnorm += x * x;
    gnorm = std::sqrt(gnorm);

    res.trace.iter.push_back(it);
    res.trace.xi.push_back(xi);
    res.trace.value.push_back(value);
    res.trace.grad_norm.push_back(gnorm);

    if (gnorm <= opts.grad_tol) {
      res.xi = xi;
      res.value = value;
      res.grad_norm = gnorm;
      res.iterations = it;
      return res;
    }

    double radius = 0.0;
    for (double x : xi) radius = std::max(radius, std::fabs(x));
    if (radius > opts.divergence_radius)
      throw EstimationError(
          "infimum not attained: tilt escaped the search radius with drift " +
          std::to_string(gnorm));

    // Armijo backtracking along -g.
    double step = 1.0;
    const double c1 = 1e-4;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> cand = xi;
      for (int i = 0; i < dim; ++i) cand[i] -= step * g[i];
      double cv = tilted_pressure(sft, phi, dirs, dim, cand, opts.ruelle).value;
      if (cv <= value - c1 * step * gnorm * gnorm) {
        xi = std::move(cand);
        value = cv;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved)
      throw EstimationError("minimize_pressure: line search stalled at gradient " +
                            std::to_string(gnorm));
  }
  throw EstimationError("minimize_pressure: no convergence in " +
                        std::to_string(opts.max_iters) + " iterations");
}

}  // namespace glab

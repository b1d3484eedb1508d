#pragma once
#include <vector>

#include "glab/extension.hpp"
#include "glab/group.hpp"
#include "glab/transfer.hpp"

namespace glab {

// Abelian tilt directions: one integer vector per (state, symbol), the
// abelianized label of that symbol.
using TiltDirections = SkewLabeling<LatticeGroup>;

struct TiltedPressure {
  double value = 0.0;
  FiberEigenData eig;
};

// P(xi) = pressure of phi + <xi, ab(psi(x_0))>.
TiltedPressure tilted_pressure(const RandomSFT& sft,
                               const LocallyConstantPotential& phi,
                               const TiltDirections& dirs, int dim,
                               const std::vector<double>& xi,
                               const RuelleOptions& opts = {});

struct DescentOptions {
  double grad_tol = 1e-7;
  int max_iters = 500;
  double fd_step = 1e-4;       // central-difference step for the gradient
  double divergence_radius = 30.0;
  RuelleOptions ruelle;
};

struct DescentTrace {
  std::vector<int> iter;
  std::vector<std::vector<double>> xi;
  std::vector<double> value;
  std::vector<double> grad_norm;
};

struct DescentResult {
  std::vector<double> xi;      // minimizer of P(xi)
  double value = 0.0;          // inf_xi P(xi)
  double grad_norm = 0.0;
  int iterations = 0;
  DescentTrace trace;
};

// Central-difference gradient of the tilted pressure; by pressure
// differentiability this is the mean label drift of the equilibrium
// state at xi.
std::vector<double> equilibrium_drift(const RandomSFT& sft,
                                      const LocallyConstantPotential& phi,
                                      const TiltDirections& dirs, int dim,
                                      const std::vector<double>& xi,
                                      double fd_step = 1e-4,
                                      const RuelleOptions& opts = {});

// Armijo backtracking gradient descent on the tilted pressure. Throws
// EstimationError("infimum not attained...") if the iterate escapes the
// divergence radius, and if the gradient fails to reach tolerance.
DescentResult minimize_pressure(const RandomSFT& sft,
                                const LocallyConstantPotential& phi,
                                const TiltDirections& dirs, int dim,
                                const std::vector<double>& xi0,
                                const DescentOptions& opts = {});

}  // namespace glab

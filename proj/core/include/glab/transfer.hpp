#pragma once
#include <span>
#include <vector>

#include "glab/cylinder.hpp"
#include "glab/potential.hpp"
#include "glab/sft.hpp"

namespace glab {

// One real vector per environment state, indexed by depth-d cylinders.
struct FiberVector {
  int depth = 1;
  std::vector<std::vector<double>> v;  // [state][cylinder]
};

FiberVector ones_vector(const CylinderSpace& cs, const RandomSFT& sft);

// (L_omega v)(x) = sum over one-step preimages y of e^{phi(y)} v(y),
// mapping the fiber at `state` to the fiber at the next state. `out`
// is indexed by the target fiber's cylinders.
void apply_base_operator(const RandomSFT& sft,
                         const LocallyConstantPotential& phi,
                         const CylinderSpace& cs, int state,
                         std::span<const double> in, std::vector<double>& out);

struct FiberEigenData {
  int depth = 1;
  std::vector<double> lambda;                 // per-state step factors
  std::vector<std::vector<double>> h;         // right eigenfunctions, sup-norm 1
  std::vector<std::vector<double>> nu;        // conformal functionals, <h,nu> = 1
  double pressure = 0.0;                      // average of log lambda
  int iterations = 0;
  double residual = 0.0;
};

struct RuelleOptions {
  double tol = 1e-12;
  int max_cycles = 10'000;
};

// Projective power iteration over one full environment cycle. Throws
// MixingError if the cycle operator has a zero row/column structure that
// stalls the iteration, EstimationError if it fails to converge.
FiberEigenData fiber_ruelle(const RandomSFT& sft,
                            const LocallyConstantPotential& phi,
                            const RuelleOptions& opts = {});

// Exact mass of the cylinder [w_0..w_{k-1}] at `state` under the
// eigendata's Gibbs measure. Requires phi.range() <= depth + 1.
double cylinder_mass(const RandomSFT& sft, const LocallyConstantPotential& phi,
                     const FiberEigenData& eig, int state,
                     std::span<const int> word);

// phi_0 = phi + log h - log h(shifted) - log lambda, normalized so the
// transfer operator fixes the constant function 1.
LocallyConstantPotential normalize_potential(const RandomSFT& sft,
                                             const LocallyConstantPotential& phi,
                                             const FiberEigenData& eig);

struct GibbsReport {
  double constant = 1.0;    // sup of max(R, 1/R) over sampled cylinders
  double worst_ratio = 1.0; // the ratio attaining it
  int worst_state = 0;
  std::vector<int> worst_word;
  long long cylinders_checked = 0;
};

// Scan all admissible words up to max_len at every state, comparing
// Lambda_n * mass([w]) to exp(sup S_n phi) on the cylinder. per_length,
// if given, receives {min ratio, max ratio, words} per word length.
GibbsReport gibbs_check(const RandomSFT& sft,
                        const LocallyConstantPotential& phi,
                        const FiberEigenData& eig, int max_len,
                        long long budget = 2'000'000,
                        std::vector<std::vector<double>>* per_length = nullptr);

}  // namespace glab

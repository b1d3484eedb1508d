#pragma once
#include <vector>

namespace glab {

// Finite driving system (Omega, theta, P): a set of states {0..period-1},
// an invertible shift given as a permutation, and invariant weights.
// Ergodicity of the model requires the permutation to be a single cycle,
// which together with invariance forces the weights to be uniform; both
// properties are checked by validate_environment.
struct Environment {
  int period = 1;
  std::vector<double> weights;  // P({s}), positive, sum 1, shift-invariant
  std::vector<int> shift;       // s -> theta(s)
  std::vector<int> shift_inv;   // s -> theta^{-1}(s)

  int next(int s) const { return shift[s]; }
  int prev(int s) const { return shift_inv[s]; }

  // theta^n(s) for any integer n (negative allowed).
  int state_after(int s, long long n) const;
};

// The canonical period-m environment: cycle 0 -> 1 -> ... -> m-1 -> 0 with
// uniform weights 1/m. period = 1 gives a single fixed point.
Environment build_cyclic_environment(int period);

// Throws std::invalid_argument if the shift is not a single-cycle
// permutation, weights are not a shift-invariant probability vector, or
// sizes disagree.
void validate_environment(const Environment& env);

}  // namespace glab

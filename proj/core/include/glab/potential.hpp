#pragma once
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "glab/sft.hpp"

namespace glab {

// Locally constant potential of range r: phi(state, x) depends on the first
// r coordinates of x. Values are stored in natural-log scale on admissible
// r-words per state. range 0 means one constant per state.
class LocallyConstantPotential {
 public:
  struct Entry {
    int state;
    std::vector<int> word;
    double value;
  };

  LocallyConstantPotential() = default;
  // Validates that entries cover exactly the admissible r-words of every
  // state; throws std::invalid_argument otherwise.
  LocallyConstantPotential(const RandomSFT& sft, int range,
                           const std::vector<Entry>& entries);

  static LocallyConstantPotential zero(const RandomSFT& sft);

  int range() const { return range_; }
  // Looks up phi(state, w) using the first range() letters of w.
  double value(int state, std::span<const int> w) const;

  // Word key helper: 8 bits per symbol (alphabets stay <= 64 at this scale).
  static uint64_t encode(std::span<const int> w);

  const std::vector<std::unordered_map<uint64_t, double>>& tables() const {
    return table_;
  }

 private:
  int range_ = 0;
  std::vector<std::unordered_map<uint64_t, double>> table_;
};

// Birkhoff sum over the complete r-windows of w: positions i = 0..n-r for
// r >= 1 (i = 0..n-1 for r <= 1, one term per letter). n = |w| must be
// >= max(1, r).
double birkhoff_sum(const RandomSFT& sft, const LocallyConstantPotential& phi,
                    int state, std::span<const int> w);

// Exact sup of S_n phi over the cylinder [w]_state, by enumerating all
// admissible continuations of w to length n + r - 1 and maximizing the
// boundary windows. Agrees with birkhoff_sum for r <= 1.
double sup_on_cylinder(const RandomSFT& sft, const LocallyConstantPotential& phi,
                       int state, std::span<const int> w);

// V_n at a state: largest gap |phi(x) - phi(y)| over pairs agreeing on the
// first n coordinates. Zero for n >= range.
double variation(const RandomSFT& sft, const LocallyConstantPotential& phi,
                 int state, int n);

// B_1(state) = exp(sum_{k>=1} V_{k+1} at theta^{-k}(state)); the sum has at
// most range-1 nonzero terms, so this is exact.
double variation_bound(const RandomSFT& sft, const LocallyConstantPotential& phi,
                       int state);

// Stored distortion flag kappa(state) = 2^range * max_n V_n(state).
double kappa(const RandomSFT& sft, const LocallyConstantPotential& phi,
             int state);

}  // namespace glab

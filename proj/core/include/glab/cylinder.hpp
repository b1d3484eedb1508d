#pragma once
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "glab/potential.hpp"
#include "glab/sft.hpp"

namespace glab {

// Depth-d cylinder presentation of the fibers. Functions on a fiber are
// stored as vectors over the admissible d-words at that state; the transfer
// machinery and the constrained DP both walk the same successor structure.
// Depth max(1, range-1) is exact for a range-r potential: the weight of a
// transition between overlapping d-words is determined by its (d+1)-window.
struct CylinderSpace {
  int depth = 1;
  // words[s] = admissible depth-words at state s, lexicographically sorted
  std::vector<std::vector<std::vector<int>>> words;
  std::vector<std::unordered_map<uint64_t, int>> index;  // encoded word -> idx
  // succ[s][i] = (index at next state, appended symbol) pairs, sorted
  std::vector<std::vector<std::vector<std::pair<int, int>>>> succ;
  std::vector<std::vector<int>> first_symbol;  // words[s][i][0]
  std::vector<std::vector<int>> last_symbol;   // words[s][i].back()

  int count(int state) const { return static_cast<int>(words[state].size()); }
};

CylinderSpace build_cylinder_space(const RandomSFT& sft, int depth);

inline int representation_depth(const LocallyConstantPotential& phi) {
  return phi.range() <= 2 ? 1 : phi.range() - 1;
}

// Weight exponent of the DP/transfer edge from word i at `state` to its
// successor obtained by appending `symbol`: phi evaluated on the first
// range letters of (word, symbol). For range <= 1 this is phi at the
// appended symbol's own fiber.
double edge_weight_log(const RandomSFT& sft, const LocallyConstantPotential& phi,
                       const CylinderSpace& cs, int state, int word_idx,
                       int symbol);

// Weight exponent of the same edge under the transfer-operator convention,
// where each step carries phi evaluated at its source point. Identical to
// edge_weight_log for range >= 2; for range <= 1 the value is phi at the
// source word's own fiber, so that operator products accumulate exactly
// S_n phi along source positions.
double op_weight_log(const RandomSFT& sft, const LocallyConstantPotential& phi,
                     const CylinderSpace& cs, int state, int word_idx,
                     int symbol);

// sup over admissible continuations of the trailing windows that a word
// ending with this depth-word still leaves open; identically 0 for
// range <= 1. Used to close partition sums at the word boundary.
double boundary_sup_log(const RandomSFT& sft, const LocallyConstantPotential& phi,
                        const CylinderSpace& cs, int state, int word_idx);

// Precomputed boundary table: [state][word_idx].
std::vector<std::vector<double>> boundary_sup_table(
    const RandomSFT& sft, const LocallyConstantPotential& phi,
    const CylinderSpace& cs);

}  // namespace glab

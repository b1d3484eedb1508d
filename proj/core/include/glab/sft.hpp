#pragma once
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "glab/environment.hpp"

namespace glab {

using BigCount = boost::multiprecision::cpp_int;

// Dense 0/1 transition matrix between consecutive fiber alphabets.
struct BitMatrix {
  int rows = 0, cols = 0;
  std::vector<uint8_t> a;

  BitMatrix() = default;
  BitMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
  uint8_t at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  void set(int i, int j, uint8_t v) { a[static_cast<size_t>(i) * cols + j] = v; }
};

// Random shift of finite type over a finite driving environment.
// alphabet[s] = l(s) is the fiber alphabet size at state s; matrix[s] has
// shape l(s) x l(theta s) and row i / column j tell which transitions
// i -> j are admissible between the fiber at s and the fiber at theta(s).
struct RandomSFT {
  Environment env;
  std::vector<int> alphabet;
  std::vector<BitMatrix> matrix;

  int states() const { return env.period; }
};

// Full shift on k symbols over the canonical period-m environment (all-ones
// matrices). With per-state sizes, the alternating-alphabet systems.
RandomSFT build_full_shift(int period, int symbols);
RandomSFT build_full_shift(const std::vector<int>& alphabets);
// Single-state SFT from one square 0/1 matrix.
RandomSFT build_sft_from_matrix(const std::vector<std::vector<int>>& m);

struct SftViolation {
  int state;
  enum Kind { DeadRow, DeadColumn } kind;
  int index;  // offending row or column
  std::string message;
};

// Structural problems (shape mismatch against the environment, alphabet
// size < 2) throw std::invalid_argument naming the offending state; the
// returned list is empty iff every fiber matrix has a 1 in each row and
// each column.
std::vector<SftViolation> validate_sft(const RandomSFT& sft);

// Iteratively deletes dead rows/columns until validate_sft is clean.
// remap, if given, receives per-state old-symbol -> new-symbol maps
// (-1 for deleted). Throws if some fiber empties out.
RandomSFT prune_sft(const RandomSFT& sft,
                    std::vector<std::vector<int>>* remap = nullptr);

// |W^n_{a,b}(state)|: admissible words (x_0..x_{n-1}) with x_0 = a whose
// final symbol admits the transition into b at theta^{n-1}(state). Equals
// the (a,b) entry of the orbit-ordered product of the fiber matrices.
// Counts are computed in 64-bit arithmetic and recomputed in arbitrary
// precision if that overflows.
BigCount count_admissible(const RandomSFT& sft, int state, int n, int a, int b);

// Smallest N0 <= n_max such that every n in [N0, n_max] has an entrywise
// positive n-step product for every state; nullopt when no such N0 exists.
std::optional<int> check_topological_mixing(const RandomSFT& sft, int n_max);

// Times n >= 1 (up to the horizon) at which symbol a exists in the fiber
// at theta^n(state), listed per state. Kac: the weighted mean of the first
// entry over states whose own fiber contains a equals 1 / P(Omega_a).
struct ReturnTimes {
  int symbol = 0;
  int horizon = 0;
  std::vector<std::vector<int>> times;  // per state, increasing
};
ReturnTimes return_times(const RandomSFT& sft, int symbol, int horizon);

// Word helpers shared by oracles, cylinder enumeration and the Gibbs scan.
bool word_admissible(const RandomSFT& sft, int state, std::span<const int> w);
// All admissible words of length len from `state`; with first >= 0 only
// words starting with that symbol. Lexicographic order.
std::vector<std::vector<int>> admissible_words(const RandomSFT& sft, int state,
                                               int len, int first = -1);

}  // namespace glab

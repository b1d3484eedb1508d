#include "glab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "glab/numerics.hpp"

namespace glab {

uint64_t LocallyConstantPotential::encode(std::span<const int> w) {
  uint64_t key = 1;  // leading 1 keeps different lengths distinct
  for (int c : w) key = (key << 8) | static_cast<uint8_t>(c);
  return key;
}

LocallyConstantPotential::LocallyConstantPotential(
    const RandomSFT& sft, int range, const std::vector<Entry>& entries)
    : range_(range) {
  if (range < 0) throw std::invalid_argument("potential: negative range");
  table_.resize(sft.states());
  for (const auto& e : entries) {
    if (e.state < 0 || e.state >= sft.states())
      throw std::invalid_argument("potential: entry names state " +
                                  std::to_string(e.state));
    if (static_cast<int>(e.word.size()) != range)
      throw std::invalid_argument("potential: entry word length != range at state " +
                                  std::to_string(e.state));
    if (!std::isfinite(e.value))
      throw std::invalid_argument("potential: non-finite value");
    if (range > 0 && !word_admissible(sft, e.state, e.word))
      throw std::invalid_argument("potential: inadmissible entry word at state " +
                                  std::to_string(e.state));
    if (!table_[e.state].emplace(encode(e.word), e.value).second)
      throw std::invalid_argument("potential: duplicate entry at state " +
                                  std::to_string(e.state));
  }
  // Exact cover: every admissible range-word of every state has a value.
  for (int s = 0; s < sft.states(); ++s) {
    size_t expect = range == 0 ? 1 : admissible_words(sft, s, range).size();
    if (table_[s].size() != expect)
      throw std::invalid_argument(
          "potential: state " + std::to_string(s) + " covers " +
          std::to_string(table_[s].size()) + " words, needs " +
          std::to_string(expect));
  }
}

LocallyConstantPotential LocallyConstantPotential::zero(const RandomSFT& sft) {
  std::vector<Entry> entries;
  for (int s = 0; s < sft.states(); ++s) entries.push_back({s, {}, 0.0});
  return LocallyConstantPotential(sft, 0, entries);
}

double LocallyConstantPotential::value(int state, std::span<const int> w) const {
  if (static_cast<int>(w.size()) < range_)
    throw std::invalid_argument("potential: word shorter than range");
  auto key = encode(w.subspan(0, range_));
  auto it = table_[state].find(key);
  if (it == table_[state].end())
    throw std::invalid_argument("potential: no value for word at state " +
                                std::to_string(state));
  return it->second;
}

double birkhoff_sum(const RandomSFT& sft, const LocallyConstantPotential& phi,
                    int state, std::span<const int> w) {
  int n = static_cast<int>(w.size());
  int r = phi.range();
  if (n < std::max(1, r))
    throw std::invalid_argument("birkhoff_sum: word shorter than max(1, range)");
  if (!word_admissible(sft, state, w))
    throw std::invalid_argument("birkhoff_sum: inadmissible word");
  int terms = r <= 1 ? n : n - r + 1;
  double acc = 0.0;
  int s = state;
  for (int i = 0; i < terms; ++i) {
    acc += phi.value(s, w.subspan(i));
    s = sft.env.next(s);
  }
  return acc;
}

double sup_on_cylinder(const RandomSFT& sft, const LocallyConstantPotential& phi,
                       int state, std::span<const int> w) {
  int n = static_cast<int>(w.size());
  int r = phi.range();
  if (n < 1) throw std::invalid_argument("sup_on_cylinder: empty word");
  if (!word_admissible(sft, state, w))
    throw std::invalid_argument("sup_on_cylinder: inadmissible word");
  // Common prefix part: all windows fully inside w.
  double head = 0.0;
  int s = state;
  int full = r <= 1 ? n : std::max(0, n - r + 1);
  for (int i = 0; i < full; ++i) {
    head += phi.value(s, w.subspan(i));
    s = sft.env.next(s);
  }
  if (r <= 1) return head;
  // Boundary part: maximize the last min(r-1, n) windows over admissible
  // continuations of w to length n + r - 1.
  int tail_start = full;  // first window index not fully inside w
  int need = r - 1;       // extra letters
  std::vector<int> ext(w.begin(), w.end());
  ext.resize(n + need);
  double best = kNegInf;
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == n + need) {
      double tail = 0.0;
      int t = sft.env.state_after(state, tail_start);
      for (int i = tail_start; i < n; ++i) {
        tail += phi.value(t, std::span<const int>(ext).subspan(i));
        t = sft.env.next(t);
      }
      best = std::max(best, tail);
      return;
    }
    int s_here = sft.env.state_after(state, pos);
    int s_prev = sft.env.prev(s_here);
    for (int c = 0; c < sft.alphabet[s_here]; ++c) {
      if (!sft.matrix[s_prev].at(ext[pos - 1], c)) continue;
      ext[pos] = c;
      self(self, pos + 1);
    }
  };
  rec(rec, n);
  if (best == kNegInf)
    throw std::invalid_argument("sup_on_cylinder: no admissible continuation");
  return head + best;
}

double variation(const RandomSFT& sft, const LocallyConstantPotential& phi,
                 int state, int n) {
  int r = phi.range();
  if (n >= r) return 0.0;
  // Largest spread of phi over admissible r-words sharing a prefix of
  // length n (n = 0 compares everything in the fiber).
  double worst = 0.0;
  auto words = admissible_words(sft, state, r);
  std::sort(words.begin(), words.end());
  size_t i = 0;
  while (i < words.size()) {
    size_t j = i;
    while (j < words.size() &&
           std::equal(words[i].begin(), words[i].begin() + n, words[j].begin()))
      ++j;
    double lo = phi.value(state, words[i]), hi = lo;
    for (size_t k = i; k < j; ++k) {
      double v = phi.value(state, words[k]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst = std::max(worst, hi - lo);
    i = j;
  }
  return worst;
}

double variation_bound(const RandomSFT& sft, const LocallyConstantPotential& phi,
                       int state) {
  int r = phi.range();
  double acc = 0.0;
  int s = state;
  for (int k = 1; k <= r - 1; ++k) {
    s = sft.env.prev(s);  // theta^{-k}(state)
    acc += variation(sft, phi, s, k + 1);
  }
  return std::exp(acc);
}

double kappa(const RandomSFT& sft, const LocallyConstantPotential& phi,
             int state) {
  int r = phi.range();
  double worst = 0.0;
  for (int n = 0; n < r; ++n)
    worst = std::max(worst, variation(sft, phi, state, n));
  return std::ldexp(worst, r);  // 2^range * max_n V_n
}

}  // namespace glab

#include "glab/cylinder.hpp"

#include <algorithm>
#include <stdexcept>

#include "glab/numerics.hpp"

namespace glab {

CylinderSpace build_cylinder_space(const RandomSFT& sft, int depth) {
  if (depth < 1) throw std::invalid_argument("cylinder space: depth must be >= 1");
  CylinderSpace cs;
  cs.depth = depth;
  int m = sft.states();
  cs.words.resize(m);
  cs.index.resize(m);
  cs.succ.resize(m);
  cs.first_symbol.resize(m);
  cs.last_symbol.resize(m);
  for (int s = 0; s < m; ++s) {
    cs.words[s] = admissible_words(sft, s, depth);
    for (size_t i = 0; i < cs.words[s].size(); ++i) {
      cs.index[s].emplace(LocallyConstantPotential::encode(cs.words[s][i]),
                          static_cast<int>(i));
      cs.first_symbol[s].push_back(cs.words[s][i].front());
      cs.last_symbol[s].push_back(cs.words[s][i].back());
    }
  }
  for (int s = 0; s < m; ++s) {
    int t = sft.env.next(s);
    int edge_state = sft.env.state_after(s, depth - 1);  // fiber of last letter
    int new_state = sft.env.next(edge_state);            // fiber of appended letter
    cs.succ[s].resize(cs.words[s].size());
    for (size_t i = 0; i < cs.words[s].size(); ++i) {
      const auto& w = cs.words[s][i];
      for (int c = 0; c < sft.alphabet[new_state]; ++c) {
        if (!sft.matrix[edge_state].at(w.back(), c)) continue;
        std::vector<int> nw(w.begin() + 1, w.end());
        nw.push_back(c);
        auto it = cs.index[t].find(LocallyConstantPotential::encode(nw));
        if (it == cs.index[t].end()) continue;  // cannot happen on valid input
        cs.succ[s][i].emplace_back(it->second, c);
      }
    }
  }
  return cs;
}

double edge_weight_log(const RandomSFT& sft, const LocallyConstantPotential& phi,
                       const CylinderSpace& cs, int state, int word_idx,
                       int symbol) {
  int r = phi.range();
  if (r <= 1) {
    int letter_state = sft.env.state_after(state, cs.depth);
    int w[1] = {symbol};
    return phi.value(letter_state, w);
  }
  std::vector<int> win = cs.words[state][word_idx];
  win.push_back(symbol);
  return phi.value(state, win);
}

double op_weight_log(const RandomSFT& sft, const LocallyConstantPotential& phi,
                     const CylinderSpace& cs, int state, int word_idx,
                     int symbol) {
  if (phi.range() >= 2)
    return edge_weight_log(sft, phi, cs, state, word_idx, symbol);
  return phi.value(state, cs.words[state][word_idx]);
}

double boundary_sup_log(const RandomSFT& sft, const LocallyConstantPotential& phi,
                        const CylinderSpace& cs, int state, int word_idx) {
  int r = phi.range();
  if (r <= 1) return 0.0;
  const auto& u = cs.words[state][word_idx];
  int d = cs.depth;  // >= r - 1
  std::vector<int> e(u.begin(), u.end());
  e.resize(d + r - 1);
  double best = kNegInf;
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == d + r - 1) {
      // Every window that starts inside the word: the DP edges stop at the
      // word's first letter, so the d windows anchored here close the sum.
      double acc = 0.0;
      int t = state;
      for (int j = 0; j <= d - 1; ++j) {
        acc += phi.value(t, std::span<const int>(e).subspan(j));
        t = sft.env.next(t);
      }
      best = std::max(best, acc);
      return;
    }
    int s_here = sft.env.state_after(state, pos);
    int s_prev = sft.env.prev(s_here);
    for (int c = 0; c < sft.alphabet[s_here]; ++c) {
      if (!sft.matrix[s_prev].at(e[pos - 1], c)) continue;
      e[pos] = c;
      self(self, pos + 1);
    }
  };
  rec(rec, d);
  if (best == kNegInf)
    throw std::invalid_argument("boundary sup: no admissible continuation");
  return best;
}

std::vector<std::vector<double>> boundary_sup_table(
    const RandomSFT& sft, const LocallyConstantPotential& phi,
    const CylinderSpace& cs) {
  std::vector<std::vector<double>> out(sft.states());
  for (int s = 0; s < sft.states(); ++s) {
    out[s].resize(cs.words[s].size());
    for (size_t i = 0; i < cs.words[s].size(); ++i)
      out[s][i] = boundary_sup_log(sft, phi, cs, s, static_cast<int>(i));
  }
  return out;
}

}  // namespace glab

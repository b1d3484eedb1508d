#pragma once
#include <algorithm>
#include <climits>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "glab/cylinder.hpp"
#include "glab/errors.hpp"
#include "glab/group.hpp"
#include "glab/numerics.hpp"
#include "glab/potential.hpp"
#include "glab/sft.hpp"

namespace glab {

// Per-symbol group labels: psi(state, x) depends on x_0 only.
template <GroupLike G>
struct SkewLabeling {
  std::vector<std::vector<typename G::Element>> label;  // [state][symbol]

  const typename G::Element& of(int state, int symbol) const {
    return label[state][symbol];
  }
};

template <GroupLike G>
SkewLabeling<G> trivial_labeling(const RandomSFT& sft, const G& group) {
  SkewLabeling<G> l;
  l.label.resize(sft.states());
  for (int s = 0; s < sft.states(); ++s)
    l.label[s].assign(sft.alphabet[s], group.identity());
  return l;
}

template <GroupLike G>
void validate_labeling(const RandomSFT& sft, const SkewLabeling<G>& psi) {
  if (static_cast<int>(psi.label.size()) != sft.states())
    throw std::invalid_argument("labeling: state count mismatch");
  for (int s = 0; s < sft.states(); ++s)
    if (static_cast<int>(psi.label[s].size()) != sft.alphabet[s])
      throw std::invalid_argument("labeling: symbol count mismatch at state " +
                                  std::to_string(s));
}

template <GroupLike G>
SkewLabeling<typename G::Ab> abelianize_labeling(const G& group,
                                                 const SkewLabeling<G>& psi) {
  SkewLabeling<typename G::Ab> out;
  out.label.resize(psi.label.size());
  for (size_t s = 0; s < psi.label.size(); ++s)
    for (const auto& e : psi.label[s]) out.label[s].push_back(group.abelianize(e));
  return out;
}

// psi^n along a word: left-to-right product of the letter labels read at
// the fiber each letter lives in.
template <GroupLike G>
typename G::Element cocycle(const G& group, const SkewLabeling<G>& psi,
                            const RandomSFT& sft, int state,
                            std::span<const int> word) {
  auto g = group.identity();
  int s = state;
  for (int x : word) {
    g = group.mul(g, psi.of(s, x));
    s = sft.env.next(s);
  }
  return g;
}

struct DpOptions {
  int truncation = INT_MAX;            // ball radius for group elements
  size_t state_budget = 50'000'000;    // max live (cylinder, element) cells
  bool exact_counts = true;            // carry word counts alongside weights
};

// Per-n results of one constrained DP sweep. log_z[i] is
// log Z~_{ns[i]}(phi, a, b, target); -inf marks empty word sets.
template <GroupLike G>
struct ConstrainedSeries {
  int state = 0, a = 0, b = 0;
  typename G::Element target;
  std::vector<int> ns;
  std::vector<double> log_z;
  std::vector<BigCount> counts;      // exact word counts (weight-independent)
  std::vector<double> leak_log;      // log-mass dropped at the ball boundary
  bool count_overflow = false;       // true only if promotion also failed
  size_t peak_cells = 0;
};

namespace detail {

template <GroupLike G, class CountT>
struct DpCell {
  double logw = kNegInf;
  CountT cnt = 0;
};

template <class CountT>
inline bool add_count(CountT& into, const CountT& v) {
  if constexpr (std::is_same_v<CountT, uint64_t>) {
    return !__builtin_add_overflow(into, v, &into);
  } else {
    into += v;
    return true;
  }
}

// One forward sweep with readouts at every n in [1, n_max].
// a < 0 seeds every first symbol; b < 0 drops the endpoint constraint;
// collect_reachable switches the readout to key collection.
template <GroupLike G, class CountT>
void run_dp(const RandomSFT& sft, const LocallyConstantPotential& phi,
            const SkewLabeling<G>& psi, const G& group, int state, int a,
            int b, const typename G::Element& target, int n_max,
            const DpOptions& opts, ConstrainedSeries<G>* series,
            bool* overflow,
            std::vector<std::vector<typename G::Element>>* reachable) {
  using Elem = typename G::Element;
  using Cell = DpCell<G, CountT>;
  using CellMap = std::unordered_map<Elem, Cell, typename G::Hash>;

  const int d = representation_depth(phi);
  const int r = phi.range();
  CylinderSpace cs = build_cylinder_space(sft, d);
  std::vector<std::vector<double>> bsup = boundary_sup_table(sft, phi, cs);

  // Small-n fallback: words shorter than the cylinder depth are enumerated
  // directly (only possible for range >= 3 potentials).
  auto enumerate_small = [&](int n) {
    std::vector<double> terms;
    BigCount cnt = 0;
    std::vector<Elem> keys;
    int bstate = sft.env.state_after(state, n);
    int tstate = sft.env.state_after(state, n - 1);
    for (const auto& w : admissible_words(sft, state, n, a)) {
      if (b >= 0) {
        if (b >= sft.alphabet[bstate]) continue;
        if (!sft.matrix[tstate].at(w.back(), b)) continue;
      }
      Elem g = cocycle(group, psi, sft, state, w);
      if (reachable) {
        keys.push_back(g);
        continue;
      }
      if (!(g == target)) continue;
      terms.push_back(sup_on_cylinder(sft, phi, state, w));
      cnt += 1;
    }
    if (reachable) {
      std::sort(keys.begin(), keys.end(),
                [&](const Elem& x, const Elem& y) { return group.less(x, y); });
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      (*reachable)[n - 1] = std::move(keys);
      return;
    }
    series->ns.push_back(n);
    series->log_z.push_back(logsumexp(terms));
    series->counts.push_back(cnt);
    series->leak_log.push_back(kNegInf);
  };

  std::vector<CellMap> layer(cs.count(state));
  // Seed with the admissible depth-d prefixes.
  {
    for (int i = 0; i < cs.count(state); ++i) {
      const auto& word = cs.words[state][i];
      if (a >= 0 && word[0] != a) continue;
      Elem g = cocycle(group, psi, sft, state,
                       std::span<const int>(word.data(), word.size()));
      double w0 = r <= 1 ? phi.value(state, word) : 0.0;
      if (group.word_length(g) > opts.truncation) continue;  // seeded outside
      auto& cell = layer[i][g];
      cell.logw = logaddexp(cell.logw, w0);
      if (!add_count<CountT>(cell.cnt, CountT(1))) *overflow = true;
    }
  }

  double leak = kNegInf;
  int cur_state = state;  // gram state of the current layer
  for (int len = d; len <= n_max; ++len) {
    // Readout at n = len.
    if (len >= 1) {
      for (int n = (len == d ? 1 : len); n <= len; ++n)
        if (n < d) enumerate_small(n);
      int bstate = sft.env.state_after(state, len);
      int tstate = sft.env.state_after(state, len - 1);
      bool b_ok = b < 0 || b < sft.alphabet[bstate];
      if (reachable) {
        std::vector<Elem> keys;
        for (int i = 0; i < cs.count(cur_state); ++i)
          for (const auto& [g, cell] : layer[i]) keys.push_back(g);
        std::sort(keys.begin(), keys.end(),
                  [&](const Elem& x, const Elem& y) { return group.less(x, y); });
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        (*reachable)[len - 1] = std::move(keys);
      } else {
        std::vector<double> terms;
        BigCount cnt = 0;
        if (b_ok) {
          for (int i = 0; i < cs.count(cur_state); ++i) {
            if (b >= 0 && !sft.matrix[tstate].at(cs.last_symbol[cur_state][i], b))
              continue;
            auto it = layer[i].find(target);
            if (it == layer[i].end()) continue;
            terms.push_back(it->second.logw + bsup[cur_state][i]);
            cnt += BigCount(it->second.cnt);
          }
        }
        series->ns.push_back(len);
        series->log_z.push_back(logsumexp(terms));
        series->counts.push_back(cnt);
        series->leak_log.push_back(leak);
      }
    }
    if (len == n_max) break;

    // Advance one letter.
    int next_state = sft.env.next(cur_state);
    int letter_state = sft.env.state_after(cur_state, d);
    std::vector<CellMap> next(cs.count(next_state));
    size_t cells = 0;
    for (int i = 0; i < cs.count(cur_state); ++i) {
      for (const auto& [j, c] : cs.succ[cur_state][i]) {
        double ew = edge_weight_log(sft, phi, cs, cur_state, i, c);
        const Elem& step = psi.of(letter_state, c);
        for (const auto& [g, cell] : layer[i]) {
          Elem g2 = group.mul(g, step);
          if (group.word_length(g2) > opts.truncation) {
            leak = logaddexp(leak, cell.logw + ew);
            continue;
          }
          auto& tgt = next[j][g2];
          if (tgt.cnt == 0 && tgt.logw == kNegInf) ++cells;
          tgt.logw = logaddexp(tgt.logw, cell.logw + ew);
          if (!add_count<CountT>(tgt.cnt, cell.cnt)) *overflow = true;
        }
      }
    }
    if (cells > opts.state_budget)
      throw BudgetError("constrained DP exceeded the state budget: " +
                        std::to_string(cells) + " live cells at n = " +
                        std::to_string(len + 1) + " (budget " +
                        std::to_string(opts.state_budget) + ")");
    if (series) series->peak_cells = std::max(series->peak_cells, cells);
    layer = std::move(next);
    cur_state = next_state;
  }
}

}  // namespace detail

// Full constrained partition series: log Z~_n(phi, a, b, target) for
// n = 1..n_max. Counts are exact; 64-bit first, arbitrary precision rerun
// if that overflows.
template <GroupLike G>
ConstrainedSeries<G> constrained_series(const RandomSFT& sft,
                                        const LocallyConstantPotential& phi,
                                        const SkewLabeling<G>& psi,
                                        const G& group, int state, int a,
                                        int b,
                                        const typename G::Element& target,
                                        int n_max,
                                        const DpOptions& opts = {}) {
  if (n_max < 1) throw std::invalid_argument("constrained_series: n_max < 1");
  if (state < 0 || state >= sft.states())
    throw std::invalid_argument("constrained_series: bad state");
  if (a >= sft.alphabet[state])
    throw std::invalid_argument("constrained_series: symbol a = " +
                                std::to_string(a) + " not in fiber at state " +
                                std::to_string(state));
  validate_labeling(sft, psi);
  ConstrainedSeries<G> out;
  out.state = state;
  out.a = a;
  out.b = b;
  out.target = target;
  bool overflow = false;
  detail::run_dp<G, uint64_t>(sft, phi, psi, group, state, a, b, target, n_max,
                              opts, &out, &overflow, nullptr);
  if (overflow && opts.exact_counts) {
    ConstrainedSeries<G> big;
    big.state = state;
    big.a = a;
    big.b = b;
    big.target = target;
    bool of2 = false;
    detail::run_dp<G, BigCount>(sft, phi, psi, group, state, a, b, target,
                                n_max, opts, &big, &of2, nullptr);
    big.count_overflow = false;
    return big;
  }
  out.count_overflow = overflow;
  return out;
}

template <GroupLike G>
double constrained_partition(const RandomSFT& sft,
                             const LocallyConstantPotential& phi,
                             const SkewLabeling<G>& psi, const G& group,
                             int state, int n, int a, int b,
                             const typename G::Element& target,
                             const DpOptions& opts = {}) {
  int bstate = sft.env.state_after(state, n);
  if (b < 0 || b >= sft.alphabet[bstate])
    throw std::invalid_argument("constrained_partition: symbol b = " +
                                std::to_string(b) + " not in fiber at state " +
                                std::to_string(bstate));
  auto series =
      constrained_series(sft, phi, psi, group, state, a, b, target, n, opts);
  return series.log_z.back();
}

// Unconstrained log Z_n(phi, a, b): same DP with the trivial group.
double partition_function(const RandomSFT& sft,
                          const LocallyConstantPotential& phi, int state,
                          int n, int a, int b, const DpOptions& opts = {});

// Set of psi^n values over all admissible n-words from the state, in
// canonical group order.
template <GroupLike G>
std::vector<typename G::Element> reachable_group_elements(
    const RandomSFT& sft, const SkewLabeling<G>& psi, const G& group,
    int state, int n, const DpOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("reachable_group_elements: n < 1");
  validate_labeling(sft, psi);
  std::vector<std::vector<typename G::Element>> keys(n);
  bool overflow = false;
  detail::run_dp<G, uint64_t>(sft, LocallyConstantPotential::zero(sft), psi,
                              group, state, -1, -1, group.identity(), n, opts,
                              nullptr, &overflow, &keys);
  return keys[n - 1];
}

}  // namespace glab

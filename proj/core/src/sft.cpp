#include "glab/sft.hpp"

#include <algorithm>
#include <stdexcept>

namespace glab {

RandomSFT build_full_shift(int period, int symbols) {
  return build_full_shift(std::vector<int>(period, symbols));
}

RandomSFT build_full_shift(const std::vector<int>& alphabets) {
  RandomSFT sft;
  sft.env = build_cyclic_environment(static_cast<int>(alphabets.size()));
  sft.alphabet = alphabets;
  sft.matrix.resize(alphabets.size());
  for (size_t s = 0; s < alphabets.size(); ++s) {
    int rows = alphabets[s];
    int cols = alphabets[sft.env.next(static_cast<int>(s))];
    BitMatrix m(rows, cols);
    std::fill(m.a.begin(), m.a.end(), 1);
    sft.matrix[s] = std::move(m);
  }
  return sft;
}

RandomSFT build_sft_from_matrix(const std::vector<std::vector<int>>& m) {
  RandomSFT sft;
  sft.env = build_cyclic_environment(1);
  int n = static_cast<int>(m.size());
  sft.alphabet = {n};
  BitMatrix b(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(m[i].size()) != n)
      throw std::invalid_argument("sft: matrix is not square");
    for (int j = 0; j < n; ++j) b.set(i, j, m[i][j] ? 1 : 0);
  }
  sft.matrix = {std::move(b)};
  return sft;
}

std::vector<SftViolation> validate_sft(const RandomSFT& sft) {
  validate_environment(sft.env);
  int m = sft.states();
  if (static_cast<int>(sft.alphabet.size()) != m ||
      static_cast<int>(sft.matrix.size()) != m)
    throw std::invalid_argument("sft: field sizes disagree with environment");
  for (int s = 0; s < m; ++s) {
    if (sft.alphabet[s] < 2)
      throw std::invalid_argument("sft: alphabet at state " +
                                  std::to_string(s) + " has fewer than 2 symbols");
    const BitMatrix& a = sft.matrix[s];
    if (a.rows != sft.alphabet[s] || a.cols != sft.alphabet[sft.env.next(s)])
      throw std::invalid_argument("sft: matrix shape mismatch at state " +
                                  std::to_string(s));
  }

  std::vector<SftViolation> out;
  for (int s = 0; s < m; ++s) {
    const BitMatrix& a = sft.matrix[s];
    for (int i = 0; i < a.rows; ++i) {
      bool any = false;
      for (int j = 0; j < a.cols; ++j) any = any || a.at(i, j);
      if (!any)
        out.push_back({s, SftViolation::DeadRow, i,
                       "dead symbol (state " + std::to_string(s) + ", symbol " +
                           std::to_string(i) + "): no forward transition"});
    }
    for (int j = 0; j < a.cols; ++j) {
      bool any = false;
      for (int i = 0; i < a.rows; ++i) any = any || a.at(i, j);
      if (!any)
        out.push_back({s, SftViolation::DeadColumn, j,
                       "unreachable symbol (state " + std::to_string(sft.env.next(s)) +
                           ", symbol " + std::to_string(j) + "): no inbound transition"});
    }
  }
  return out;
}

RandomSFT prune_sft(const RandomSFT& sft, std::vector<std::vector<int>>* remap) {
  int m = sft.states();
  std::vector<std::vector<char>> alive(m);
  for (int s = 0; s < m; ++s) alive[s].assign(sft.alphabet[s], 1);

  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < m; ++s) {
      int t = sft.env.next(s);
      const BitMatrix& a = sft.matrix[s];
      for (int i = 0; i < a.rows; ++i) {
        if (!alive[s][i]) continue;
        bool any = false;
        for (int j = 0; j < a.cols; ++j) any = any || (a.at(i, j) && alive[t][j]);
        if (!any) {
          alive[s][i] = 0;
          changed = true;
        }
      }
      for (int j = 0; j < a.cols; ++j) {
        if (!alive[t][j]) continue;
        bool any = false;
        for (int i = 0; i < a.rows; ++i) any = any || (a.at(i, j) && alive[s][i]);
        if (!any) {
          alive[t][j] = 0;
          changed = true;
        }
      }
    }
  }

  RandomSFT out;
  out.env = sft.env;
  out.alphabet.resize(m);
  std::vector<std::vector<int>> map(m);
  for (int s = 0; s < m; ++s) {
    map[s].assign(sft.alphabet[s], -1);
    int next_idx = 0;
    for (int i = 0; i < sft.alphabet[s]; ++i)
      if (alive[s][i]) map[s][i] = next_idx++;
    out.alphabet[s] = next_idx;
    if (next_idx < 2)
      throw std::invalid_argument("prune: fiber at state " + std::to_string(s) +
                                  " empties out");
  }
  out.matrix.resize(m);
  for (int s = 0; s < m; ++s) {
    int t = sft.env.next(s);
    BitMatrix b(out.alphabet[s], out.alphabet[t]);
    for (int i = 0; i < sft.alphabet[s]; ++i)
      for (int j = 0; j < sft.alphabet[t]; ++j)
        if (map[s][i] >= 0 && map[t][j] >= 0)
          b.set(map[s][i], map[t][j], sft.matrix[s].at(i, j));
    out.matrix[s] = std::move(b);
  }
  if (remap) *remap = std::move(map);
  return out;
}

namespace {

// One matrix-product step of nonnegative counts, with saturation detection.
template <class T>
std::vector<T> product_step(const BitMatrix& m, const std::vector<T>& row,
                            bool* overflow) {
  std::vector<T> out(m.cols, T(0));
  for (int i = 0; i < m.rows; ++i) {
    if (row[i] == T(0)) continue;
    for (int j = 0; j < m.cols; ++j)
      if (m.at(i, j)) {
        if constexpr (std::is_same_v<T, uint64_t>) {
          if (__builtin_add_overflow(out[j], row[i], &out[j])) *overflow = true;
        } else {
          out[j] += row[i];
        }
      }
  }
  return out;
}

template <class T>
T count_impl(const RandomSFT& sft, int state, int n, int a, int b,
             bool* overflow) {
  std::vector<T> row(sft.alphabet[state], T(0));
  row[a] = T(1);
  int s = state;
  for (int t = 0; t < n; ++t) {
    row = product_step<T>(sft.matrix[s], row, overflow);
    s = sft.env.next(s);
  }
  // After n steps the row is indexed by the fiber at theta^n(state): its
  // b entry counts words whose final transition lands on b.
  return row[b];
}

}  // namespace

BigCount count_admissible(const RandomSFT& sft, int state, int n, int a, int b) {
  if (state < 0 || state >= sft.states())
    throw std::invalid_argument("count_admissible: bad state");
  if (n < 1) throw std::invalid_argument("count_admissible: n must be >= 1");
  if (a < 0 || a >= sft.alphabet[state])
    throw std::invalid_argument("count_admissible: symbol a = " +
                                std::to_string(a) + " out of range");
  int bstate = sft.env.state_after(state, n);
  if (b < 0 || b >= sft.alphabet[bstate])
    throw std::invalid_argument("count_admissible: symbol b = " +
                                std::to_string(b) + " out of range");
  bool overflow = false;
  uint64_t fast = count_impl<uint64_t>(sft, state, n, a, b, &overflow);
  if (!overflow) return BigCount(fast);
  bool unused = false;
  return count_impl<BigCount>(sft, state, n, a, b, &unused);
}

std::optional<int> check_topological_mixing(const RandomSFT& sft, int n_max) {
  if (n_max < 1) throw std::invalid_argument("mixing: n_max must be >= 1");
  int m = sft.states();
  // Boolean-saturated products per start state; positive[n][s] says the
  // n-step product from s is entrywise positive.
  std::vector<std::vector<char>> positive(n_max + 1, std::vector<char>(m, 0));
  for (int s = 0; s < m; ++s) {
    BitMatrix prod = sft.matrix[s];
    int t = sft.env.next(s);
    for (int n = 1; n <= n_max; ++n) {
      bool all = true;
      for (uint8_t v : prod.a) all = all && v;
      positive[n][s] = all;
      if (n == n_max) break;
      const BitMatrix& nextm = sft.matrix[t];
      BitMatrix np(prod.rows, nextm.cols);
      for (int i = 0; i < prod.rows; ++i)
        for (int k = 0; k < prod.cols; ++k)
          if (prod.at(i, k))
            for (int j = 0; j < nextm.cols; ++j)
              if (nextm.at(k, j)) np.set(i, j, 1);
      prod = std::move(np);
      t = sft.env.next(t);
    }
  }
  for (int n0 = 1; n0 <= n_max; ++n0) {
    bool ok = true;
    for (int n = n0; n <= n_max && ok; ++n)
      for (int s = 0; s < m && ok; ++s) ok = positive[n][s];
    if (ok) return n0;
  }
  return std::nullopt;
}

ReturnTimes return_times(const RandomSFT& sft, int symbol, int horizon) {
  bool anywhere = false;
  for (int s = 0; s < sft.states(); ++s)
    anywhere = anywhere || symbol < sft.alphabet[s];
  if (symbol < 0 || !anywhere)
    throw std::invalid_argument("return_times: symbol " +
                                std::to_string(symbol) + " is in no fiber");
  ReturnTimes rt;
  rt.symbol = symbol;
  rt.horizon = horizon;
  rt.times.resize(sft.states());
  for (int s = 0; s < sft.states(); ++s) {
    int t = s;
    for (int n = 1; n <= horizon; ++n) {
      t = sft.env.next(t);
      if (symbol < sft.alphabet[t]) rt.times[s].push_back(n);
    }
  }
  return rt;
}

bool word_admissible(const RandomSFT& sft, int state, std::span<const int> w) {
  if (w.empty()) return false;
  int s = state;
  if (w[0] < 0 || w[0] >= sft.alphabet[s]) return false;
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    int t = sft.env.next(s);
    if (w[i + 1] < 0 || w[i + 1] >= sft.alphabet[t]) return false;
    if (!sft.matrix[s].at(w[i], w[i + 1])) return false;
    s = t;
  }
  return true;
}

std::vector<std::vector<int>> admissible_words(const RandomSFT& sft, int state,
                                               int len, int first) {
  std::vector<std::vector<int>> out;
  if (len < 1) return out;
  std::vector<int> w;
  w.reserve(len);
  auto rec = [&](auto&& self, int s, int depth) -> void {
    if (depth == len) {
      out.push_back(w);
      return;
    }
    int lo = 0, hi = sft.alphabet[s];
    if (depth == 0 && first >= 0) {
      lo = first;
      hi = first + 1;
    }
    for (int c = lo; c < hi; ++c) {
      if (depth > 0 && !sft.matrix[sft.env.prev(s)].at(w.back(), c)) continue;
      w.push_back(c);
      self(self, sft.env.next(s), depth + 1);
      w.pop_back();
    }
  };
  if (first < 0 || first < sft.alphabet[state]) rec(rec, state, 0);
  return out;
}

}  // namespace glab

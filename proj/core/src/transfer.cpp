#include "glab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "glab/errors.hpp"
#include "glab/numerics.hpp"

namespace glab {

FiberVector ones_vector(const CylinderSpace& cs, const RandomSFT& sft) {
  FiberVector v;
  v.depth = cs.depth;
  v.v.resize(sft.states());
  for (int s = 0; s < sft.states(); ++s) v.v[s].assign(cs.count(s), 1.0);
  return v;
}

void apply_base_operator(const RandomSFT& sft,
                         const LocallyConstantPotential& phi,
                         const CylinderSpace& cs, int state,
                         std::span<const double> in, std::vector<double>& out) {
  if (static_cast<int>(in.size()) != cs.count(state))
    throw std::invalid_argument("apply_base_operator: vector is not on the fiber at state " +
                                std::to_string(state));
  out.assign(cs.count(sft.env.next(state)), 0.0);
  for (int i = 0; i < cs.count(state); ++i) {
    if (in[i] == 0.0) continue;
    for (const auto& [j, c] : cs.succ[state][i])
      out[j] += std::exp(op_weight_log(sft, phi, cs, state, i, c)) * in[i];
  }
}

FiberEigenData fiber_ruelle(const RandomSFT& sft,
                            const LocallyConstantPotential& phi,
                            const RuelleOptions& opts) {
  int m = sft.states();
  CylinderSpace cs = build_cylinder_space(sft, representation_depth(phi));

  FiberEigenData eig;
  eig.depth = cs.depth;
  eig.lambda.assign(m, 1.0);
  eig.h.resize(m);
  for (int s = 0; s < m; ++s) eig.h[s].assign(cs.count(s), 1.0);

  // Sweep the operator around the environment cycle; per step, lambda is
  // the sup-norm growth with h kept sup-normalized.
  std::vector<double> tmp;
  double dist = 1.0;
  int cycle = 0;
  for (; cycle < opts.max_cycles && dist > opts.tol; ++cycle) {
    std::vector<double> prev_h0 = eig.h[0];
    int s = 0;
    for (int t = 0; t < m; ++t) {
      apply_base_operator(sft, phi, cs, s, eig.h[s], tmp);
      double top = 0.0;
      for (double x : tmp) top = std::max(top, x);
      if (top <= 0.0)
        throw MixingError("fiber eigendata: operator iterate vanished at state " +
                          std::to_string(s));
      int ns = sft.env.next(s);
      eig.lambda[s] = top;
      eig.h[ns].resize(tmp.size());
      for (size_t i = 0; i < tmp.size(); ++i) eig.h[ns][i] = tmp[i] / top;
      s = ns;
    }
    dist = 0.0;
    for (size_t i = 0; i < prev_h0.size(); ++i)
      dist = std::max(dist, std::fabs(prev_h0[i] - eig.h[0][i]));
  }
  eig.iterations = cycle;
  eig.residual = dist;
  if (dist > opts.tol)
    throw EstimationError("fiber eigendata: no convergence after " +
                          std::to_string(opts.max_cycles) +
                          " cycles, last distance " + std::to_string(dist));

  // Conformal functionals by the reversed sweep: nu(state) proportional to
  // the fiber matrix applied to nu at the next state.
  std::vector<std::vector<double>> nu(m);
  for (int s = 0; s < m; ++s) nu[s].assign(cs.count(s), 1.0);
  double ndist = 1.0;
  for (int c2 = 0; c2 < opts.max_cycles && ndist > opts.tol; ++c2) {
    std::vector<double> prev = nu[0];
    int s = 0;
    for (int t = 0; t < m; ++t) {
      int ps = sft.env.prev(s);
      // nu[ps] <- B_{ps} nu[s], normalized.
      std::vector<double> acc(cs.count(ps), 0.0);
      for (int i = 0; i < cs.count(ps); ++i)
        for (const auto& [j, c] : cs.succ[ps][i])
          acc[i] += std::exp(op_weight_log(sft, phi, cs, ps, i, c)) * nu[s][j];
      double top = 0.0;
      for (double x : acc) top = std::max(top, x);
      if (top <= 0.0)
        throw MixingError("fiber eigendata: dual iterate vanished at state " +
                          std::to_string(ps));
      for (double& x : acc) x /= top;
      nu[ps] = std::move(acc);
      s = ps;
    }
    ndist = 0.0;
    for (size_t i = 0; i < prev.size(); ++i)
      ndist = std::max(ndist, std::fabs(prev[i] - nu[0][i]));
  }
  if (ndist > opts.tol)
    throw EstimationError("fiber eigendata: dual iteration did not converge");

  // Scale so <h, nu> = 1 per state; this aligns the dual proportionality
  // constants with the primal lambdas.
  eig.nu.resize(m);
  for (int s = 0; s < m; ++s) {
    double inner = 0.0;
    for (int i = 0; i < cs.count(s); ++i) inner += eig.h[s][i] * nu[s][i];
    eig.nu[s].resize(cs.count(s));
    for (int i = 0; i < cs.count(s); ++i) eig.nu[s][i] = nu[s][i] / inner;
  }

  eig.pressure = 0.0;
  for (int s = 0; s < m; ++s)
    eig.pressure += sft.env.weights[s] * std::log(eig.lambda[s]);
  return eig;
}

namespace {

double log_mass_exact(const RandomSFT& sft, const LocallyConstantPotential& phi,
                      const CylinderSpace& cs, const FiberEigenData& eig,
                      int state, std::span<const int> word) {
  int d = cs.depth;
  int k = static_cast<int>(word.size());
  // Head cylinder value, then operator weights along the word, then the
  // conformal weight of the tail cylinder, divided by the lambdas used.
  auto head_it = cs.index[state].find(
      LocallyConstantPotential::encode(word.subspan(0, d)));
  if (head_it == cs.index[state].end())
    throw std::invalid_argument("cylinder_mass: inadmissible word");
  double acc = std::log(eig.h[state][head_it->second]);
  int s = state;
  for (int t = 0; t + d < k; ++t) {
    auto it = cs.index[s].find(
        LocallyConstantPotential::encode(word.subspan(t, d)));
    acc += op_weight_log(sft, phi, cs, s, it->second, word[t + d]);
    acc -= std::log(eig.lambda[s]);
    s = sft.env.next(s);
  }
  auto tail_it = cs.index[s].find(
      LocallyConstantPotential::encode(word.subspan(k - d, d)));
  acc += std::log(eig.nu[s][tail_it->second]);
  return acc;
}

}  // namespace

double cylinder_mass(const RandomSFT& sft, const LocallyConstantPotential& phi,
                     const FiberEigenData& eig, int state,
                     std::span<const int> word) {
  CylinderSpace cs = build_cylinder_space(sft, eig.depth);
  if (!word_admissible(sft, state, word))
    throw std::invalid_argument("cylinder_mass: inadmissible word");
  int k = static_cast<int>(word.size());
  if (k >= eig.depth)
    return std::exp(log_mass_exact(sft, phi, cs, eig, state, word));
  // Short word: sum the masses of its depth-d refinements.
  double total = 0.0;
  for (int i = 0; i < cs.count(state); ++i) {
    const auto& w = cs.words[state][i];
    if (!std::equal(word.begin(), word.end(), w.begin())) continue;
    total += eig.h[state][i] * eig.nu[state][i];
  }
  return total;
}

LocallyConstantPotential normalize_potential(const RandomSFT& sft,
                                             const LocallyConstantPotential& phi,
                                             const FiberEigenData& eig) {
  for (const auto& hs : eig.h)
    for (double x : hs)
      if (!(x > 0.0))
        throw std::invalid_argument("normalize_potential: nonpositive eigenfunction entry");
  int r2 = std::max(2, phi.range());
  int d = eig.depth;  // = max(1, r2 - 1)
  CylinderSpace cs = build_cylinder_space(sft, d);
  std::vector<LocallyConstantPotential::Entry> entries;
  for (int s = 0; s < sft.states(); ++s) {
    int t = sft.env.next(s);
    for (const auto& w : admissible_words(sft, s, r2)) {
      std::span<const int> ws(w);
      int head = cs.index[s].at(LocallyConstantPotential::encode(ws.subspan(0, d)));
      int shifted = cs.index[t].at(LocallyConstantPotential::encode(ws.subspan(1, d)));
      double v = phi.value(s, ws) + std::log(eig.h[s][head]) -
                 std::log(eig.h[t][shifted]) - std::log(eig.lambda[s]);
      entries.push_back({s, w, v});
    }
  }
  return LocallyConstantPotential(sft, r2, entries);
}

GibbsReport gibbs_check(const RandomSFT& sft,
                        const LocallyConstantPotential& phi,
                        const FiberEigenData& eig, int max_len,
                        long long budget,
                        std::vector<std::vector<double>>* per_length) {
  CylinderSpace cs = build_cylinder_space(sft, eig.depth);
  GibbsReport rep;
  const double inf = std::numeric_limits<double>::infinity();
  double lo_all = inf, hi_all = -inf;  // in log scale
  double worst_log = -1.0;
  if (per_length) per_length->assign(max_len, {0.0, 0.0, 0.0});

  for (int len = 1; len <= max_len; ++len) {
    double lo = inf, hi = -inf;
    long long words_here = 0;
    for (int s = 0; s < sft.states(); ++s) {
      double log_lambda_n = 0.0;
      int t = s;
      for (int i = 0; i < len; ++i) {
        log_lambda_n += std::log(eig.lambda[t]);
        t = sft.env.next(t);
      }
      for (const auto& w : admissible_words(sft, s, len)) {
        if (rep.cylinders_checked >= budget)
          throw BudgetError("gibbs check: cylinder budget of " +
                            std::to_string(budget) + " exhausted");
        ++rep.cylinders_checked;
        ++words_here;
        double log_mass = len >= eig.depth
                              ? log_mass_exact(sft, phi, cs, eig, s, w)
                              : std::log(cylinder_mass(sft, phi, eig, s, w));
        double log_ratio =
            log_lambda_n + log_mass - sup_on_cylinder(sft, phi, s, w);
        lo = std::min(lo, log_ratio);
        hi = std::max(hi, log_ratio);
        if (std::fabs(log_ratio) > worst_log) {
          worst_log = std::fabs(log_ratio);
          rep.worst_ratio = std::exp(log_ratio);
          rep.worst_state = s;
          rep.worst_word = w;
        }
      }
    }
    if (words_here > 0) {
      if (per_length)
        (*per_length)[len - 1] = {std::exp(lo), std::exp(hi),
                                  static_cast<double>(words_here)};
      lo_all = std::min(lo_all, lo);
      hi_all = std::max(hi_all, hi);
    }
  }
  rep.constant = std::exp(std::max(hi_all, -lo_all));
  return rep;
}

}  // namespace glab

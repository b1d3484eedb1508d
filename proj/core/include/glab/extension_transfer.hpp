#pragma once
#include <cmath>
#include <unordered_map>
#include <vector>

#include "glab/errors.hpp"
#include "glab/extension.hpp"
#include "glab/gurevich.hpp"
#include "glab/transfer.hpp"

namespace glab {

// Sparse vector on one fiber of the group extension: cylinder index x
// group element -> coefficient.
template <GroupLike G>
struct GroupExtendedVector {
  using Map = std::unordered_map<typename G::Element, double, typename G::Hash>;
  int state = 0;
  std::vector<Map> slots;  // [cylinder]

  double& at(int cyl, const typename G::Element& g) { return slots[cyl][g]; }
};

// Weighted l2 norm of per-element sup values: sqrt(sum_g (sup_x |v|)^2).
template <GroupLike G>
double h_sup_norm(const G& group, const GroupExtendedVector<G>& v) {
  typename GroupExtendedVector<G>::Map best;
  for (const auto& slot : v.slots)
    for (const auto& [g, c] : slot) {
      auto& b = best[g];
      b = std::max(b, std::abs(c));
    }
  double s = 0;
  for (const auto& [g, b] : best) s += b * b;
  (void)group;
  return std::sqrt(s);
}

// sqrt(sum_g (sum_x mu(x) |v(x,g)|)^2) with mu the per-cylinder masses.
template <GroupLike G>
double h_l1mu_norm(const G& group, const GroupExtendedVector<G>& v,
                   const std::vector<double>& mu) {
  typename GroupExtendedVector<G>::Map acc;
  for (size_t i = 0; i < v.slots.size(); ++i)
    for (const auto& [g, c] : v.slots[i]) acc[g] += mu[i] * std::abs(c);
  double s = 0;
  for (const auto& [g, b] : acc) s += b * b;
  (void)group;
  return std::sqrt(s);
}

// One step of the extended operator: mass at (y, h) flows to every
// one-step successor cylinder with the group coordinate pushed by the
// label of y's first letter. Elements leaving the ball are dropped and
// their absolute mass is accumulated into *leak.
template <GroupLike G>
GroupExtendedVector<G> apply_extension_operator(
    const RandomSFT& sft, const LocallyConstantPotential& phi,
    const CylinderSpace& cs, const SkewLabeling<G>& psi, const G& group,
    const GroupExtendedVector<G>& in, int truncation = INT_MAX,
    double* leak = nullptr) {
  int s = in.state;
  int t = sft.env.next(s);
  GroupExtendedVector<G> out;
  out.state = t;
  out.slots.resize(cs.count(t));
  for (int i = 0; i < cs.count(s); ++i) {
    if (in.slots[i].empty()) continue;
    int y0 = cs.first_symbol[s][i];
    const auto& step = psi.of(s, y0);
    for (const auto& [j, c] : cs.succ[s][i]) {
      double w = std::exp(op_weight_log(sft, phi, cs, s, i, c));
      for (const auto& [g, coef] : in.slots[i]) {
        auto g2 = group.mul(g, step);
        if (group.word_length(g2) > truncation) {
          if (leak) *leak += std::abs(coef) * w;
          continue;
        }
        out.slots[j][g2] += coef * w;
      }
    }
  }
  return out;
}

template <GroupLike G>
struct RadiusSeries {
  std::vector<int> ns;
  std::vector<double> log_norm;     // log ||L^n seed|| in the sup-type norm
  std::vector<double> log_norm_l1;  // same iterate in the l1(mu)-type norm
  std::vector<double> leak;         // cumulative dropped mass after n steps
  SlopeFit fit;                     // corrected slope over the window
  double radius = 0.0;              // exp(slope)
  double leaked = 0.0;
};

// Power growth of the extended operator from a point seed at (cylinder 0,
// identity). The slope of log norm + correction * log n over the trailing
// window estimates log of the operator radius. When per-state cylinder
// masses are supplied the l1(mu)-type norm of the same iterate is tracked
// alongside. The iterate is renormalized each step, so the leak column is
// relative to the previous step's norm.
template <GroupLike G>
RadiusSeries<G> spectral_radius_H(
    const RandomSFT& sft, const LocallyConstantPotential& phi,
    const SkewLabeling<G>& psi, const G& group, int state, int n_max,
    int truncation, const GurevichOptions& fit_opts,
    const std::vector<std::vector<double>>* mu = nullptr) {
  CylinderSpace cs = build_cylinder_space(sft, representation_depth(phi));
  GroupExtendedVector<G> v;
  v.state = state;
  v.slots.resize(cs.count(state));
  v.at(0, group.identity()) = 1.0;

  RadiusSeries<G> out;
  double cum_log = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    v = apply_extension_operator(sft, phi, cs, psi, group, v, truncation,
                                 &out.leaked);
    double norm = h_sup_norm(group, v);
    if (norm == 0.0)
      throw EstimationError("extended operator died at n = " +
                            std::to_string(n));
    cum_log += std::log(norm);
    for (auto& slot : v.slots)
      for (auto& [g, c] : slot) c /= norm;
    out.ns.push_back(n);
    out.log_norm.push_back(cum_log);
    out.leak.push_back(out.leaked);
    if (mu) {
      double l1 = h_l1mu_norm(group, v, (*mu)[v.state]);
      out.log_norm_l1.push_back(l1 > 0 ? cum_log + std::log(l1) : kNegInf);
    }
  }

  std::vector<double> xs, ys;
  for (size_t i = 0; i < out.ns.size(); ++i) {
    int n = out.ns[i];
    if (fit_opts.window_lo && n < fit_opts.window_lo) continue;
    if (fit_opts.window_hi && n > fit_opts.window_hi) continue;
    xs.push_back(n);
    ys.push_back(out.log_norm[i] + fit_opts.correction * std::log(n));
  }
  if (static_cast<int>(xs.size()) < fit_opts.min_points)
    throw EstimationError("operator radius fit has too few points");
  out.fit = fit_line(xs, ys);
  out.radius = std::exp(out.fit.slope);
  return out;
}

struct MarkovSeries {
  std::vector<int> ns;
  std::vector<double> a_n;        // l2 norm of the n-step label distribution
  std::vector<double> log_t_norm; // log ||T^n 1|| proxy = log A_n
  std::vector<double> log_l_norm; // max over point seeds of log ||L^n||
  double leaked = 0.0;
};

// Walk the normalized extension (phi_0 = normalized potential) from the
// invariant-measure-weighted constant slice. p_n(g) = mu(psi^n = g) up to
// truncation leakage; A_n is its l2 norm.
template <GroupLike G>
MarkovSeries markov_average_and_Tn(const RandomSFT& sft,
                                   const LocallyConstantPotential& phi0,
                                   const FiberEigenData& eig,
                                   const SkewLabeling<G>& psi, const G& group,
                                   int state, int n_max, int truncation) {
  CylinderSpace cs = build_cylinder_space(sft, representation_depth(phi0));
  // Cylinder masses on the DP depth at the seed state.
  std::vector<double> mass(cs.count(state));
  for (int i = 0; i < cs.count(state); ++i)
    mass[i] = cylinder_mass(sft, phi0, eig, state,
                            std::span<const int>(cs.words[state][i].data(),
                                                 cs.words[state][i].size()));

  MarkovSeries out;
  {
    GroupExtendedVector<G> w;  // distribution seed
    w.state = state;
    w.slots.resize(cs.count(state));
    for (int i = 0; i < cs.count(state); ++i)
      w.slots[i][group.identity()] = mass[i];
    for (int n = 1; n <= n_max; ++n) {
      w = apply_extension_operator(sft, phi0, cs, psi, group, w, truncation,
                                   &out.leaked);
      typename GroupExtendedVector<G>::Map p;
      for (auto& slot : w.slots)
        for (auto& [g, c] : slot) p[g] += c;
      double a2 = 0;
      for (auto& [g, c] : p) a2 += c * c;
      out.ns.push_back(n);
      out.a_n.push_back(std::sqrt(a2));
      out.log_t_norm.push_back(std::log(out.a_n.back()));
    }
  }

  // Point seeds for the operator norm proxy, walked one at a time so only
  // a single sparse iterate is ever alive.
  std::vector<double> max_log(n_max, kNegInf);
  for (int i = 0; i < cs.count(state); ++i) {
    GroupExtendedVector<G> e;
    e.state = state;
    e.slots.resize(cs.count(state));
    e.at(i, group.identity()) = 1.0;
    double cum = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      e = apply_extension_operator(sft, phi0, cs, psi, group, e, truncation,
                                   nullptr);
      double norm = h_sup_norm(group, e);
      if (norm == 0.0) break;  // dead seed, nothing more to contribute
      cum += std::log(norm);
      for (auto& slot : e.slots)
        for (auto& [g, c] : slot) c /= norm;
      max_log[n - 1] = std::max(max_log[n - 1], cum);
    }
  }
  for (int n = 1; n <= n_max; ++n)
    out.log_l_norm.push_back(std::max(max_log[n - 1], out.log_t_norm[n - 1]));
  return out;
}

}  // namespace glab

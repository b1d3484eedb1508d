#pragma once
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "glab/errors.hpp"
#include "glab/group.hpp"
#include "glab/numerics.hpp"

namespace glab {

// One truncation level of the Kesten estimate. The Markov operator
// (M h)(x) = sum_s p(s) h(s^{-1} x) is compressed to the ball of the given
// radius (Dirichlet boundary: contributions leaving the ball are dropped),
// which underestimates the true norm and is monotone in the radius.
struct KestenPoint {
  int truncation = 0;
  size_t ball_size = 0;
  double estimate = 0.0;    // sqrt of the Rayleigh quotient of M^2
  int iterations = 0;
  bool converged = false;
  double last_delta = 0.0;  // final successive-Rayleigh difference
};

struct KestenOptions {
  double tol = 1e-11;    // stop when successive estimates differ by less
  long max_iters = 2'000'000;
};

// Richardson-style limit from a ladder of truncation levels, using the
// model est(L) = A - B/(L+2)^2 on the two largest levels. ok is false when
// fewer than two levels are available.
struct KestenExtrapolation {
  double value = 0.0;
  bool ok = false;
  double model_residual = 0.0;  // misfit of the third-largest level, if any
};
KestenExtrapolation richardson_extrapolate(const std::vector<KestenPoint>& pts);

// Power iteration for the top singular value of the compressed operator,
// started from the indicator of the identity. Even powers are used
// throughout so period-2 (bipartite) walks need no special casing. The step
// distribution must be symmetric: p(s) = p(s^{-1}).
template <GroupLike G>
KestenPoint kesten_spectral_radius(
    const G& group,
    const std::vector<std::pair<typename G::Element, double>>& steps,
    int truncation, const KestenOptions& opts = {}) {
  using Elem = typename G::Element;

  double total = 0.0;
  for (const auto& [s, p] : steps) {
    if (p < 0) throw EstimationError("kesten: negative step probability");
    total += p;
    bool has_inverse = false;
    for (const auto& [t, q] : steps)
      if (t == group.inv(s) && std::fabs(q - p) < 1e-12) has_inverse = true;
    if (!has_inverse)
      throw EstimationError("kesten: step distribution is not symmetric at " +
                            group.to_string(s));
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw EstimationError("kesten: step probabilities sum to " +
                          std::to_string(total));

  std::vector<Elem> ball = group.ball(truncation);
  std::unordered_map<Elem, int32_t, typename G::Hash> index;
  index.reserve(ball.size() * 2);
  for (size_t i = 0; i < ball.size(); ++i) index.emplace(ball[i], (int32_t)i);

  // CSR adjacency: x receives p(s) * h(s^{-1} x).
  std::vector<int64_t> row_start(ball.size() + 1, 0);
  std::vector<int32_t> col;
  std::vector<double> wgt;
  col.reserve(ball.size() * steps.size());
  wgt.reserve(ball.size() * steps.size());
  for (size_t i = 0; i < ball.size(); ++i) {
    for (const auto& [s, p] : steps) {
      Elem y = group.mul(group.inv(s), ball[i]);
      auto it = index.find(y);
      if (it != index.end()) {
        col.push_back(it->second);
        wgt.push_back(p);
      }
    }
    row_start[i + 1] = static_cast<int64_t>(col.size());
  }

  size_t nb = ball.size();
  std::vector<double> v(nb, 0.0), u(nb, 0.0);
  v[index.at(group.identity())] = 1.0;

  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (size_t i = 0; i < nb; ++i) {
      double acc = 0.0;
      for (int64_t e = row_start[i]; e < row_start[i + 1]; ++e)
        acc += wgt[e] * in[col[e]];
      out[i] = acc;
    }
  };

  KestenPoint out;
  out.truncation = truncation;
  out.ball_size = nb;
  double prev = 0.0;
  for (long it = 1; it <= opts.max_iters; ++it) {
    apply(v, u);
    double n2 = 0.0;
    for (double x : u) n2 += x * x;  // = <v, M^2 v> with ||v|| = 1
    double est = std::sqrt(n2);
    out.iterations = static_cast<int>(it);
    out.last_delta = std::fabs(est - prev);
    if (it > 1 && out.last_delta < opts.tol) {
      out.estimate = est;
      out.converged = true;
      return out;
    }
    prev = est;
    apply(u, v);  // second application: v <- M^2 v_old
    double m2 = 0.0;
    for (double x : v) m2 += x * x;
    double inv_norm = m2 > 0 ? 1.0 / std::sqrt(m2) : 0.0;
    for (double& x : v) x *= inv_norm;
    out.estimate = est;
  }
  return out;  // converged stays false; estimate is the last Rayleigh value
}

// Exact symmetric-difference defect sum_{h in K} |A h (sym diff) A| / |A|
// as a rational with denominator |A|.
struct FolnerReport {
  long long numerator = 0;
  long long denominator = 1;
  double value = 0.0;
  std::vector<std::pair<std::string, long long>> per_element;
};

template <GroupLike G>
FolnerReport folner_defect(const G& group,
                           const std::vector<typename G::Element>& candidate,
                           const std::vector<typename G::Element>& test_set) {
  if (candidate.empty())
    throw EstimationError("folner: empty candidate set");
  std::unordered_map<typename G::Element, char, typename G::Hash> in_set;
  in_set.reserve(candidate.size() * 2);
  for (const auto& x : candidate) in_set.emplace(x, 1);
  if (in_set.size() != candidate.size())
    throw EstimationError("folner: candidate set has repeated elements");

  FolnerReport rep;
  rep.denominator = static_cast<long long>(candidate.size());
  for (const auto& h : test_set) {
    long long moved = 0;
    auto hinv = group.inv(h);
    for (const auto& x : candidate) {
      if (!in_set.count(group.mul(x, h))) ++moved;     // |Ah \ A|
      if (!in_set.count(group.mul(x, hinv))) ++moved;  // |A \ Ah|
    }
    rep.per_element.emplace_back(group.to_string(h), moved);
    rep.numerator += moved;
  }
  rep.value = static_cast<double>(rep.numerator) / rep.denominator;
  return rep;
}

}  // namespace glab

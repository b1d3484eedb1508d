#include "glab/environment.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace glab {

int Environment::state_after(int s, long long n) const {
  long long m = period;
  long long k = ((n % m) + m) % m;
  for (long long i = 0; i < k; ++i) s = shift[s];
  return s;
}

Environment build_cyclic_environment(int period) {
  if (period < 1)
    throw std::invalid_argument("environment: period must be >= 1");
  Environment env;
  env.period = period;
  env.weights.assign(period, 1.0 / period);
  env.shift.resize(period);
  env.shift_inv.resize(period);
  for (int s = 0; s < period; ++s) {
    env.shift[s] = (s + 1) % period;
    env.shift_inv[(s + 1) % period] = s;
  }
  return env;
}

void validate_environment(const Environment& env) {
  int m = env.period;
  if (m < 1) throw std::invalid_argument("environment: period must be >= 1");
  if (static_cast<int>(env.weights.size()) != m ||
      static_cast<int>(env.shift.size()) != m ||
      static_cast<int>(env.shift_inv.size()) != m)
    throw std::invalid_argument("environment: field sizes disagree with period");

  std::vector<char> seen(m, 0);
  for (int s = 0; s < m; ++s) {
    int t = env.shift[s];
    if (t < 0 || t >= m)
      throw std::invalid_argument("environment: shift out of range at state " +
                                  std::to_string(s));
    if (seen[t])
      throw std::invalid_argument("environment: shift is not a bijection");
    seen[t] = 1;
    if (env.shift_inv[t] != s)
      throw std::invalid_argument("environment: shift_inv does not invert shift");
  }

  // Single cycle: iterating from 0 must visit every state.
  int s = 0, visited = 0;
  do {
    s = env.shift[s];
    ++visited;
  } while (s != 0 && visited <= m);
  if (visited != m)
    throw std::invalid_argument("environment: shift permutation is not a single cycle");

  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    if (!(env.weights[i] > 0.0))
      throw std::invalid_argument("environment: weight at state " +
                                  std::to_string(i) + " is not positive");
    if (std::fabs(env.weights[i] - env.weights[env.shift[i]]) > 1e-15)
      throw std::invalid_argument("environment: weights are not shift-invariant");
    sum += env.weights[i];
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("environment: weights sum to " +
                                std::to_string(sum));
}

}  // namespace glab

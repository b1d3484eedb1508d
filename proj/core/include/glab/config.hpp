#pragma once
#include <climits>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace glab {

// Parsed form of the JSON config. Parsing lives in the .cpp so the
// public interface stays standard-library only.
struct PotentialEntrySpec {
  int state = 0;
  std::vector<int> word;
  double value = 0.0;
};

struct PotentialSpec {
  int range = 0;
  std::vector<PotentialEntrySpec> entries;  // empty means the zero potential
};

struct GroupSpec {
  std::string type = "trivial";  // trivial | lattice | free | cyclic
  int d = 1;                     // lattice dimension
  int k = 2;                     // free rank
  int q = 1;                     // cyclic order
};

struct LabelSpec {
  int state = 0;
  int symbol = 0;
  std::string element;
};

struct ExperimentParams {
  std::string name;  // entropy | gap | kesten | folner | variational |
                     // gibbs-check | operator-radius
  int n_max = 12;
  int truncation = -1;  // -1 = unlimited
  int window_lo = 0, window_hi = 0;
  double correction = 0.0;
  double correction_ab = -1.0;  // -1 = same as correction
  long long seed = 0;
  int base_symbol = 0;
  int end_symbol = -1;  // -1 = same as base_symbol
  std::string target;   // group element, empty = identity
  int cert_horizon = 8;
  size_t state_budget = 50'000'000;

  std::vector<int> truncation_ladder;                 // kesten
  std::vector<std::pair<std::string, double>> steps;  // kesten
  int folner_radius = 4;
  std::vector<std::string> test_set;  // folner, empty = generator set

  std::vector<double> xi0;  // variational
  double grad_tol = 1e-7;
  double fd_step = 1e-4;
  int max_iters = 500;
  double divergence_radius = 30.0;

  int gibbs_max_len = 8;  // gibbs-check
};

struct ExperimentConfig {
  int period = 1;
  std::vector<int> alphabets;
  bool full_shift = true;
  // matrices[state][row][col], used when full_shift is false
  std::vector<std::vector<std::vector<int>>> matrices;
  PotentialSpec potential;
  GroupSpec group;
  std::vector<LabelSpec> labeling;  // empty = identity labels
  ExperimentParams params;
};

// Throws SchemaError with a field path on any malformed input.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical serialization; parse . serialize is the identity on the
// parsed struct, which makes round-trips idempotent.
std::string canonical_config_text(const ExperimentConfig& cfg);

}  // namespace glab

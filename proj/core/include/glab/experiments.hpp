#pragma once
#include <string>
#include <vector>

#include "glab/config.hpp"
#include "glab/gurevich.hpp"
#include "glab/kesten.hpp"
#include "glab/sft.hpp"
#include "glab/transfer.hpp"
#include "glab/varprin.hpp"

namespace glab {

// Type-erased per-state partition series: the unconstrained column is
// always filled; the constrained columns only when a nontrivial group
// is configured.
struct SeriesColumn {
  int state = 0;
  std::vector<int> ns;
  std::vector<double> log_z;
  std::vector<double> log_z_ab;
  std::vector<double> log_z_full;
  std::vector<int> overflow;
};

struct EntropyRecord {
  GurevichEstimate fit;
  double ruelle_pressure = 0.0;
  std::vector<SeriesColumn> series;
};

struct GapRecord {
  double h_T = 0.0, h_Tab = 0.0, gap = 0.0;
  double stderr_T = 0.0, stderr_Tab = 0.0, stderr_gap = 0.0;
  GurevichEstimate fit_T, fit_Tab;
  bool mixing_certified = false;
  int cert_horizon = 0;
  std::vector<SeriesColumn> series;
};

struct KestenRecord {
  std::vector<KestenPoint> ladder;
  KestenExtrapolation extrapolation;
  double value = 0.0;  // extrapolated when available, else largest-L raw
};

struct FolnerElementRow {
  std::string element;
  long long exits = 0;  // |Ah \ A| + |Ah^{-1} \ A| contribution
};

struct FolnerRecord {
  long long set_size = 0;
  long long numerator = 0;
  double defect = 0.0;
  std::vector<FolnerElementRow> rows;
};

struct VariationalRecord {
  DescentResult solution;
  GurevichEstimate counting;  // abelian-constrained estimate, same window
  bool counting_available = false;
  double difference = 0.0;
  std::vector<SeriesColumn> series;
};

struct GibbsRecord {
  GibbsReport report;
  FiberEigenData eig;
  std::vector<std::vector<double>> ratio_range;  // [len-1] = {min, max, count}
};

struct RadiusRecord {
  std::vector<int> ns;
  std::vector<double> log_norm_hinf;  // cumulative extended-operator norms
  std::vector<double> log_norm_h1;
  std::vector<double> a_n;
  std::vector<double> leakage;
  double radius = 0.0;         // exp of corrected slope of log_norm_hinf
  double a_n_growth = 0.0;     // exp of corrected slope of log a_n
  double a_n_root_final = 0.0; // raw (A_n)^{1/n} at n_max
  double gibbs_constant = 1.0;
  bool chain_ok = false;       // T-proxy <= L-proxy <= C * T-proxy at all n
};

EntropyRecord run_entropy(const ExperimentConfig& cfg);
GapRecord run_gap(const ExperimentConfig& cfg);
KestenRecord run_kesten(const ExperimentConfig& cfg);
FolnerRecord run_folner(const ExperimentConfig& cfg);
VariationalRecord run_variational(const ExperimentConfig& cfg);
GibbsRecord run_gibbs_check(const ExperimentConfig& cfg);
RadiusRecord run_operator_radius(const ExperimentConfig& cfg);

// Builds the configured system objects (shared by all experiments).
RandomSFT build_sft(const ExperimentConfig& cfg);
LocallyConstantPotential build_potential(const ExperimentConfig& cfg,
                                         const RandomSFT& sft);

// Runs the configured experiment and writes result.json plus the CSV
// series into out_dir. Returns the process exit code.
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Prints the machine-readable error record to stdout and writes error.json
// into out_dir (best effort, directory creation included).
void emit_error_record(const std::string& kind, int exit_code,
                       const std::string& message, const std::string& out_dir);

// Dry-run plan: instance summary, DP state-count prediction, memory
// forecast, and a refusal preview when over budget.
std::string describe(const ExperimentConfig& cfg);

}  // namespace glab

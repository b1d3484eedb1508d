#include <benchmark/benchmark.h>

#include "glab/extension.hpp"
#include "glab/group.hpp"
#include "glab/sft.hpp"

namespace {

// Layer growth of the constrained DP: free-group labels on the full
// 4-shift, identity target, no truncation. The live cell count grows
// with the ball, so this tracks the dominant cost of the gap runs.
void BM_ConstrainedDpFree(benchmark::State& state) {
  int n_max = static_cast<int>(state.range(0));
  auto sft = glab::build_full_shift(1, 4);
  auto phi = glab::LocallyConstantPotential::zero(sft);
  glab::FreeGroup group(2);
  glab::SkewLabeling<glab::FreeGroup> psi;
  psi.label = {{group.generator(0), group.generator(0, true),
                group.generator(1), group.generator(1, true)}};
  for (auto _ : state) {
    auto series = glab::constrained_series(sft, phi, psi, group, 0, 0, 0,
                                           group.identity(), n_max);
    benchmark::DoNotOptimize(series.log_z.back());
  }
}

// Lattice labels stay polynomial; this is the amenable-side baseline.
void BM_ConstrainedDpLattice(benchmark::State& state) {
  int n_max = static_cast<int>(state.range(0));
  auto sft = glab::build_full_shift(1, 2);
  auto phi = glab::LocallyConstantPotential::zero(sft);
  glab::LatticeGroup group(1);
  glab::SkewLabeling<glab::LatticeGroup> psi;
  psi.label = {{group.from_coords({1}), group.from_coords({-1})}};
  for (auto _ : state) {
    auto series = glab::constrained_series(sft, phi, psi, group, 0, 0, 0,
                                           group.identity(), n_max);
    benchmark::DoNotOptimize(series.log_z.back());
  }
}

}  // namespace

BENCHMARK(BM_ConstrainedDpFree)->Arg(6)->Arg(8)->Arg(10);
BENCHMARK(BM_ConstrainedDpLattice)->Arg(16)->Arg(32)->Arg(64);

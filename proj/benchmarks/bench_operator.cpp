#include <benchmark/benchmark.h>

#include "glab/extension_transfer.hpp"
#include "glab/group.hpp"
#include "glab/sft.hpp"

namespace {

// One application of the extended transfer operator on an iterate that has
// already spread over the truncation ball.
void BM_ExtensionApply(benchmark::State& state) {
  int spread = static_cast<int>(state.range(0));
  auto sft = glab::build_full_shift(1, 2);
  auto phi = glab::LocallyConstantPotential::zero(sft);
  glab::LatticeGroup group(2);
  glab::SkewLabeling<glab::LatticeGroup> psi;
  psi.label = {{group.from_coords({1, 0}), group.from_coords({0, 1})}};
  auto cs = glab::build_cylinder_space(sft, 1);

  glab::GroupExtendedVector<glab::LatticeGroup> v;
  v.state = 0;
  v.slots.resize(cs.count(0));
  v.at(0, group.identity()) = 1.0;
  for (int n = 0; n < spread; ++n)
    v = glab::apply_extension_operator(sft, phi, cs, psi, group, v);

  for (auto _ : state) {
    auto w = glab::apply_extension_operator(sft, phi, cs, psi, group, v);
    benchmark::DoNotOptimize(w.slots[0].size());
  }
}

}  // namespace

BENCHMARK(BM_ExtensionApply)->Arg(8)->Arg(16)->Arg(32);

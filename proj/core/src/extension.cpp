#include "glab/extension.hpp"

namespace glab {

double partition_function(const RandomSFT& sft,
                          const LocallyConstantPotential& phi, int state,
                          int n, int a, int b, const DpOptions& opts) {
  CyclicGroup trivial(1);
  return constrained_partition(sft, phi, trivial_labeling(sft, trivial),
                               trivial, state, n, a, b, trivial.identity(),
                               opts);
}

}  // namespace glab

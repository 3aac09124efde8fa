#pragma once

namespace seld {

// Upper bound on OpenMP threads used by the kernels. Results never depend
// on this value: every parallel loop writes disjoint outputs and performs
// no cross-iteration floating-point reductions.
void set_max_threads(int threads);
int max_threads();

}  // namespace seld

#include "seld/parallel.hpp"

#include <omp.h>

#include <algorithm>

namespace seld {

void set_max_threads(int threads) { omp_set_num_threads(std::max(1, threads)); }

int max_threads() { return omp_get_max_threads(); }

}  // namespace seld

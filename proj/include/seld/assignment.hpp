#pragma once

#include <vector>

namespace seld {

// Minimum-cost one-to-one assignment on a rows x cols cost matrix (row-major).
// Returns, for each row, the assigned column or -1 when rows > cols.
// Hungarian algorithm with potentials, O(n^2 m).
std::vector<int> solve_assignment(const std::vector<double>& cost, int rows, int cols);

}  // namespace seld

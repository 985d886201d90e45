#pragma once

#include "ainfty/operation_table.hpp"

#include <vector>

namespace ainfty {

/// Rank over Q of an integer matrix (exact fraction-free elimination).
int rank_over_q(std::vector<std::vector<Rational>> rows);

/// Betti numbers b_d = dim ker(m_{1,0} on degree d) - rank(m_{1,0} into degree d),
/// indexed by degree 0..max degree. Throws Error if m_{1,0} is not of degree +1.
std::vector<int> betti_numbers(const OperationTable& table);

}  // namespace ainfty

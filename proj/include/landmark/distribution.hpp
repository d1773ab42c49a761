#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace landmark {

/// Class probabilities; non-negative and summing to 1.
using Distribution = std::vector<double>;

/// True when every entry is >= 0 and the sum is within `tol` of 1.
bool is_distribution(std::span<const double> p, double tol = 1e-9);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> p);

}  // namespace landmark

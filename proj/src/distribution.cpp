#include "landmark/distribution.hpp"

#include <cmath>
#include <stdexcept>

namespace landmark {

bool is_distribution(std::span<const double> p, double tol) {
    if (p.empty()) return false;
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) return false;
        sum += v;
    }
    return std::abs(sum - 1.0) <= tol;
}

std::size_t argmax(std::span<const double> p) {
    if (p.empty()) throw std::invalid_argument("argmax of empty distribution");
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i] > p[best]) best = i;
    }
    return best;
}

}  // namespace landmark

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace landmark {

/// Derives an independent stream from (seed, purpose tag, index) so results do not depend on
/// the order in which streams are created.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index);

inline std::mt19937_64 make_stream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) {
    return std::mt19937_64(derive_seed(seed, tag, index));
}

}  // namespace landmark

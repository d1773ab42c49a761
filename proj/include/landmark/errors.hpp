#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace landmark {

/// Malformed binary or text input. `offset` is the byte (or line) position where parsing failed.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Embedding or label lookups that reference ids absent from a store.
class MissingIdsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace landmark

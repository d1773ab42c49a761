#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace landmark {

/// Dense row-major matrix of feature vectors, one sample per row.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> data;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0f) {}

    std::span<const float> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<float> row(std::size_t i) { return {data.data() + i * cols, cols}; }

    void append_row(std::span<const float> values) {
        if (rows == 0 && data.empty()) cols = values.size();
        if (values.size() != cols) throw std::invalid_argument("FeatureMatrix: row length mismatch");
        data.insert(data.end(), values.begin(), values.end());
        ++rows;
    }

    bool operator==(const FeatureMatrix&) const = default;
};

}  // namespace landmark

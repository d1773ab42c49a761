#pragma once

#include "landmark/distribution.hpp"
#include "landmark/matrix.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace landmark {

/// Exact Euclidean k-nearest-neighbour vote over the stored training rows.
struct KnnModel {
    std::size_t k = 5;
    FeatureMatrix vectors;
    std::vector<int> labels;
    std::vector<std::string> class_names;

    std::size_t num_classes() const { return class_names.size(); }

    bool operator==(const KnnModel&) const = default;
};

KnnModel knn_fit(FeatureMatrix vectors, std::vector<int> labels, std::vector<std::string> class_names,
                 std::size_t k);

/// Row indices of the k nearest rows, nearest first; equal distances order by row index.
std::vector<std::size_t> knn_neighbors(const KnnModel& m, std::span<const float> x);

/// probs[c] = (neighbours of class c) / k.
Distribution knn_predict_proba(const KnnModel& m, std::span<const float> x);

}  // namespace landmark

#pragma once

#include "landmark/distribution.hpp"
#include "landmark/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace landmark {

struct ForestConfig {
    std::size_t n_trees = 100;
    std::size_t max_depth = 0;           // 0 = unlimited
    std::size_t features_per_split = 0;  // 0 = floor(sqrt(dim))
    bool bootstrap = true;
    std::uint64_t seed = 42;

    bool operator==(const ForestConfig&) const = default;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;   // taken when x[feature] <= threshold
    int right = -1;
    Distribution leaf;

    bool is_leaf() const { return feature < 0; }

    bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    const Distribution& leaf_for(std::span<const float> x) const;

    bool operator==(const DecisionTree&) const = default;
};

struct RandomForestModel {
    ForestConfig config;
    std::size_t dim = 0;
    std::vector<std::string> class_names;
    std::vector<DecisionTree> trees;

    bool operator==(const RandomForestModel&) const = default;
};

/// Gini-impurity CART trees on bootstrap samples. Per-tree randomness comes from (seed, tree index),
/// so trees can be built in any order.
RandomForestModel rf_fit(const FeatureMatrix& x, std::span<const int> y, std::vector<std::string> class_names,
                         const ForestConfig& cfg);

DecisionTree fit_tree(const FeatureMatrix& x, std::span<const int> y, std::size_t num_classes,
                      const ForestConfig& cfg, std::size_t tree_index);

/// Unweighted mean of the trees' leaf distributions. Each class sums its per-tree terms in sorted
/// order, so the result does not depend on tree order.
Distribution rf_predict_proba(const RandomForestModel& m, std::span<const float> x);

double gini_impurity(std::span<const std::size_t> class_counts);

}  // namespace landmark

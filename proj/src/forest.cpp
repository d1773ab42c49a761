#include "landmark/forest.hpp"

#include "landmark/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace landmark {

const Distribution& DecisionTree::leaf_for(std::span<const float> x) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& n = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[i].leaf;
}

double gini_impurity(std::span<const std::size_t> class_counts) {
    const double total = static_cast<double>(std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0}));
    if (total == 0.0) return 0.0;
    double sum_sq = 0.0;
    for (auto c : class_counts) {
        const double p = static_cast<double>(c) / total;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = -std::numeric_limits<double>::infinity();
};

class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& x, std::span<const int> y, std::size_t num_classes, const ForestConfig& cfg,
                std::mt19937_64& rng)
        : x_(x), y_(y), num_classes_(num_classes), cfg_(cfg), rng_(rng) {
        mtry_ = cfg.features_per_split > 0
                    ? std::min(cfg.features_per_split, x.cols)
                    : std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(x.cols)))));
        feature_order_.resize(x.cols);
        std::iota(feature_order_.begin(), feature_order_.end(), std::size_t{0});
    }

    DecisionTree build(std::vector<std::size_t> samples) {
        grow(std::move(samples), 0);
        return std::move(tree_);
    }

private:
    int grow(std::vector<std::size_t> samples, std::size_t depth) {
        const int index = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();

        std::vector<std::size_t> counts(num_classes_, 0);
        for (auto s : samples) ++counts[static_cast<std::size_t>(y_[s])];
        const bool pure = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) <= 1;
        const bool depth_limited = cfg_.max_depth > 0 && depth >= cfg_.max_depth;

        Split best;
        if (!pure && !depth_limited && samples.size() >= 2) {
            best = best_split(samples, counts);
        }
        if (best.feature < 0) {
            auto& leaf = tree_.nodes[static_cast<std::size_t>(index)].leaf;
            leaf.resize(num_classes_);
            for (std::size_t c = 0; c < num_classes_; ++c) {
                leaf[c] = static_cast<double>(counts[c]) / static_cast<double>(samples.size());
            }
            return index;
        }

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (auto s : samples) {
            (x_.row(s)[static_cast<std::size_t>(best.feature)] <= best.threshold ? left : right).push_back(s);
        }
        samples.clear();
        samples.shrink_to_fit();
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        auto& node = tree_.nodes[static_cast<std::size_t>(index)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = r;
        return index;
    }

    // Scans features in a fresh random order: the first mtry are the candidates, and further features
    // are only consulted while no candidate admits any split (all constant on this node).
    Split best_split(const std::vector<std::size_t>& samples, const std::vector<std::size_t>& parent_counts) {
        std::shuffle(feature_order_.begin(), feature_order_.end(), rng_);
        const double parent_gini = gini_impurity(parent_counts);
        Split best;
        for (std::size_t k = 0; k < feature_order_.size(); ++k) {
            if (k >= mtry_ && best.feature >= 0) break;
            evaluate_feature(feature_order_[k], samples, parent_gini, best);
        }
        return best;
    }

    void evaluate_feature(std::size_t f, const std::vector<std::size_t>& samples, double parent_gini, Split& best) {
        values_.clear();
        for (auto s : samples) values_.emplace_back(x_.row(s)[f], y_[s]);
        std::sort(values_.begin(), values_.end());
        if (values_.front().first == values_.back().first) return;

        std::vector<std::size_t> left(num_classes_, 0);
        std::vector<std::size_t> right(num_classes_, 0);
        for (const auto& v : values_) ++right[static_cast<std::size_t>(v.second)];
        const double n = static_cast<double>(values_.size());
        for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
            const auto c = static_cast<std::size_t>(values_[i].second);
            ++left[c];
            --right[c];
            if (values_[i].first == values_[i + 1].first) continue;
            const double nl = static_cast<double>(i + 1);
            const double weighted = (nl * gini_impurity(left) + (n - nl) * gini_impurity(right)) / n;
            const double gain = parent_gini - weighted;
            if (gain > best.gain) {
                best.gain = gain;
                best.feature = static_cast<int>(f);
                best.threshold = (static_cast<double>(values_[i].first) + static_cast<double>(values_[i + 1].first)) / 2.0;
            }
        }
    }

    const FeatureMatrix& x_;
    std::span<const int> y_;
    std::size_t num_classes_;
    const ForestConfig& cfg_;
    std::mt19937_64& rng_;
    std::size_t mtry_ = 1;
    std::vector<std::size_t> feature_order_;
    std::vector<std::pair<float, int>> values_;
    DecisionTree tree_;
};

}  // namespace

DecisionTree fit_tree(const FeatureMatrix& x, std::span<const int> y, std::size_t num_classes,
                      const ForestConfig& cfg, std::size_t tree_index) {
    auto rng = make_stream(cfg.seed, "rf-tree", tree_index);
    std::vector<std::size_t> samples(x.rows);
    if (cfg.bootstrap) {
        std::uniform_int_distribution<std::size_t> pick(0, x.rows - 1);
        for (auto& s : samples) s = pick(rng);
    } else {
        std::iota(samples.begin(), samples.end(), std::size_t{0});
    }
    return TreeBuilder(x, y, num_classes, cfg, rng).build(std::move(samples));
}

RandomForestModel rf_fit(const FeatureMatrix& x, std::span<const int> y, std::vector<std::string> class_names,
                         const ForestConfig& cfg) {
    if (x.rows < 2) throw std::invalid_argument("rf_fit: need at least 2 samples");
    if (x.cols < 1) throw std::invalid_argument("rf_fit: need at least one feature");
    if (y.size() != x.rows) throw std::invalid_argument("rf_fit: label count mismatch");
    if (cfg.n_trees < 1) throw std::invalid_argument("rf_fit: need at least one tree");
    for (int label : y) {
        if (label < 0 || static_cast<std::size_t>(label) >= class_names.size()) {
            throw std::invalid_argument("rf_fit: label out of range");
        }
    }
    RandomForestModel m;
    m.config = cfg;
    m.dim = x.cols;
    m.class_names = std::move(class_names);
    m.trees.reserve(cfg.n_trees);
    for (std::size_t t = 0; t < cfg.n_trees; ++t) {
        m.trees.push_back(fit_tree(x, y, m.class_names.size(), cfg, t));
    }
    return m;
}

Distribution rf_predict_proba(const RandomForestModel& m, std::span<const float> x) {
    if (x.size() != m.dim) {
        throw std::invalid_argument("rf: query dim " + std::to_string(x.size()) + " != model dim " +
                                    std::to_string(m.dim));
    }
    const std::size_t c_count = m.class_names.size();
    std::vector<std::vector<double>> terms(c_count);
    for (const auto& tree : m.trees) {
        const auto& leaf = tree.leaf_for(x);
        for (std::size_t c = 0; c < c_count; ++c) terms[c].push_back(leaf[c]);
    }
    Distribution p(c_count, 0.0);
    for (std::size_t c = 0; c < c_count; ++c) {
        std::sort(terms[c].begin(), terms[c].end());
        p[c] = std::accumulate(terms[c].begin(), terms[c].end(), 0.0) / static_cast<double>(m.trees.size());
    }
    return p;
}

}  // namespace landmark

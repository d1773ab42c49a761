#include "landmark/knn.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace landmark {

KnnModel knn_fit(FeatureMatrix vectors, std::vector<int> labels, std::vector<std::string> class_names,
                 std::size_t k) {
    if (vectors.rows == 0) throw std::invalid_argument("knn_fit: no training rows");
    if (labels.size() != vectors.rows) throw std::invalid_argument("knn_fit: label count mismatch");
    if (k < 1 || k > vectors.rows) {
        throw std::invalid_argument("knn_fit: k must lie in [1, " + std::to_string(vectors.rows) + "]");
    }
    for (int y : labels) {
        if (y < 0 || static_cast<std::size_t>(y) >= class_names.size()) {
            throw std::invalid_argument("knn_fit: label out of range");
        }
    }
    return KnnModel{k, std::move(vectors), std::move(labels), std::move(class_names)};
}

std::vector<std::size_t> knn_neighbors(const KnnModel& m, std::span<const float> x) {
    if (x.size() != m.vectors.cols) {
        throw std::invalid_argument("knn: query dim " + std::to_string(x.size()) + " != model dim " +
                                    std::to_string(m.vectors.cols));
    }
    std::vector<std::pair<double, std::size_t>> dist(m.vectors.rows);
    for (std::size_t i = 0; i < m.vectors.rows; ++i) {
        const auto row = m.vectors.row(i);
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double diff = static_cast<double>(x[j]) - static_cast<double>(row[j]);
            d2 += diff * diff;
        }
        dist[i] = {d2, i};
    }
    const auto k = static_cast<std::ptrdiff_t>(m.k);
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    std::vector<std::size_t> out;
    out.reserve(m.k);
    for (std::ptrdiff_t i = 0; i < k; ++i) out.push_back(dist[static_cast<std::size_t>(i)].second);
    return out;
}

Distribution knn_predict_proba(const KnnModel& m, std::span<const float> x) {
    Distribution p(m.num_classes(), 0.0);
    for (auto i : knn_neighbors(m, x)) {
        p[static_cast<std::size_t>(m.labels[i])] += 1.0;
    }
    for (double& v : p) v /= static_cast<double>(m.k);
    return p;
}

}  // namespace landmark

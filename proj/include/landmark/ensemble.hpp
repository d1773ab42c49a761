#pragma once

#include "landmark/distribution.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace landmark {

/// Per-image outcome of the three branches and their average.
struct PredictionRecord {
    std::string image_id;
    Distribution gbvs_head;
    Distribution knn;
    Distribution random_forest;
    Distribution ensemble;
    std::optional<std::size_t> decision;  // empty = REJECT
    double confidence = 0.0;              // max(ensemble)

    bool operator==(const PredictionRecord&) const = default;
};

/// Elementwise arithmetic mean, independent of the order of `dists`.
Distribution average_ensemble(std::span<const Distribution> dists);

/// Argmax (lowest index on ties) when max(p) >= threshold, otherwise REJECT. Threshold lies in [0,1).
std::optional<std::size_t> decide(std::span<const double> p, double reject_threshold);

PredictionRecord make_record(std::string image_id, Distribution gbvs_head, Distribution knn,
                             Distribution random_forest, double reject_threshold);

inline constexpr const char* kRejectLabel = "REJECT";

/// `id<TAB>decision<TAB>confidence<TAB>p1,..,pC<TAB>branch:gbvs_head=..<TAB>branch:knn=..<TAB>branch:rf=..`
std::string format_record(const PredictionRecord& r, std::span<const std::string> class_names);
PredictionRecord parse_record(const std::string& line, std::span<const std::string> class_names);

}  // namespace landmark

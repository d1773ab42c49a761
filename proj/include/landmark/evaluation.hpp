#pragma once

#include "landmark/embeddings.hpp"
#include "landmark/ensemble.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace landmark {

/// Accuracy figures are percentages. REJECT counts as an error in `accuracy`; `coverage` and
/// `selective_accuracy` describe the accepted subset.
struct EvaluationReport {
    std::vector<std::string> class_names;
    std::vector<std::vector<std::size_t>> confusion;  // rows = truth, cols = prediction, last col = REJECT
    std::size_t total = 0;
    std::size_t n_rejected = 0;
    double accuracy = 0.0;
    double coverage = 0.0;
    double selective_accuracy = 0.0;
    std::vector<double> precision;
    std::vector<double> recall;

    bool operator==(const EvaluationReport&) const = default;
};

struct Decision {
    std::string image_id;
    std::optional<std::size_t> predicted;  // empty = REJECT
};

/// Throws MissingIdsError if any id has no truth label.
EvaluationReport evaluate_decisions(std::span<const Decision> decisions,
                                    const std::map<std::string, std::size_t>& truth,
                                    std::vector<std::string> class_names);

EvaluationReport evaluate(std::span<const PredictionRecord> records, const std::map<std::string, std::size_t>& truth,
                          std::vector<std::string> class_names);

/// Decisions of one branch by plain argmax; branch is gbvs_head, knn, random_forest or ensemble.
std::vector<Decision> branch_decisions(std::span<const PredictionRecord> records, const std::string& branch);

std::string format_report_text(const EvaluationReport& r);
/// `key<TAB>value` lines; parse_report_tsv inverts it exactly.
std::string format_report_tsv(const EvaluationReport& r);
EvaluationReport parse_report_tsv(const std::string& text);

struct ModelReports {
    std::string model;
    std::map<Split, EvaluationReport> by_split;
};

struct ComparisonTable {
    std::string text;
    std::string tsv;
};

/// One row per model, one column per split present in any model, accuracies to 2 decimals.
ComparisonTable comparison_table(std::span<const ModelReports> reports);

/// Percentage with 2 decimals.
std::string format_percent(double v);

}  // namespace landmark

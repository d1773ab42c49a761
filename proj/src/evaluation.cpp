#include "landmark/evaluation.hpp"

#include "landmark/errors.hpp"
#include "landmark/fileio.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace landmark {

namespace {

double percent(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string format_percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

EvaluationReport evaluate_decisions(std::span<const Decision> decisions,
                                    const std::map<std::string, std::size_t>& truth,
                                    std::vector<std::string> class_names) {
    const std::size_t c = class_names.size();
    EvaluationReport r;
    r.class_names = std::move(class_names);
    r.confusion.assign(c, std::vector<std::size_t>(c + 1, 0));

    std::vector<std::string> missing;
    for (const auto& d : decisions) {
        auto it = truth.find(d.image_id);
        if (it == truth.end()) {
            missing.push_back(d.image_id);
            continue;
        }
        if (it->second >= c || (d.predicted && *d.predicted >= c)) {
            throw std::invalid_argument("evaluate: class index out of range for " + d.image_id);
        }
        ++r.confusion[it->second][d.predicted ? *d.predicted : c];
    }
    if (!missing.empty()) {
        std::string msg = "no truth label for " + std::to_string(missing.size()) + " ids:";
        for (const auto& id : missing) msg += " " + id;
        throw MissingIdsError(msg);
    }

    std::size_t correct = 0;
    for (std::size_t t = 0; t < c; ++t) {
        for (std::size_t p = 0; p <= c; ++p) r.total += r.confusion[t][p];
        r.n_rejected += r.confusion[t][c];
        correct += r.confusion[t][t];
    }
    r.accuracy = percent(correct, r.total);
    r.coverage = percent(r.total - r.n_rejected, r.total);
    r.selective_accuracy = percent(correct, r.total - r.n_rejected);
    r.precision.resize(c);
    r.recall.resize(c);
    for (std::size_t k = 0; k < c; ++k) {
        std::size_t predicted = 0;
        std::size_t actual = 0;
        for (std::size_t t = 0; t < c; ++t) predicted += r.confusion[t][k];
        for (std::size_t p = 0; p <= c; ++p) actual += r.confusion[k][p];
        r.precision[k] = percent(r.confusion[k][k], predicted);
        r.recall[k] = percent(r.confusion[k][k], actual);
    }
    return r;
}

EvaluationReport evaluate(std::span<const PredictionRecord> records, const std::map<std::string, std::size_t>& truth,
                          std::vector<std::string> class_names) {
    std::vector<Decision> decisions;
    decisions.reserve(records.size());
    for (const auto& rec : records) decisions.push_back({rec.image_id, rec.decision});
    return evaluate_decisions(decisions, truth, std::move(class_names));
}

std::vector<Decision> branch_decisions(std::span<const PredictionRecord> records, const std::string& branch) {
    std::vector<Decision> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        const Distribution* p = nullptr;
        if (branch == "gbvs_head") p = &rec.gbvs_head;
        else if (branch == "knn") p = &rec.knn;
        else if (branch == "random_forest") p = &rec.random_forest;
        else if (branch == "ensemble") p = &rec.ensemble;
        else throw std::invalid_argument("unknown branch '" + branch + "'");
        out.push_back({rec.image_id, argmax(*p)});
    }
    return out;
}

std::string format_report_text(const EvaluationReport& r) {
    std::ostringstream os;
    os << "items: " << r.total << "  rejected: " << r.n_rejected << '\n';
    os << "accuracy: " << format_percent(r.accuracy) << "%  coverage: " << format_percent(r.coverage)
       << "%  accuracy on accepted: " << format_percent(r.selective_accuracy) << "%\n";
    std::size_t width = 6;
    for (const auto& n : r.class_names) width = std::max(width, n.size());
    auto pad = [&](const std::string& s) { return s + std::string(width - std::min(width, s.size()) + 2, ' '); };
    os << pad("truth");
    for (const auto& n : r.class_names) os << pad(n);
    os << pad(kRejectLabel) << pad("prec%") << "recall%\n";
    for (std::size_t t = 0; t < r.class_names.size(); ++t) {
        os << pad(r.class_names[t]);
        for (auto v : r.confusion[t]) os << pad(std::to_string(v));
        os << pad(format_percent(r.precision[t])) << format_percent(r.recall[t]) << '\n';
    }
    return os.str();
}

namespace {

template <typename T, typename Fmt>
std::string joined(const std::vector<T>& v, Fmt fmt) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += fmt(v[i]);
    }
    return out;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (s.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::string format_report_tsv(const EvaluationReport& r) {
    for (const auto& n : r.class_names) {
        if (n.find_first_of(",\t\n") != std::string::npos) {
            throw std::invalid_argument("class name '" + n + "' contains a separator character");
        }
    }
    auto num = [](double v) { return format_double(v); };
    auto count = [](std::size_t v) { return std::to_string(v); };
    std::ostringstream os;
    os << "classes\t" << joined(r.class_names, [](const std::string& s) { return s; }) << '\n';
    os << "total\t" << r.total << '\n';
    os << "rejected\t" << r.n_rejected << '\n';
    os << "accuracy\t" << num(r.accuracy) << '\n';
    os << "coverage\t" << num(r.coverage) << '\n';
    os << "selective_accuracy\t" << num(r.selective_accuracy) << '\n';
    for (std::size_t t = 0; t < r.confusion.size(); ++t) {
        os << "confusion." << t << '\t' << joined(r.confusion[t], count) << '\n';
    }
    os << "precision\t" << joined(r.precision, num) << '\n';
    os << "recall\t" << joined(r.recall, num) << '\n';
    return os.str();
}

EvaluationReport parse_report_tsv(const std::string& text) {
    EvaluationReport r;
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw FormatError("report line without TAB", line_no);
        kv[line.substr(0, tab)] = line.substr(tab + 1);
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw FormatError("report missing key '" + key + "'", line_no);
        return it->second;
    };
    try {
        r.class_names = split_commas(need("classes"));
        r.total = std::stoull(need("total"));
        r.n_rejected = std::stoull(need("rejected"));
        r.accuracy = parse_double(need("accuracy"));
        r.coverage = parse_double(need("coverage"));
        r.selective_accuracy = parse_double(need("selective_accuracy"));
        for (std::size_t t = 0; t < r.class_names.size(); ++t) {
            std::vector<std::size_t> row;
            for (const auto& v : split_commas(need("confusion." + std::to_string(t)))) row.push_back(std::stoull(v));
            if (row.size() != r.class_names.size() + 1) throw std::invalid_argument("confusion row width");
            r.confusion.push_back(std::move(row));
        }
        for (const auto& v : split_commas(need("precision"))) r.precision.push_back(parse_double(v));
        for (const auto& v : split_commas(need("recall"))) r.recall.push_back(parse_double(v));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("report: ") + e.what(), line_no);
    }
    if (r.precision.size() != r.class_names.size() || r.recall.size() != r.class_names.size()) {
        throw FormatError("report: per-class vectors have the wrong length", line_no);
    }
    return r;
}

ComparisonTable comparison_table(std::span<const ModelReports> reports) {
    if (reports.empty()) throw std::invalid_argument("comparison_table: no models");
    std::set<Split> present;
    for (const auto& m : reports) {
        if (m.model.empty()) throw std::invalid_argument("comparison_table: empty model name");
        if (m.model.find_first_of("\t\n") != std::string::npos) {
            throw std::invalid_argument("comparison_table: model name contains TAB or newline");
        }
        for (const auto& [split, _] : m.by_split) present.insert(split);
    }
    std::vector<Split> columns;
    for (Split s : {Split::train, Split::val, Split::test, Split::unassigned}) {
        if (present.contains(s)) columns.push_back(s);
    }
    auto header_of = [](Split s) -> std::string {
        switch (s) {
            case Split::train: return "Train";
            case Split::val: return "Validation";
            case Split::test: return "Test";
            case Split::unassigned: break;
        }
        return "Unassigned";
    };

    std::vector<std::vector<std::string>> cells;
    cells.push_back({"Model"});
    for (Split s : columns) cells.front().push_back(header_of(s));
    for (const auto& m : reports) {
        std::vector<std::string> row{m.model};
        for (Split s : columns) {
            auto it = m.by_split.find(s);
            row.push_back(it == m.by_split.end() ? "-" : format_percent(it->second.accuracy));
        }
        cells.push_back(std::move(row));
    }
    std::vector<std::size_t> widths(cells.front().size(), 0);
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    }

    ComparisonTable table;
    for (std::size_t r = 0; r < cells.size(); ++r) {
        for (std::size_t i = 0; i < cells[r].size(); ++i) {
            if (i) table.text += " | ";
            table.text += cells[r][i] + std::string(widths[i] - cells[r][i].size(), ' ');
        }
        while (!table.text.empty() && table.text.back() == ' ') table.text.pop_back();
        table.text += '\n';
        if (r == 0) {
            for (std::size_t i = 0; i < widths.size(); ++i) {
                if (i) table.text += "-+-";
                table.text += std::string(widths[i], '-');
            }
            table.text += '\n';
        }
    }
    table.tsv = "model";
    for (Split s : columns) table.tsv += "\t" + std::string(split_name(s));
    table.tsv += '\n';
    for (std::size_t r = 1; r < cells.size(); ++r) {
        for (std::size_t i = 0; i < cells[r].size(); ++i) {
            if (i) table.tsv += '\t';
            table.tsv += cells[r][i];
        }
        table.tsv += '\n';
    }
    return table;
}

}  // namespace landmark

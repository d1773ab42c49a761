#include "landmark/ensemble.hpp"

#include "landmark/errors.hpp"
#include "landmark/fileio.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace landmark {

Distribution average_ensemble(std::span<const Distribution> dists) {
    if (dists.empty()) throw std::invalid_argument("average_ensemble: no distributions");
    const std::size_t c = dists.front().size();
    for (const auto& d : dists) {
        if (d.size() != c) throw std::invalid_argument("average_ensemble: class count mismatch");
    }
    // Summing each class's terms in sorted order makes the mean independent of branch order.
    Distribution mean(c, 0.0);
    std::vector<double> terms(dists.size());
    for (std::size_t k = 0; k < c; ++k) {
        for (std::size_t i = 0; i < dists.size(); ++i) terms[i] = dists[i][k];
        std::sort(terms.begin(), terms.end());
        for (double t : terms) mean[k] += t;
        mean[k] /= static_cast<double>(dists.size());
    }
    return mean;
}

std::optional<std::size_t> decide(std::span<const double> p, double reject_threshold) {
    if (!(reject_threshold >= 0.0 && reject_threshold < 1.0)) {
        throw std::invalid_argument("decide: reject threshold must lie in [0,1)");
    }
    const auto best = argmax(p);
    if (p[best] >= reject_threshold) return best;
    return std::nullopt;
}

PredictionRecord make_record(std::string image_id, Distribution gbvs_head, Distribution knn,
                             Distribution random_forest, double reject_threshold) {
    PredictionRecord r;
    r.image_id = std::move(image_id);
    r.gbvs_head = std::move(gbvs_head);
    r.knn = std::move(knn);
    r.random_forest = std::move(random_forest);
    const Distribution branches[] = {r.gbvs_head, r.knn, r.random_forest};
    r.ensemble = average_ensemble(branches);
    r.confidence = *std::max_element(r.ensemble.begin(), r.ensemble.end());
    r.decision = decide(r.ensemble, reject_threshold);
    return r;
}

namespace {

std::string join(const Distribution& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ',';
        out += format_double(p[i]);
    }
    return out;
}

Distribution split_doubles(const std::string& text, std::size_t expected) {
    Distribution p;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) p.push_back(parse_double(item));
    if (p.size() != expected) {
        throw std::invalid_argument("expected " + std::to_string(expected) + " probabilities, got " +
                                    std::to_string(p.size()));
    }
    return p;
}

Distribution branch_field(const std::string& field, const std::string& name, std::size_t expected) {
    const std::string prefix = "branch:" + name + "=";
    if (field.rfind(prefix, 0) != 0) throw std::invalid_argument("expected field " + prefix);
    return split_doubles(field.substr(prefix.size()), expected);
}

}  // namespace

std::string format_record(const PredictionRecord& r, std::span<const std::string> class_names) {
    std::ostringstream os;
    os << r.image_id << '\t' << (r.decision ? class_names[*r.decision] : std::string(kRejectLabel)) << '\t'
       << format_double(r.confidence) << '\t' << join(r.ensemble) << "\tbranch:gbvs_head=" << join(r.gbvs_head)
       << "\tbranch:knn=" << join(r.knn) << "\tbranch:rf=" << join(r.random_forest);
    return os.str();
}

PredictionRecord parse_record(const std::string& line, std::span<const std::string> class_names) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (f.size() != 7) throw FormatError("prediction record needs 7 tab-separated fields", 0);
    try {
        PredictionRecord r;
        r.image_id = f[0];
        if (f[1] != kRejectLabel) {
            auto it = std::find(class_names.begin(), class_names.end(), f[1]);
            if (it == class_names.end()) throw std::invalid_argument("unknown class '" + f[1] + "'");
            r.decision = static_cast<std::size_t>(it - class_names.begin());
        }
        r.confidence = parse_double(f[2]);
        r.ensemble = split_doubles(f[3], class_names.size());
        r.gbvs_head = branch_field(f[4], "gbvs_head", class_names.size());
        r.knn = branch_field(f[5], "knn", class_names.size());
        r.random_forest = branch_field(f[6], "rf", class_names.size());
        return r;
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("prediction record: ") + e.what(), 0);
    }
}

}  // namespace landmark

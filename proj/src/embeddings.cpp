#include "landmark/embeddings.hpp"

#include "landmark/binary_io.hpp"
#include "landmark/errors.hpp"
#include "landmark/fileio.hpp"
#include "landmark/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace landmark {

std::string_view split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
        case Split::unassigned: break;
    }
    return "-";
}

Split parse_split(std::string_view name) {
    if (name == "train") return Split::train;
    if (name == "val") return Split::val;
    if (name == "test") return Split::test;
    if (name == "-") return Split::unassigned;
    throw std::invalid_argument("unknown split '" + std::string(name) + "'");
}

std::vector<std::string> DatasetManifest::label_set() const {
    std::set<std::string> labels;
    for (const auto& e : entries) labels.insert(e.label);
    return {labels.begin(), labels.end()};
}

int DatasetManifest::class_index(const std::string& label) const {
    const auto labels = label_set();
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) {
        throw std::invalid_argument("label '" + label + "' not in manifest");
    }
    return static_cast<int>(it - labels.begin());
}

void DatasetManifest::validate() const {
    std::set<std::string> seen;
    for (const auto& e : entries) {
        if (e.image_path.empty()) throw std::invalid_argument("manifest: empty image path");
        if (e.label.empty()) throw std::invalid_argument("manifest: empty label for " + e.image_path);
        if (!seen.insert(e.image_path).second) {
            throw std::invalid_argument("manifest: duplicate image path " + e.image_path);
        }
    }
}

DatasetManifest parse_manifest(std::string_view text) {
    DatasetManifest m;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos) {
            throw FormatError("manifest line needs path<TAB>label<TAB>split", line_no);
        }
        ManifestEntry e;
        e.image_path = std::string(line.substr(0, t1));
        e.label = std::string(line.substr(t1 + 1, t2 - t1 - 1));
        try {
            e.split = parse_split(line.substr(t2 + 1));
        } catch (const std::invalid_argument& err) {
            throw FormatError(std::string("manifest: ") + err.what(), line_no);
        }
        m.entries.push_back(std::move(e));
    }
    m.validate();
    return m;
}

std::string format_manifest(const DatasetManifest& manifest) {
    std::string out;
    for (const auto& e : manifest.entries) {
        out += e.image_path;
        out += '\t';
        out += e.label;
        out += '\t';
        out += split_name(e.split);
        out += '\n';
    }
    return out;
}

DatasetManifest read_manifest(const std::filesystem::path& path) { return parse_manifest(read_file(path)); }

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    write_file_atomic(path, format_manifest(manifest));
}

SplitCounts split_counts(std::size_t class_size, const SplitRatios& ratios) {
    // The epsilon keeps exact products such as 0.8 * 10 from rounding the wrong way.
    const double m = static_cast<double>(class_size);
    SplitCounts c;
    c.train = static_cast<std::size_t>(std::floor(ratios.train * m + 1e-9));
    c.val = static_cast<std::size_t>(std::ceil(ratios.val * m - 1e-9));
    c.train = std::min(c.train, class_size);
    c.val = std::min(c.val, class_size - c.train);
    c.test = class_size - c.train - c.val;
    return c;
}

DatasetManifest split_dataset(const DatasetManifest& manifest, const SplitRatios& ratios, std::uint64_t seed) {
    manifest.validate();
    if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 ||
        std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
        throw std::invalid_argument("split_dataset: ratios must be non-negative and sum to 1");
    }
    DatasetManifest out = manifest;
    const auto labels = manifest.label_set();
    for (std::size_t ci = 0; ci < labels.size(); ++ci) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < out.entries.size(); ++i) {
            if (out.entries[i].label == labels[ci]) members.push_back(i);
        }
        if (members.size() < 3) {
            throw std::invalid_argument("split_dataset: class '" + labels[ci] + "' has " +
                                        std::to_string(members.size()) + " items, need at least 3");
        }
        auto rng = make_stream(seed, "split", ci);
        std::shuffle(members.begin(), members.end(), rng);
        const auto counts = split_counts(members.size(), ratios);
        for (std::size_t k = 0; k < members.size(); ++k) {
            Split s = Split::test;
            if (k < counts.train) {
                s = Split::train;
            } else if (k < counts.train + counts.val) {
                s = Split::val;
            }
            out.entries[members[k]].split = s;
        }
    }
    return out;
}

void EmbeddingStore::insert(const std::string& id, std::vector<float> values) {
    if (vectors.empty() && dim == 0) dim = static_cast<std::uint32_t>(values.size());
    if (values.size() != dim) {
        throw std::invalid_argument("embedding '" + id + "' has dim " + std::to_string(values.size()) +
                                    ", store dim is " + std::to_string(dim));
    }
    if (!std::all_of(values.begin(), values.end(), [](float v) { return std::isfinite(v); })) {
        throw std::invalid_argument("embedding '" + id + "' has non-finite values");
    }
    vectors[id] = std::move(values);
}

const std::vector<float>* EmbeddingStore::find(const std::string& id) const {
    auto it = vectors.find(id);
    return it == vectors.end() ? nullptr : &it->second;
}

namespace {
constexpr std::string_view kEmbeddingMagic = "EMB1";
}

std::string encode_embeddings(const EmbeddingStore& store) {
    ByteWriter w;
    w.put_bytes(kEmbeddingMagic);
    w.put<std::uint32_t>(store.dim);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(store.vectors.size()));
    for (const auto& [id, values] : store.vectors) {
        if (id.size() > 0xFFFF) throw std::invalid_argument("embedding id longer than 65535 bytes");
        if (values.size() != store.dim) throw std::invalid_argument("embedding '" + id + "' dim mismatch");
        w.put<std::uint16_t>(static_cast<std::uint16_t>(id.size()));
        w.put_bytes(id);
        for (float v : values) w.put<float>(v);
    }
    return w.take();
}

EmbeddingStore decode_embeddings(std::string_view bytes) {
    ByteReader r(bytes);
    if (r.get_bytes(4, "magic") != kEmbeddingMagic) {
        throw FormatError("bad embedding file magic, expected EMB1", 0);
    }
    EmbeddingStore store;
    store.dim = r.get<std::uint32_t>("dim");
    const auto count = r.get<std::uint32_t>("count");
    for (std::uint32_t k = 0; k < count; ++k) {
        const auto record_offset = r.offset();
        const auto len = r.get<std::uint16_t>("id length");
        std::string id(r.get_bytes(len, "id"));
        std::vector<float> values(store.dim);
        for (auto& v : values) v = r.get<float>("vector values");
        if (store.vectors.contains(id)) {
            throw FormatError("duplicate embedding id '" + id + "'", record_offset);
        }
        if (!std::all_of(values.begin(), values.end(), [](float v) { return std::isfinite(v); })) {
            throw FormatError("non-finite value in embedding '" + id + "'", record_offset);
        }
        store.vectors.emplace(std::move(id), std::move(values));
    }
    if (!r.at_end()) {
        throw FormatError("trailing bytes after " + std::to_string(count) + " records", r.offset());
    }
    return store;
}

void write_embeddings(const EmbeddingStore& store, const std::filesystem::path& path) {
    if (store.vectors.empty()) throw std::invalid_argument("write_embeddings: empty store");
    write_file_atomic(path, encode_embeddings(store));
}

EmbeddingStore read_embeddings(const std::filesystem::path& path) { return decode_embeddings(read_file(path)); }

std::string crop_id(const std::string& image_id, int rank) { return image_id + "#" + std::to_string(rank); }

namespace {

LabeledData join_rows(const EmbeddingStore& store, const DatasetManifest& manifest, Split split,
                      const std::vector<std::string>& suffix_ranks) {
    LabeledData out;
    out.class_names = manifest.label_set();
    out.features.cols = store.dim;
    std::vector<std::string> missing;
    for (const auto& e : manifest.entries) {
        if (e.split != split) continue;
        const int label = static_cast<int>(
            std::lower_bound(out.class_names.begin(), out.class_names.end(), e.label) - out.class_names.begin());
        for (const auto& suffix : suffix_ranks) {
            const auto id = e.image_path + suffix;
            const auto* v = store.find(id);
            if (v == nullptr) {
                missing.push_back(id);
                continue;
            }
            out.ids.push_back(id);
            out.features.append_row(*v);
            out.labels.push_back(label);
        }
    }
    if (!missing.empty()) {
        std::string msg = "missing embeddings for " + std::to_string(missing.size()) + " ids:";
        for (const auto& id : missing) msg += " " + id;
        throw MissingIdsError(msg);
    }
    return out;
}

}  // namespace

LabeledData join_embeddings(const EmbeddingStore& store, const DatasetManifest& manifest, Split split) {
    return join_rows(store, manifest, split, {""});
}

LabeledData join_crop_embeddings(const EmbeddingStore& store, const DatasetManifest& manifest, Split split,
                                 int num_regions) {
    std::vector<std::string> suffixes;
    for (int r = 1; r <= num_regions; ++r) suffixes.push_back("#" + std::to_string(r));
    return join_rows(store, manifest, split, suffixes);
}

}  // namespace landmark

#pragma once

#include "landmark/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace landmark {

enum class Split { unassigned, train, val, test };

std::string_view split_name(Split s);
Split parse_split(std::string_view name);

struct ManifestEntry {
    std::string image_path;
    std::string label;
    Split split = Split::unassigned;

    bool operator==(const ManifestEntry&) const = default;
};

/// Image list with labels and split assignment. The image path doubles as the image id.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    /// Sorted unique labels; a label's position is its class index.
    std::vector<std::string> label_set() const;
    int class_index(const std::string& label) const;

    /// Rejects duplicate paths and empty labels.
    void validate() const;

    bool operator==(const DatasetManifest&) const = default;
};

/// Lines of `path<TAB>label<TAB>split`; split is train, val, test or `-`.
DatasetManifest parse_manifest(std::string_view text);
std::string format_manifest(const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

struct SplitRatios {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

struct SplitCounts {
    std::size_t train = 0;
    std::size_t val = 0;
    std::size_t test = 0;

    bool operator==(const SplitCounts&) const = default;
};

/// train = floor(r_train * m), val = ceil(r_val * m), test takes the rest.
SplitCounts split_counts(std::size_t class_size, const SplitRatios& ratios);

/// Stratified per class, with a seeded per-class shuffle. Classes with fewer than 3 items are rejected.
DatasetManifest split_dataset(const DatasetManifest& manifest, const SplitRatios& ratios, std::uint64_t seed);

struct EmbeddingVector {
    std::string id;
    std::vector<float> values;
};

struct EmbeddingStore {
    std::uint32_t dim = 0;
    std::map<std::string, std::vector<float>> vectors;

    /// Throws std::invalid_argument on dim mismatch or non-finite values.
    void insert(const std::string& id, std::vector<float> values);
    const std::vector<float>* find(const std::string& id) const;

    bool operator==(const EmbeddingStore&) const = default;
};

/// "EMB1", u32 dim, u32 count, then per record u16 id length, id bytes, dim x f32 (all little-endian).
std::string encode_embeddings(const EmbeddingStore& store);
EmbeddingStore decode_embeddings(std::string_view bytes);
void write_embeddings(const EmbeddingStore& store, const std::filesystem::path& path);
EmbeddingStore read_embeddings(const std::filesystem::path& path);

/// Id of the crop at 1-based `rank` of an image.
std::string crop_id(const std::string& image_id, int rank);

struct LabeledData {
    std::vector<std::string> ids;
    FeatureMatrix features;
    std::vector<int> labels;
    std::vector<std::string> class_names;
};

/// Rows in manifest order for entries in `split`. Throws MissingIdsError listing every absent id.
LabeledData join_embeddings(const EmbeddingStore& store, const DatasetManifest& manifest, Split split);

/// Crop rows `id#1..id#num_regions` for each entry in `split`, labeled with the parent image's class.
LabeledData join_crop_embeddings(const EmbeddingStore& store, const DatasetManifest& manifest, Split split,
                                 int num_regions);

}  // namespace landmark

#pragma once

#include "landmark/embeddings.hpp"
#include "landmark/forest.hpp"
#include "landmark/gbvs.hpp"
#include "landmark/head.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace landmark {

struct SettingInfo {
    std::string key;            // config-file key, e.g. GRID_W
    std::string default_value;  // as written in a config file
    std::string help;
};

/// Every accepted config key with its default. Flags are the kebab-case lower form (`--grid-w`).
const std::vector<SettingInfo>& settings_catalog();
std::string flag_name(const std::string& key);

struct PipelineConfig {
    std::uint64_t seed = 42;
    int threads = 1;
    GbvsConfig gbvs;
    double sigma_act_fraction = 0.15;   // GbvsConfig sigmas are these times grid_w
    double sigma_norm_fraction = 0.06;
    int crop_size = 416;
    std::size_t knn_k = 5;
    ForestConfig forest;
    HeadTrainConfig head;
    double reject_threshold = 0.0;
    std::string extractor_cmd;

    /// Throws std::invalid_argument for unknown keys or unparsable values.
    void set(const std::string& key, const std::string& value);

    /// `key=value` lines; blank lines and `#` comments are skipped.
    void load_file(const std::filesystem::path& path);

    void validate() const;
};

/// Filesystem-safe stem for an image id; characters outside [A-Za-z0-9._-] become '_'.
std::string sanitize_id(const std::string& id);

/// Manifest image paths are relative to the manifest's directory unless absolute.
std::filesystem::path resolve_image(const std::filesystem::path& image_root, const std::string& image_path);

int cmd_split(const std::filesystem::path& manifest_in, const std::filesystem::path& manifest_out,
              const PipelineConfig& cfg, std::ostream& log);

struct SaliencyJob {
    std::string image_id;
    std::filesystem::path file;
};

/// Writes `<id>.saliency.png` and `<id>.regions.tsv` per image plus a combined `regions.tsv`
/// sorted by image id. With `write_crops`, also writes `<id>.crop<rank>.png` at crop_size.
/// Returns 0 iff every image succeeded.
int cmd_saliency(const std::vector<SaliencyJob>& jobs, const std::filesystem::path& out_dir,
                 const PipelineConfig& cfg, bool write_crops, std::ostream& log);

std::vector<SaliencyJob> jobs_from_manifest(const DatasetManifest& manifest, const std::filesystem::path& image_root);

/// Runs EXTRACTOR_CMD with `--manifest M --regions R --image-root DIR --output E`.
int run_extractor(const PipelineConfig& cfg, const std::filesystem::path& manifest,
                  const std::filesystem::path& regions, const std::filesystem::path& image_root,
                  const std::filesystem::path& output, std::ostream& log);

enum class Branch { knn, random_forest, head, all };
Branch parse_branch(const std::string& name);

/// Writes knn.sle, rf.sle and/or head.sle into `models_dir`.
int cmd_train(Branch branch, const std::filesystem::path& embeddings, const std::filesystem::path& manifest,
              const std::filesystem::path& models_dir, const PipelineConfig& cfg, std::ostream& log);

/// One record per manifest entry (optionally restricted to one split), sorted by image id.
/// Entries whose embeddings are missing are reported and skipped; the return code is then 1.
int cmd_predict(const std::filesystem::path& models_dir, const std::filesystem::path& embeddings,
                const std::filesystem::path& manifest, const std::filesystem::path& records_out,
                std::optional<Split> only_split, const PipelineConfig& cfg, std::ostream& log);

/// Predicts raw image files: saliency and EXTRACTOR_CMD run inside `work_dir`, then cmd_predict.
/// Relative image paths are taken from the current directory and double as record ids.
int cmd_predict_images(const std::filesystem::path& models_dir, const std::vector<std::filesystem::path>& images,
                       const std::filesystem::path& work_dir, const std::filesystem::path& records_out,
                       const PipelineConfig& cfg, std::ostream& log);

/// Writes `<out_prefix>.txt` (comparison table and per-split ensemble reports) and
/// `<out_prefix>.tsv` (`<model>.<split>.<key><TAB>value` lines).
int cmd_evaluate(const std::filesystem::path& records, const std::filesystem::path& manifest,
                 const std::filesystem::path& out_prefix, const PipelineConfig& cfg, std::ostream& log);

/// split (if any entry is unassigned) -> saliency -> extractor -> train -> predict -> evaluate,
/// all inside `work_dir`.
int cmd_run_all(const std::filesystem::path& manifest, const std::filesystem::path& work_dir,
                const PipelineConfig& cfg, std::ostream& log);

}  // namespace landmark

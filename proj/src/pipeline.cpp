#include "landmark/pipeline.hpp"

#include "landmark/errors.hpp"
#include "landmark/evaluation.hpp"
#include "landmark/fileio.hpp"
#include "landmark/model_io.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace landmark {

namespace fs = std::filesystem;

const std::vector<SettingInfo>& settings_catalog() {
    static const std::vector<SettingInfo> catalog = {
        {"SEED", "42", "seed for splitting, forest and head training"},
        {"THREADS", "1", "worker threads for per-image saliency (0 = hardware concurrency)"},
        {"GRID_W", "32", "saliency graph width in cells"},
        {"GRID_H", "32", "saliency graph height in cells"},
        {"SIGMA_ACT", "0.15", "activation falloff, fraction of grid width"},
        {"SIGMA_NORM", "0.06", "normalization falloff, fraction of grid width"},
        {"EPS_CLAMP", "1e-06", "positive floor applied to feature maps before log ratios"},
        {"POWER_ITER_TOL", "1e-09", "L1 residual tolerance for Markov equilibrium"},
        {"POWER_ITER_MAX", "10000", "iteration cap for Markov equilibrium"},
        {"NUM_REGIONS", "5", "salient regions (crops) per image"},
        {"SUPPRESSION_RADIUS", "0.16666666666666666", "peak suppression radius, fraction of grid width"},
        {"CROP_FRACTION", "0.5", "crop side as a fraction of the image's shorter side"},
        {"PYRAMID_LEVELS", "2", "pyramid levels per feature channel"},
        {"WORKING_MAX_SIDE", "256", "images with a longer side are downsampled before feature extraction"},
        {"CROP_SIZE", "416", "side of written crop images in pixels"},
        {"KNN_K", "5", "neighbours for the kNN branch"},
        {"RF_TREES", "100", "trees in the random forest"},
        {"RF_MAX_DEPTH", "0", "maximum tree depth (0 = unlimited)"},
        {"RF_FEATURES_PER_SPLIT", "0", "features tried per split (0 = floor(sqrt(dim)))"},
        {"RF_BOOTSTRAP", "true", "train each tree on a bootstrap sample"},
        {"HEAD_HIDDEN", "256", "hidden width of the softmax head"},
        {"HEAD_EPOCHS", "7", "head epochs on whole-image embeddings"},
        {"HEAD_CROP_EPOCHS", "7", "head epochs on salient-crop embeddings"},
        {"HEAD_BATCH", "32", "head mini-batch size"},
        {"HEAD_LR", "0.0001", "Adam learning rate"},
        {"REJECT_THRESHOLD", "0", "ensemble confidence below this is reported as REJECT"},
        {"EXTRACTOR_CMD", "", "command producing the embedding file (used by run-all and image predict)"},
    };
    return catalog;
}

std::string flag_name(const std::string& key) {
    std::string out = "--";
    for (char c : key) out += c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const char* end = value.data() + value.size();
    auto res = std::from_chars(value.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw std::invalid_argument("setting " + key + ": cannot parse '" + value + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("setting " + key + ": expected true/false, got '" + value + "'");
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) {
    static const std::map<std::string, std::function<void(PipelineConfig&, const std::string&)>> setters = {
        {"SEED", [](auto& c, const auto& v) { c.seed = parse_number<std::uint64_t>("SEED", v); }},
        {"THREADS", [](auto& c, const auto& v) { c.threads = parse_number<int>("THREADS", v); }},
        {"GRID_W", [](auto& c, const auto& v) { c.gbvs.grid_w = parse_number<int>("GRID_W", v); }},
        {"GRID_H", [](auto& c, const auto& v) { c.gbvs.grid_h = parse_number<int>("GRID_H", v); }},
        {"SIGMA_ACT", [](auto& c, const auto& v) { c.sigma_act_fraction = parse_number<double>("SIGMA_ACT", v); }},
        {"SIGMA_NORM", [](auto& c, const auto& v) { c.sigma_norm_fraction = parse_number<double>("SIGMA_NORM", v); }},
        {"EPS_CLAMP", [](auto& c, const auto& v) { c.gbvs.eps_clamp = parse_number<double>("EPS_CLAMP", v); }},
        {"POWER_ITER_TOL",
         [](auto& c, const auto& v) { c.gbvs.power_iter_tol = parse_number<double>("POWER_ITER_TOL", v); }},
        {"POWER_ITER_MAX",
         [](auto& c, const auto& v) { c.gbvs.power_iter_max = parse_number<int>("POWER_ITER_MAX", v); }},
        {"NUM_REGIONS",
         [](auto& c, const auto& v) {
             c.gbvs.num_regions = parse_number<int>("NUM_REGIONS", v);
             c.head.num_regions = c.gbvs.num_regions;
         }},
        {"SUPPRESSION_RADIUS",
         [](auto& c, const auto& v) { c.gbvs.suppression_radius = parse_number<double>("SUPPRESSION_RADIUS", v); }},
        {"CROP_FRACTION",
         [](auto& c, const auto& v) { c.gbvs.crop_fraction = parse_number<double>("CROP_FRACTION", v); }},
        {"PYRAMID_LEVELS",
         [](auto& c, const auto& v) { c.gbvs.pyramid_levels = parse_number<int>("PYRAMID_LEVELS", v); }},
        {"WORKING_MAX_SIDE",
         [](auto& c, const auto& v) { c.gbvs.working_max_side = parse_number<int>("WORKING_MAX_SIDE", v); }},
        {"CROP_SIZE", [](auto& c, const auto& v) { c.crop_size = parse_number<int>("CROP_SIZE", v); }},
        {"KNN_K", [](auto& c, const auto& v) { c.knn_k = parse_number<std::size_t>("KNN_K", v); }},
        {"RF_TREES", [](auto& c, const auto& v) { c.forest.n_trees = parse_number<std::size_t>("RF_TREES", v); }},
        {"RF_MAX_DEPTH",
         [](auto& c, const auto& v) { c.forest.max_depth = parse_number<std::size_t>("RF_MAX_DEPTH", v); }},
        {"RF_FEATURES_PER_SPLIT",
         [](auto& c, const auto& v) {
             c.forest.features_per_split = parse_number<std::size_t>("RF_FEATURES_PER_SPLIT", v);
         }},
        {"RF_BOOTSTRAP", [](auto& c, const auto& v) { c.forest.bootstrap = parse_bool("RF_BOOTSTRAP", v); }},
        {"HEAD_HIDDEN", [](auto& c, const auto& v) { c.head.hidden = parse_number<std::size_t>("HEAD_HIDDEN", v); }},
        {"HEAD_EPOCHS", [](auto& c, const auto& v) { c.head.epochs = parse_number<std::size_t>("HEAD_EPOCHS", v); }},
        {"HEAD_CROP_EPOCHS",
         [](auto& c, const auto& v) { c.head.crop_epochs = parse_number<std::size_t>("HEAD_CROP_EPOCHS", v); }},
        {"HEAD_BATCH", [](auto& c, const auto& v) { c.head.batch = parse_number<std::size_t>("HEAD_BATCH", v); }},
        {"HEAD_LR", [](auto& c, const auto& v) { c.head.lr = parse_number<double>("HEAD_LR", v); }},
        {"REJECT_THRESHOLD",
         [](auto& c, const auto& v) { c.reject_threshold = parse_number<double>("REJECT_THRESHOLD", v); }},
        {"EXTRACTOR_CMD", [](auto& c, const auto& v) { c.extractor_cmd = v; }},
    };
    auto it = setters.find(key);
    if (it == setters.end()) throw std::invalid_argument("unknown setting '" + key + "'");
    it->second(*this, value);
    gbvs.sigma_act = sigma_act_fraction * gbvs.grid_w;
    gbvs.sigma_norm = sigma_norm_fraction * gbvs.grid_w;
    forest.seed = seed;
    head.seed = seed;
}

void PipelineConfig::load_file(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("config line without '=' in " + path.string(), line_no);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void PipelineConfig::validate() const {
    gbvs.validate();
    if (threads < 0) throw std::invalid_argument("THREADS must be >= 0");
    if (crop_size < 1) throw std::invalid_argument("CROP_SIZE must be >= 1");
    if (knn_k < 1) throw std::invalid_argument("KNN_K must be >= 1");
    if (forest.n_trees < 1) throw std::invalid_argument("RF_TREES must be >= 1");
    if (head.hidden < 1 || head.batch < 1) throw std::invalid_argument("HEAD_HIDDEN and HEAD_BATCH must be >= 1");
    if (!(head.lr > 0.0)) throw std::invalid_argument("HEAD_LR must be > 0");
    if (!(reject_threshold >= 0.0 && reject_threshold < 1.0)) {
        throw std::invalid_argument("REJECT_THRESHOLD must lie in [0,1)");
    }
}

std::string sanitize_id(const std::string& id) {
    std::string out = id;
    for (char& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '_' || c == '-';
        if (!ok) c = '_';
    }
    return out;
}

fs::path resolve_image(const fs::path& image_root, const std::string& image_path) {
    fs::path p(image_path);
    return p.is_absolute() ? p : image_root / p;
}

namespace {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : static_cast<std::size_t>(threads);
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

fs::path manifest_root(const fs::path& manifest) {
    auto parent = manifest.parent_path();
    return parent.empty() ? fs::path(".") : parent;
}

}  // namespace

int cmd_split(const fs::path& manifest_in, const fs::path& manifest_out, const PipelineConfig& cfg,
              std::ostream& log) {
    const auto split = split_dataset(read_manifest(manifest_in), SplitRatios{}, cfg.seed);
    write_manifest(split, manifest_out);
    for (const auto& label : split.label_set()) {
        std::size_t counts[3] = {0, 0, 0};
        for (const auto& e : split.entries) {
            if (e.label != label) continue;
            if (e.split == Split::train) ++counts[0];
            if (e.split == Split::val) ++counts[1];
            if (e.split == Split::test) ++counts[2];
        }
        log << label << ": " << counts[0] << "/" << counts[1] << "/" << counts[2] << " (train/val/test)\n";
    }
    return 0;
}

std::vector<SaliencyJob> jobs_from_manifest(const DatasetManifest& manifest, const fs::path& image_root) {
    std::vector<SaliencyJob> jobs;
    for (const auto& e : manifest.entries) jobs.push_back({e.image_path, resolve_image(image_root, e.image_path)});
    return jobs;
}

int cmd_saliency(const std::vector<SaliencyJob>& jobs, const fs::path& out_dir, const PipelineConfig& cfg,
                 bool write_crops, std::ostream& log) {
    cfg.validate();
    fs::create_directories(out_dir);
    std::map<std::string, std::string> stems;
    for (const auto& j : jobs) {
        const auto stem = sanitize_id(j.image_id);
        auto [it, inserted] = stems.emplace(stem, j.image_id);
        if (!inserted) {
            throw std::invalid_argument("image ids '" + it->second + "' and '" + j.image_id +
                                        "' map to the same output name " + stem);
        }
    }

    std::vector<std::string> records(jobs.size());
    std::vector<std::string> errors(jobs.size());
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
        const auto& job = jobs[i];
        try {
            const auto img = load_image(job.file);
            const auto sal = compute_saliency(img, cfg.gbvs);
            const auto regions = top_k_regions(sal, cfg.gbvs);
            const auto stem = sanitize_id(job.image_id);
            save_map_png(sal.grid, out_dir / (stem + ".saliency.png"));
            std::string lines;
            for (std::size_t r = 0; r < regions.size(); ++r) {
                lines += format_region_record(job.image_id, static_cast<int>(r + 1), regions[r]) + "\n";
            }
            write_file_atomic(out_dir / (stem + ".regions.tsv"), lines);
            if (write_crops) {
                const auto crops = extract_crops(img, regions, cfg.crop_size);
                for (std::size_t r = 0; r < crops.size(); ++r) {
                    save_image_png(crops[r], out_dir / (stem + ".crop" + std::to_string(r + 1) + ".png"));
                }
            }
            records[i] = std::move(lines);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    std::vector<std::size_t> order(jobs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return jobs[a].image_id < jobs[b].image_id; });
    std::string combined;
    int failures = 0;
    for (auto i : order) {
        if (!errors[i].empty()) {
            log << "error: " << jobs[i].image_id << ": " << errors[i] << '\n';
            ++failures;
            continue;
        }
        combined += records[i];
    }
    write_file_atomic(out_dir / "regions.tsv", combined);
    log << "saliency: " << (jobs.size() - static_cast<std::size_t>(failures)) << " of " << jobs.size()
        << " images processed\n";
    return failures == 0 ? 0 : 1;
}

int run_extractor(const PipelineConfig& cfg, const fs::path& manifest, const fs::path& regions,
                  const fs::path& image_root, const fs::path& output, std::ostream& log) {
    if (cfg.extractor_cmd.empty()) {
        throw std::invalid_argument("EXTRACTOR_CMD is not set; cannot produce embeddings");
    }
    const std::string command = cfg.extractor_cmd + " --manifest " + shell_quote(manifest.string()) +
                                " --regions " + shell_quote(regions.string()) + " --image-root " +
                                shell_quote(image_root.string()) + " --output " + shell_quote(output.string());
    log << "running extractor: " << command << '\n';
    const int status = std::system(command.c_str());
    if (status != 0) {
        log << "error: extractor exited with status " << status << '\n';
        return 1;
    }
    return 0;
}

Branch parse_branch(const std::string& name) {
    if (name == "knn") return Branch::knn;
    if (name == "rf") return Branch::random_forest;
    if (name == "head") return Branch::head;
    if (name == "all") return Branch::all;
    throw std::invalid_argument("unknown branch '" + name + "' (expected knn, rf, head or all)");
}

int cmd_train(Branch branch, const fs::path& embeddings, const fs::path& manifest_path, const fs::path& models_dir,
              const PipelineConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto store = read_embeddings(embeddings);
    const auto manifest = read_manifest(manifest_path);
    fs::create_directories(models_dir);
    const bool all = branch == Branch::all;

    if (all || branch == Branch::knn || branch == Branch::random_forest) {
        auto train = join_embeddings(store, manifest, Split::train);
        if (train.ids.empty()) throw std::invalid_argument("train split is empty");
        if (all || branch == Branch::random_forest) {
            const auto rf = rf_fit(train.features, train.labels, train.class_names, cfg.forest);
            save_model(rf, models_dir / "rf.sle");
            log << "trained random forest: " << rf.trees.size() << " trees on " << train.ids.size() << " rows\n";
        }
        if (all || branch == Branch::knn) {
            const auto rows = train.ids.size();
            const auto knn = knn_fit(std::move(train.features), std::move(train.labels),
                                     std::move(train.class_names), std::min(cfg.knn_k, rows));
            save_model(knn, models_dir / "knn.sle");
            log << "trained kNN: k=" << knn.k << " over " << rows << " rows\n";
        }
    }
    if (all || branch == Branch::head) {
        const auto head = train_head(store, manifest, cfg.head);
        save_model(head, models_dir / "head.sle");
        log << "trained softmax head: hidden " << head.hidden << ", " << cfg.head.epochs << "+"
            << cfg.head.crop_epochs << " epochs\n";
    }
    return 0;
}

int cmd_predict(const fs::path& models_dir, const fs::path& embeddings, const fs::path& manifest_path,
                const fs::path& records_out, std::optional<Split> only_split, const PipelineConfig& cfg,
                std::ostream& log) {
    cfg.validate();
    const auto knn = load_knn(models_dir / "knn.sle");
    const auto rf = load_forest(models_dir / "rf.sle");
    const auto head = load_head(models_dir / "head.sle");
    if (knn.class_names != rf.class_names || knn.class_names != head.class_names) {
        throw std::invalid_argument("models were trained on different class sets");
    }
    const auto store = read_embeddings(embeddings);
    const auto manifest = read_manifest(manifest_path);
    const auto n_regions = static_cast<std::size_t>(cfg.gbvs.num_regions);

    std::vector<PredictionRecord> records;
    int failures = 0;
    for (const auto& e : manifest.entries) {
        if (only_split && e.split != *only_split) continue;
        std::vector<std::string> missing;
        const auto* whole = store.find(e.image_path);
        if (whole == nullptr) missing.push_back(e.image_path);
        std::vector<std::span<const float>> crops;
        for (std::size_t r = 1; r <= n_regions; ++r) {
            const auto id = crop_id(e.image_path, static_cast<int>(r));
            const auto* v = store.find(id);
            if (v == nullptr) missing.push_back(id);
            else crops.emplace_back(*v);
        }
        if (!missing.empty()) {
            log << "error: " << e.image_path << ": missing embeddings:";
            for (const auto& id : missing) log << ' ' << id;
            log << '\n';
            ++failures;
            continue;
        }
        records.push_back(make_record(e.image_path, predict_crop_batch(head, crops, n_regions),
                                      knn_predict_proba(knn, *whole), rf_predict_proba(rf, *whole),
                                      cfg.reject_threshold));
    }
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
    std::string out;
    for (const auto& r : records) out += format_record(r, knn.class_names) + "\n";
    if (records_out.has_parent_path()) fs::create_directories(records_out.parent_path());
    write_file_atomic(records_out, out);
    log << "predicted " << records.size() << " images\n";
    return failures == 0 ? 0 : 1;
}

int cmd_predict_images(const fs::path& models_dir, const std::vector<fs::path>& images, const fs::path& work_dir,
                       const fs::path& records_out, const PipelineConfig& cfg, std::ostream& log) {
    cfg.validate();
    if (images.empty()) throw std::invalid_argument("predict: no images given");
    DatasetManifest manifest;
    for (const auto& img : images) manifest.entries.push_back({img.string(), "unlabeled", Split::unassigned});
    manifest.validate();
    fs::create_directories(work_dir);
    const auto manifest_path = work_dir / "images.tsv";
    write_manifest(manifest, manifest_path);

    const auto image_root = fs::current_path();
    const auto saliency_dir = work_dir / "saliency";
    int status = cmd_saliency(jobs_from_manifest(manifest, image_root), saliency_dir, cfg, false, log);
    if (status != 0) return status;
    const auto embeddings = work_dir / "embeddings.emb";
    status = run_extractor(cfg, manifest_path, saliency_dir / "regions.tsv", image_root, embeddings, log);
    if (status != 0) return status;
    return cmd_predict(models_dir, embeddings, manifest_path, records_out, std::nullopt, cfg, log);
}

int cmd_evaluate(const fs::path& records_path, const fs::path& manifest_path, const fs::path& out_prefix,
                 const PipelineConfig&, std::ostream& log) {
    const auto manifest = read_manifest(manifest_path);
    const auto class_names = manifest.label_set();
    std::map<std::string, std::size_t> truth;
    std::map<std::string, Split> split_of;
    for (const auto& e : manifest.entries) {
        truth[e.image_path] = static_cast<std::size_t>(manifest.class_index(e.label));
        split_of[e.image_path] = e.split;
    }

    std::map<Split, std::vector<PredictionRecord>> by_split;
    std::istringstream in(read_file(records_path));
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> unknown;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        PredictionRecord rec;
        try {
            rec = parse_record(line, class_names);
        } catch (const FormatError& e) {
            throw FormatError(std::string(e.what()) + " in " + records_path.string(), line_no);
        }
        auto it = split_of.find(rec.image_id);
        if (it == split_of.end()) {
            unknown.push_back(rec.image_id);
            continue;
        }
        by_split[it->second].push_back(std::move(rec));
    }
    if (!unknown.empty()) {
        std::string msg = "records for ids not in the manifest:";
        for (const auto& id : unknown) msg += " " + id;
        throw MissingIdsError(msg);
    }

    const std::pair<const char*, const char*> models[] = {{"gbvs_head", "GBVS + softmax head"},
                                                          {"knn", "Embeddings + kNN"},
                                                          {"random_forest", "Embeddings + Random Forest"},
                                                          {"ensemble", "Average Ensemble"}};
    std::vector<ModelReports> table_rows;
    std::string tsv;
    for (const auto& [key, title] : models) {
        ModelReports mr{title, {}};
        for (const auto& [split, recs] : by_split) {
            EvaluationReport report = std::string(key) == "ensemble"
                                          ? evaluate(recs, truth, class_names)
                                          : evaluate_decisions(branch_decisions(recs, key), truth, class_names);
            std::istringstream lines(format_report_tsv(report));
            std::string kv;
            while (std::getline(lines, kv)) {
                tsv += std::string(key) + "." + std::string(split_name(split)) + "." + kv + "\n";
            }
            mr.by_split.emplace(split, std::move(report));
        }
        table_rows.push_back(std::move(mr));
    }
    if (by_split.empty()) throw std::invalid_argument("no prediction records to evaluate");
    const auto table = comparison_table(table_rows);
    std::string text = "Accuracy (%) by model and split\n\n" + table.text;
    for (const auto& [split, report] : table_rows.back().by_split) {
        text += "\nAverage Ensemble, " + std::string(split_name(split)) + " split\n" + format_report_text(report);
    }
    write_file_atomic(fs::path(out_prefix.string() + ".txt"), text);
    write_file_atomic(fs::path(out_prefix.string() + ".tsv"), tsv);
    log << table.text;
    return 0;
}

int cmd_run_all(const fs::path& manifest_path, const fs::path& work_dir, const PipelineConfig& cfg,
                std::ostream& log) {
    cfg.validate();
    fs::create_directories(work_dir);
    const auto image_root = fs::absolute(manifest_root(manifest_path));
    auto manifest = read_manifest(manifest_path);
    const auto split_manifest = work_dir / "manifest.tsv";
    const bool needs_split = std::any_of(manifest.entries.begin(), manifest.entries.end(),
                                         [](const auto& e) { return e.split == Split::unassigned; });
    if (needs_split) manifest = split_dataset(manifest, SplitRatios{}, cfg.seed);
    write_manifest(manifest, split_manifest);

    const auto saliency_dir = work_dir / "saliency";
    int status = cmd_saliency(jobs_from_manifest(manifest, image_root), saliency_dir, cfg, false, log);
    if (status != 0) return status;
    const auto embeddings = work_dir / "embeddings.emb";
    status = run_extractor(cfg, split_manifest, saliency_dir / "regions.tsv", image_root, embeddings, log);
    if (status != 0) return status;
    const auto models = work_dir / "models";
    status = cmd_train(Branch::all, embeddings, split_manifest, models, cfg, log);
    if (status != 0) return status;
    const auto records = work_dir / "predictions.tsv";
    status = cmd_predict(models, embeddings, split_manifest, records, std::nullopt, cfg, log);
    if (status != 0) return status;
    return cmd_evaluate(records, split_manifest, work_dir / "report", cfg, log);
}

}  // namespace landmark

#include "landmark/embeddings.hpp"
#include "landmark/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace landmark;

namespace {

fs::path parent_or_dot(const fs::path& p) {
    auto parent = p.parent_path();
    return parent.empty() ? fs::path(".") : parent;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Landmark classification: saliency, training, prediction and evaluation."};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_file;
    app.add_option("--config", config_file, "key=value settings file; flags given on the command line win")
        ->check(CLI::ExistingFile);

    // every setting doubles as a global flag; only flags actually given override the file
    std::map<std::string, std::string> flag_values;
    std::vector<std::pair<std::string, CLI::Option*>> setting_opts;
    for (const auto& s : settings_catalog()) {
        auto* opt = app.add_option(flag_name(s.key), flag_values[s.key], s.help + " [" + s.key + ", default: " +
                                                                             (s.default_value.empty() ? "unset" : s.default_value) + "]");
        opt->group("Settings");
        setting_opts.emplace_back(s.key, opt);
    }

    auto* split = app.add_subcommand("split", "Assign train/val/test 80:10:10 per class");
    fs::path split_in, split_out;
    split->add_option("--manifest", split_in, "input manifest")->required()->check(CLI::ExistingFile);
    split->add_option("--out", split_out, "output manifest")->required();

    auto* saliency = app.add_subcommand("saliency", "Saliency maps and top regions per image");
    fs::path sal_manifest, sal_root, sal_out;
    std::vector<fs::path> sal_images;
    bool write_crops = false;
    auto* sal_m = saliency->add_option("--manifest", sal_manifest, "manifest listing the images")->check(CLI::ExistingFile);
    auto* sal_i = saliency->add_option("--images", sal_images, "image files; the path as given is the image id");
    sal_m->excludes(sal_i);
    saliency->add_option("--image-root", sal_root, "directory manifest paths are relative to (default: manifest's directory)")
        ->needs(sal_m);
    saliency->add_option("--out", sal_out, "output directory")->required();
    saliency->add_flag("--write-crops", write_crops, "also write the salient crops as PNG at CROP_SIZE");

    auto* train = app.add_subcommand("train", "Fit classifier branches on embeddings of the train split");
    std::string branch_name = "all";
    fs::path train_emb, train_manifest, train_models;
    train->add_option("--branch", branch_name, "knn, rf, head or all")
        ->check(CLI::IsMember({"knn", "rf", "random_forest", "head", "all"}))
        ->capture_default_str();
    train->add_option("--embeddings", train_emb, "EMB1 embedding file")->required()->check(CLI::ExistingFile);
    train->add_option("--manifest", train_manifest, "split manifest")->required()->check(CLI::ExistingFile);
    train->add_option("--models", train_models, "output directory for model files")->required();

    auto* predict = app.add_subcommand("predict", "Prediction records from embeddings or raw images");
    fs::path pred_models, pred_emb, pred_manifest, pred_out, pred_work;
    std::string pred_split;
    std::vector<fs::path> pred_images;
    predict->add_option("--models", pred_models, "directory holding knn.sle, rf.sle and head.sle")
        ->required()
        ->check(CLI::ExistingDirectory);
    auto* p_emb = predict->add_option("--embeddings", pred_emb, "EMB1 embedding file")->check(CLI::ExistingFile);
    auto* p_man = predict->add_option("--manifest", pred_manifest, "manifest of the images to predict")->check(CLI::ExistingFile);
    auto* p_split = predict->add_option("--split", pred_split, "only entries of this split (train, val, test)");
    auto* p_img = predict->add_option("--images", pred_images, "image files; saliency and EXTRACTOR_CMD run first");
    auto* p_work = predict->add_option("--work", pred_work, "scratch directory for --images (default: <out>.work)");
    predict->add_option("--out", pred_out, "prediction records file")->required();
    p_emb->needs(p_man);
    p_man->needs(p_emb);
    p_split->needs(p_emb);
    p_img->excludes(p_emb)->excludes(p_man);
    p_work->needs(p_img);

    auto* evaluate = app.add_subcommand("evaluate", "Accuracy report per model and split");
    fs::path eval_records, eval_manifest, eval_out;
    evaluate->add_option("--records", eval_records, "prediction records file")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--manifest", eval_manifest, "split manifest with true labels")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--out", eval_out, "output prefix; writes <prefix>.txt and <prefix>.tsv")->required();

    auto* run_all = app.add_subcommand("run-all", "split, saliency, extractor, train, predict and evaluate");
    fs::path run_manifest, run_work;
    run_all->add_option("--manifest", run_manifest, "dataset manifest")->required()->check(CLI::ExistingFile);
    run_all->add_option("--work", run_work, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig cfg;
        if (!config_file.empty()) cfg.load_file(config_file);
        for (const auto& [key, opt] : setting_opts)
            if (opt->count() > 0) cfg.set(key, flag_values[key]);
        cfg.validate();

        auto& log = std::cerr;
        if (split->parsed()) return cmd_split(split_in, split_out, cfg, log);
        if (saliency->parsed()) {
            std::vector<SaliencyJob> jobs;
            if (sal_m->count()) {
                jobs = jobs_from_manifest(read_manifest(sal_manifest), sal_root.empty() ? parent_or_dot(sal_manifest) : sal_root);
            } else if (!sal_images.empty()) {
                for (const auto& img : sal_images) jobs.push_back({img.generic_string(), img});
            } else {
                throw std::invalid_argument("saliency needs --manifest or --images");
            }
            return cmd_saliency(jobs, sal_out, cfg, write_crops, log);
        }
        if (train->parsed()) return cmd_train(parse_branch(branch_name), train_emb, train_manifest, train_models, cfg, log);
        if (predict->parsed()) {
            if (!pred_images.empty()) {
                const auto work = pred_work.empty() ? fs::path(pred_out.string() + ".work") : pred_work;
                return cmd_predict_images(pred_models, pred_images, work, pred_out, cfg, log);
            }
            if (pred_emb.empty()) throw std::invalid_argument("predict needs --embeddings and --manifest, or --images");
            std::optional<Split> only;
            if (!pred_split.empty()) only = parse_split(pred_split);
            return cmd_predict(pred_models, pred_emb, pred_manifest, pred_out, only, cfg, log);
        }
        if (evaluate->parsed()) return cmd_evaluate(eval_records, eval_manifest, eval_out, cfg, std::cout);
        if (run_all->parsed()) return cmd_run_all(run_manifest, run_work, cfg, log);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

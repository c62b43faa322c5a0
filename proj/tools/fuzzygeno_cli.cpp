// Command-line front end for the fuzzygeno shared library. Talks to the core
// exclusively through the C API in fuzzygeno/capi.h.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "fuzzygeno/capi.h"

namespace fs = std::filesystem;

namespace {

struct ReportDeleter {
    void operator()(fg_report* r) const { fg_report_free(r); }
};
struct ModelDeleter {
    void operator()(fg_model* m) const { fg_model_free(m); }
};
struct DatasetDeleter {
    void operator()(fg_dataset* d) const { fg_dataset_free(d); }
};

using ReportPtr = std::unique_ptr<fg_report, ReportDeleter>;
using ModelPtr = std::unique_ptr<fg_model, ModelDeleter>;
using DatasetPtr = std::unique_ptr<fg_dataset, DatasetDeleter>;

int fail(fg_status status) {
    std::cerr << "error: " << fg_error_message() << "\n";
    return static_cast<int>(status);
}

int write_report_files(const fg_report* report, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    for (int i = 0; i < fg_report_count(report); ++i) {
        const char* key = fg_report_key(report, i);
        int size = 0;
        const char* data = fg_report_get(report, key, &size);
        std::ofstream out(fs::path(dir) / key, std::ios::binary);
        out.write(data, size);
        if (!out) {
            std::cerr << "error: cannot write " << (fs::path(dir) / key).string() << "\n";
            return 3;
        }
    }
    return 0;
}

void print_entry(const fg_report* report, const char* key) {
    int size = 0;
    if (const char* v = fg_report_get(report, key, &size)) std::cout.write(v, size);
}

struct CommonArgs {
    std::string data;
    std::string model_path;
    std::string out_path;
    std::string report_dir;
    std::string groups_file;
    std::string idx_labels;
    bool invert = false;
    bool trace = false;
    fg_train_options opts{};
};

DatasetPtr load_dataset_or_null(const CommonArgs& args, fg_status& status) {
    fg_dataset* ds = nullptr;
    status = fg_dataset_load(args.data.c_str(),
                             args.idx_labels.empty() ? nullptr : args.idx_labels.c_str(),
                             args.invert ? 1 : 0, &ds);
    return DatasetPtr(ds);
}

int run_train(const CommonArgs& args) {
    fg_status status;
    DatasetPtr ds = load_dataset_or_null(args, status);
    if (status != FG_OK) return fail(status);

    fg_train_options opts = args.opts;
    if (!args.groups_file.empty()) opts.groups_file = args.groups_file.c_str();

    fg_model* model = nullptr;
    fg_report* report = nullptr;
    status = fg_train(ds.get(), &opts, &model, &report);
    if (status != FG_OK) return fail(status);
    ModelPtr model_guard(model);
    ReportPtr report_guard(report);

    status = fg_model_save(model, args.out_path.c_str());
    if (status != FG_OK) return fail(status);

    print_entry(report, "summary.txt");
    if (!args.report_dir.empty())
        if (int rc = write_report_files(report, args.report_dir)) return rc;
    return 0;
}

int run_evaluate(const CommonArgs& args) {
    fg_model* model = nullptr;
    fg_status status = fg_model_load(args.model_path.c_str(), &model);
    if (status != FG_OK) return fail(status);
    ModelPtr model_guard(model);

    DatasetPtr ds = load_dataset_or_null(args, status);
    if (status != FG_OK) return fail(status);

    fg_report* report = nullptr;
    status = fg_evaluate(model, ds.get(), &report);
    if (status != FG_OK) return fail(status);
    ReportPtr report_guard(report);

    std::cout << "accuracy_pass1\t";
    print_entry(report, "accuracy_pass1");
    std::cout << "\naccuracy_pass2\t";
    print_entry(report, "accuracy_pass2");
    std::cout << "\nconfusion_pass1:\n";
    print_entry(report, "confusion_pass1.tsv");
    std::cout << "confusion_pass2:\n";
    print_entry(report, "confusion_pass2.tsv");
    if (!args.report_dir.empty())
        if (int rc = write_report_files(report, args.report_dir)) return rc;
    return 0;
}

int run_classify(const CommonArgs& args, const std::string& image) {
    fg_model* model = nullptr;
    fg_status status = fg_model_load(args.model_path.c_str(), &model);
    if (status != FG_OK) return fail(status);
    ModelPtr model_guard(model);

    fg_report* report = nullptr;
    status = fg_classify_file(model, image.c_str(), args.invert ? 1 : 0, args.trace ? 1 : 0,
                              &report);
    if (status != FG_OK) return fail(status);
    ReportPtr report_guard(report);

    std::cout << "final\t";
    print_entry(report, "final_label");
    std::cout << "\ncoarse\t";
    print_entry(report, "coarse_label");
    std::cout << "\ngroup\t";
    print_entry(report, "group_used");
    std::cout << "\nscores:\n";
    print_entry(report, "scores.tsv");
    if (args.trace) {
        std::cout << "features:\n";
        print_entry(report, "features.tsv");
        if (fg_report_get(report, "group_features.tsv", nullptr)) {
            std::cout << "group_features:\n";
            print_entry(report, "group_features.tsv");
        }
    }
    return 0;
}

int run_inspect_overlaps(const CommonArgs& args) {
    fg_status status;
    DatasetPtr ds = load_dataset_or_null(args, status);
    if (status != FG_OK) return fail(status);

    fg_report* report = nullptr;
    status = fg_inspect_overlaps(ds.get(), &report);
    if (status != FG_OK) return fail(status);
    ReportPtr report_guard(report);

    std::string dir = args.report_dir.empty() ? "." : args.report_dir;
    return write_report_files(report, dir);
}

int run_inspect_partitions(const CommonArgs& args) {
    fg_model* model = nullptr;
    fg_status status = fg_model_load(args.model_path.c_str(), &model);
    if (status != FG_OK) return fail(status);
    ModelPtr model_guard(model);

    fg_report* report = nullptr;
    status = fg_inspect_partitions(model, &report);
    if (status != FG_OK) return fail(status);
    ReportPtr report_guard(report);

    for (int i = 0; i < fg_report_count(report); ++i) {
        std::string key = fg_report_key(report, i);
        if (key.size() > 4 && key.compare(key.size() - 4, 4, ".txt") == 0) {
            std::cout.write(key.data(), static_cast<std::streamsize>(key.size() - 4));
            std::cout << "\t";
            print_entry(report, key.c_str());
        }
    }
    if (!args.report_dir.empty()) return write_report_files(report, args.report_dir);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fuzzygeno: two-pass fuzzy-genetic pattern classifier"};
    app.set_config("--config", "", "flat key = value configuration file");
    app.require_subcommand(1);

    CommonArgs args;
    fg_train_options_init(&args.opts);
    std::uint64_t seed = 0;

    auto add_ga_flags = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--pop", args.opts.population_size, "GA population size");
        cmd->add_option("--generations", args.opts.max_generations, "GA generation limit");
        cmd->add_option("--stall", args.opts.stall_generations,
                        "stop after this many generations without improvement");
        cmd->add_option("--tournament", args.opts.tournament_size, "tournament size");
        cmd->add_option("--crossover-prob", args.opts.crossover_prob, "crossover probability");
        cmd->add_option("--mutation-prob", args.opts.mutation_prob, "mutation probability");
        cmd->add_option("--elites", args.opts.elite_count, "elite count");
        cmd->add_option("--min-cuts", args.opts.min_cuts, "minimum cuts per chromosome part");
        cmd->add_option("--max-cuts", args.opts.max_cuts, "maximum cuts per chromosome part");
        cmd->add_option("--ramp", args.opts.ramp_half_width, "fuzzy ramp half-width (pixels)");
        cmd->add_option("--pair-threshold", args.opts.pair_threshold,
                        "minimum symmetrized confusion count for grouping");
        cmd->add_option("--region-threshold", args.opts.region_threshold,
                        "overlap disagreement cutoff for region detection");
        cmd->add_option("--groups-file", args.groups_file,
                        "file of forced groups (members=...; region=...)");
    };

    auto* train = app.add_subcommand("train", "train a two-pass model");
    train->add_option("--data", args.data, "dataset directory or IDX image file")->required();
    train->add_option("--labels", args.idx_labels, "IDX label file (switches to IDX mode)");
    train->add_option("--out", args.out_path, "output model path")->required();
    train->add_option("--report-dir", args.report_dir, "directory for TSV reports and traces");
    train->add_flag("--invert", args.invert, "treat dark pixels as background");
    add_ga_flags(train);

    auto* evaluate = app.add_subcommand("evaluate", "evaluate a model against a dataset");
    evaluate->add_option("--model", args.model_path, "model file")->required();
    evaluate->add_option("--data", args.data, "dataset directory or IDX image file")->required();
    evaluate->add_option("--labels", args.idx_labels, "IDX label file");
    evaluate->add_option("--report-dir", args.report_dir, "directory for TSV reports");
    evaluate->add_flag("--invert", args.invert, "treat dark pixels as background");

    std::string image_path;
    auto* classify = app.add_subcommand("classify", "classify a single PGM image");
    classify->add_option("--model", args.model_path, "model file")->required();
    classify->add_option("image", image_path, "PGM image to classify")->required();
    classify->add_flag("--invert", args.invert, "treat dark pixels as background");
    classify->add_flag("--trace", args.trace, "also print per-cell feature values");

    auto* inspect = app.add_subcommand("inspect", "inspection dumps");
    auto* overlaps = inspect->add_subcommand("overlaps", "write per-class overlap PGMs");
    overlaps->add_option("--data", args.data, "dataset directory or IDX image file")->required();
    overlaps->add_option("--labels", args.idx_labels, "IDX label file");
    overlaps->add_option("--report-dir", args.report_dir, "output directory (default: .)");
    overlaps->add_flag("--invert", args.invert, "treat dark pixels as background");
    auto* partitions = inspect->add_subcommand("partitions",
                                               "print chromosome text and write partition PGMs");
    partitions->add_option("--model", args.model_path, "model file")->required();
    partitions->add_option("--report-dir", args.report_dir, "output directory for PGMs");
    inspect->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    args.opts.seed = seed;

    if (train->parsed()) return run_train(args);
    if (evaluate->parsed()) return run_evaluate(args);
    if (classify->parsed()) return run_classify(args, image_path);
    if (inspect->parsed()) {
        if (overlaps->parsed()) return run_inspect_overlaps(args);
        if (partitions->parsed()) return run_inspect_partitions(args);
    }
    return 1;
}

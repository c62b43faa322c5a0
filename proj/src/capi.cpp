#include "fuzzygeno/capi.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fuzzygeno/pipeline.hpp"

using namespace fuzzygeno;

struct fg_dataset {
    LabeledSet set;
};

struct fg_model {
    TwoPassModel model;
};

struct fg_report {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(std::string key, std::string value) {
        entries.emplace_back(std::move(key), std::move(value));
    }
};

namespace {

thread_local std::string g_last_error;

fg_status fail(fg_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename Fn>
fg_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return FG_OK;
    } catch (const ModelError& e) {
        return fail(FG_ERR_MODEL, e.what());
    } catch (const DataError& e) {
        return fail(FG_ERR_DATA, e.what());
    } catch (const std::exception& e) {
        return fail(FG_ERR_USAGE, e.what());
    }
}

std::string pgm_bytes(std::span<const double> pixels, int width, int height) {
    std::ostringstream out;
    out << "P5\n" << width << " " << height << "\n255\n";
    for (double v : pixels) {
        double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        out.put(static_cast<char>(std::lround(c * 255.0)));
    }
    return out.str();
}

std::string members_key(const std::vector<int>& members) {
    std::string s;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) s += '-';
        s += std::to_string(members[i]);
    }
    return s;
}

std::string format_rate(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string partition_pgm(const Chromosome& ch) {
    std::array<double, kFrameSize * kFrameSize> px;
    px.fill(0.75);
    for (int r = ch.region.top; r <= ch.region.bottom; ++r)
        for (int c = ch.region.left; c <= ch.region.right; ++c)
            px[static_cast<std::size_t>(r) * kFrameSize + c] = 1.0;
    for (int cut : ch.h_cuts)
        for (int c = ch.region.left; c <= ch.region.right; ++c)
            px[static_cast<std::size_t>(cut) * kFrameSize + c] = 0.0;
    for (int cut : ch.v_cuts)
        for (int r = ch.region.top; r <= ch.region.bottom; ++r)
            px[static_cast<std::size_t>(r) * kFrameSize + cut] = 0.0;
    return pgm_bytes(px, kFrameSize, kFrameSize);
}

}  // namespace

extern "C" {

void fg_train_options_init(fg_train_options* opts) {
    GAConfig ga;
    GroupingConfig grouping;
    FuzzyParams fp;
    *opts = fg_train_options{};
    opts->population_size = ga.population_size;
    opts->max_generations = ga.max_generations;
    opts->stall_generations = ga.stall_generations;
    opts->tournament_size = ga.tournament_size;
    opts->crossover_prob = ga.crossover_prob;
    opts->mutation_prob = ga.mutation_prob;
    opts->elite_count = ga.elite_count;
    opts->min_cuts = ga.cut_bounds.min_cuts;
    opts->max_cuts = ga.cut_bounds.max_cuts;
    opts->seed = ga.seed;
    opts->ramp_half_width = fp.ramp_half_width;
    opts->pair_threshold = grouping.pair_threshold;
    opts->region_threshold = grouping.region_threshold;
    opts->groups_file = nullptr;
}

const char* fg_version(void) { return kModelVersion; }

const char* fg_error_message(void) { return g_last_error.c_str(); }

fg_status fg_dataset_load(const char* path, const char* labels_path, int invert,
                          fg_dataset** out) {
    if (!path || !out) return fail(FG_ERR_USAGE, "fg_dataset_load: null argument");
    return guarded([&] {
        LoaderOptions opts;
        opts.invert = invert != 0;
        if (labels_path) {
            opts.idx = true;
            opts.idx_labels_path = labels_path;
        }
        auto ds = std::make_unique<fg_dataset>();
        ds->set = load_dataset(path, opts);
        *out = ds.release();
    });
}

void fg_dataset_free(fg_dataset* ds) { delete ds; }

int fg_dataset_size(const fg_dataset* ds) {
    return ds ? static_cast<int>(ds->set.items.size()) : 0;
}

int fg_dataset_class_count(const fg_dataset* ds) {
    return ds ? static_cast<int>(ds->set.classes.size()) : 0;
}

fg_status fg_train(const fg_dataset* ds, const fg_train_options* opts, fg_model** out_model,
                   fg_report** out_report) {
    if (!ds || !opts || !out_model) return fail(FG_ERR_USAGE, "fg_train: null argument");
    return guarded([&] {
        GAConfig ga;
        ga.population_size = opts->population_size;
        ga.max_generations = opts->max_generations;
        ga.stall_generations = opts->stall_generations;
        ga.tournament_size = opts->tournament_size;
        ga.crossover_prob = opts->crossover_prob;
        ga.mutation_prob = opts->mutation_prob;
        ga.elite_count = opts->elite_count;
        ga.cut_bounds = CutBounds{opts->min_cuts, opts->max_cuts};
        ga.seed = opts->seed;
        FuzzyParams fp{opts->ramp_half_width};
        GroupingConfig grouping;
        grouping.pair_threshold = opts->pair_threshold;
        grouping.region_threshold = opts->region_threshold;
        if (opts->groups_file) {
            std::ifstream in(opts->groups_file, std::ios::binary);
            if (!in) throw DataError(std::string("cannot open groups file: ") + opts->groups_file);
            std::ostringstream buf;
            buf << in.rdbuf();
            grouping.forced_groups = parse_groups_file(buf.str());
        }

        CoarseResult coarse = train_coarse(ds->set, ga, fp);
        GroupTrainingResult groups = train_groups(ds->set, coarse.cm, grouping, ga, fp);

        auto model = std::make_unique<fg_model>();
        model->model.fuzzy_params = fp;
        model->model.coarse = coarse.models;
        model->model.groups = groups.groups;

        if (out_report) {
            EvalReport eval = evaluate(ds->set, model->model);
            auto report = std::make_unique<fg_report>();

            std::ostringstream summary;
            summary << "samples\t" << ds->set.items.size() << "\n"
                    << "classes\t" << ds->set.classes.size() << "\n"
                    << "coarse_chromosome\t" << chromosome_to_text(coarse.models.chromosome) << "\n"
                    << "accuracy_pass1\t" << format_rate(eval.accuracy1) << "\n"
                    << "accuracy_pass2\t" << format_rate(eval.accuracy2) << "\n";
            std::vector<GroupSpec> specs;
            for (const auto& g : model->model.groups) {
                specs.push_back(g.spec);
                summary << "group\t" << members_key(g.spec.members) << "\tregion\t"
                        << g.spec.region.top << ',' << g.spec.region.left << ','
                        << g.spec.region.bottom << ',' << g.spec.region.right << "\trate\t"
                        << format_rate(g.group_rate) << "\n";
            }
            for (const auto& w : groups.warnings) summary << "warning\t" << w << "\n";

            report->add("summary.txt", summary.str());
            report->add("confusion_pass1.tsv", confusion_to_tsv(eval.pass1));
            report->add("confusion_pass2.tsv", confusion_to_tsv(eval.pass2));
            report->add("trace_coarse.tsv", trace_to_tsv(coarse.trace));
            for (std::size_t i = 0; i < groups.groups.size(); ++i)
                report->add("trace_group_" + members_key(groups.groups[i].spec.members) + ".tsv",
                            trace_to_tsv(groups.traces[i]));
            report->add("groups.txt", format_groups_file(specs));
            *out_report = report.release();
        }
        *out_model = model.release();
    });
}

fg_status fg_model_save(const fg_model* model, const char* path) {
    if (!model || !path) return fail(FG_ERR_USAGE, "fg_model_save: null argument");
    return guarded([&] { save_model(model->model, path); });
}

fg_status fg_model_load(const char* path, fg_model** out) {
    if (!path || !out) return fail(FG_ERR_USAGE, "fg_model_load: null argument");
    return guarded([&] {
        auto model = std::make_unique<fg_model>();
        model->model = load_model(path);
        *out = model.release();
    });
}

void fg_model_free(fg_model* model) { delete model; }

fg_status fg_evaluate(const fg_model* model, const fg_dataset* ds, fg_report** out) {
    if (!model || !ds || !out) return fail(FG_ERR_USAGE, "fg_evaluate: null argument");
    return guarded([&] {
        EvalReport eval = evaluate(ds->set, model->model);
        auto report = std::make_unique<fg_report>();
        report->add("accuracy_pass1", format_rate(eval.accuracy1));
        report->add("accuracy_pass2", format_rate(eval.accuracy2));
        report->add("confusion_pass1.tsv", confusion_to_tsv(eval.pass1));
        report->add("confusion_pass2.tsv", confusion_to_tsv(eval.pass2));
        for (const auto& [members, rate] : eval.group_rates)
            report->add("group_rate_" + members_key(members), format_rate(rate));
        *out = report.release();
    });
}

fg_status fg_classify_file(const fg_model* model, const char* image_path, int invert, int trace,
                           fg_report** out) {
    if (!model || !image_path || !out)
        return fail(FG_ERR_USAGE, "fg_classify_file: null argument");
    return guarded([&] {
        NormImage img = normalize(read_pgm(image_path), invert != 0);
        ClassificationTrace result = classify_two_pass(img, model->model);

        auto report = std::make_unique<fg_report>();
        report->add("final_label", std::to_string(result.final_prediction.label));
        report->add("coarse_label", std::to_string(result.coarse_prediction.label));
        report->add("group_used", result.group_used ? members_key(*result.group_used) : "-");
        std::ostringstream scores;
        for (const auto& [label, s] : result.coarse_prediction.scores)
            scores << label << '\t' << format_rate(s) << '\n';
        report->add("scores.tsv", scores.str());
        if (trace) {
            std::ostringstream features;
            for (double v : result.coarse_features) features << format_rate(v) << '\n';
            report->add("features.tsv", features.str());
            if (!result.group_features.empty()) {
                std::ostringstream gf;
                for (double v : result.group_features) gf << format_rate(v) << '\n';
                report->add("group_features.tsv", gf.str());
            }
        }
        *out = report.release();
    });
}

fg_status fg_inspect_overlaps(const fg_dataset* ds, fg_report** out) {
    if (!ds || !out) return fail(FG_ERR_USAGE, "fg_inspect_overlaps: null argument");
    return guarded([&] {
        if (ds->set.items.empty()) throw DataError("inspect overlaps: empty dataset");
        auto report = std::make_unique<fg_report>();
        for (int label : ds->set.classes) {
            std::vector<NormImage> samples;
            for (const auto& item : ds->set.items)
                if (item.label == label) samples.push_back(item.image);
            OverlapImage ov = overlap_image(samples, label);
            report->add("overlap_" + std::to_string(label) + ".pgm",
                        pgm_bytes(ov.pixels, kFrameSize, kFrameSize));
        }
        *out = report.release();
    });
}

fg_status fg_inspect_partitions(const fg_model* model, fg_report** out) {
    if (!model || !out) return fail(FG_ERR_USAGE, "fg_inspect_partitions: null argument");
    return guarded([&] {
        auto report = std::make_unique<fg_report>();
        report->add("coarse.txt", chromosome_to_text(model->model.coarse.chromosome) + "\n");
        report->add("coarse.pgm", partition_pgm(model->model.coarse.chromosome));
        for (const auto& g : model->model.groups) {
            std::string key = members_key(g.spec.members);
            report->add("group_" + key + ".txt",
                        chromosome_to_text(g.models.chromosome) + "\n");
            report->add("group_" + key + ".pgm", partition_pgm(g.models.chromosome));
        }
        *out = report.release();
    });
}

int fg_report_count(const fg_report* report) {
    return report ? static_cast<int>(report->entries.size()) : 0;
}

const char* fg_report_key(const fg_report* report, int index) {
    if (!report || index < 0 || index >= static_cast<int>(report->entries.size())) return nullptr;
    return report->entries[static_cast<std::size_t>(index)].first.c_str();
}

const char* fg_report_get(const fg_report* report, const char* key, int* size_out) {
    if (!report || !key) return nullptr;
    for (const auto& [k, v] : report->entries)
        if (k == key) {
            if (size_out) *size_out = static_cast<int>(v.size());
            return v.data();
        }
    return nullptr;
}

void fg_report_free(fg_report* report) { delete report; }

}  // extern "C"

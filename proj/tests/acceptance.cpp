// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Oracles here are independent double-loop implementations.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include "fuzzygeno/pipeline.hpp"
#include "test_support.hpp"

using namespace fuzzygeno;
using testsupport::make_image;

namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!ok) ++failures;
}

// ---- criterion 1: published-matrix arithmetic ---------------------------------

void criterion1() {
    ConfusionMatrix pass1 = testsupport::published_pass1_matrix();
    ConfusionMatrix pass2 = testsupport::published_pass2_matrix();
    bool ok = pass1.diagonal() == 431 && pass1.total() == 500 && accuracy(pass1) == 431.0 / 500.0 &&
              pass2.diagonal() == 452 && pass2.total() == 500 && accuracy(pass2) == 452.0 / 500.0;
    report(1, ok, "published matrices give exactly 431/500 = 0.862 and 452/500 = 0.904");
}

// ---- criterion 2: group recovery ------------------------------------------

void criterion2() {
    ConfusionMatrix pass1 = testsupport::published_pass1_matrix();
    std::vector<std::vector<int>> expected{{0, 5}, {1, 9}, {3, 6}};
    bool ok = true;
    for (int tau = 5; tau <= 7; ++tau) ok = ok && form_groups(pass1, tau) == expected;
    report(2, ok, "tau in [5,7] recovers groups {0,5},{1,9},{3,6} with {2,4,7,8} ungrouped");
}

// ---- criterion 3: partition of unity --------------------------------------

void criterion3() {
    Rng rng(1001);
    CutBounds bounds;
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        Chromosome ch = random_chromosome(full_frame(), bounds, rng);
        int w = rng.uniform_int(0, 8);
        const auto& cuts = trial % 2 == 0 ? ch.h_cuts : ch.v_cuts;
        for (int coord = cuts.front(); coord <= cuts.back(); ++coord) {
            auto mu = strip_memberships(cuts, w, coord);
            double sum = std::accumulate(mu.begin(), mu.end(), 0.0);
            if (std::abs(sum - 1.0) >= 1e-12) ok = false;
            for (double m : mu)
                if (m < 0.0) ok = false;
        }
    }
    report(3, ok, "memberships sum to 1 within 1e-12 over 1000 random (chromosome, w) draws");
}

// ---- criterion 4: crisp oracle equivalence --------------------------------

void criterion4() {
    Rng rng(2002);
    CutBounds bounds;
    FuzzyParams crisp{0};
    bool ok = true;
    for (int trial = 0; trial < 200 && ok; ++trial) {
        Chromosome ch = random_chromosome(full_frame(), bounds, rng);
        NormImage img = make_image([&](int, int) { return rng.uniform01(); });
        FeatureVector fast = extract_features(img, ch, crisp);
        FeatureVector oracle = testsupport::crisp_features_oracle(img, ch);
        if (fast.size() != oracle.size()) ok = false;
        for (std::size_t i = 0; ok && i < fast.size(); ++i)
            if (fast[i] != oracle[i]) ok = false;
    }
    report(4, ok, "w = 0 features equal the brute-force crisp means exactly (200 random pairs)");
}

// ---- criterion 5: GA contracts --------------------------------------------

void criterion5() {
    auto start = std::chrono::steady_clock::now();
    Rng data_rng(3003);
    LabeledSet set;
    for (int label = 0; label < 4; ++label) {
        for (int s = 0; s < 25; ++s) {
            LabeledItem item;
            item.label = label;
            item.image = make_image([&](int r, int c) {
                double base = ((r / 8 + c / 8 + label) % 4 == 0) ? 1.0 : 0.0;
                double v = base + 0.2 * (2.0 * data_rng.uniform01() - 1.0);
                return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
            });
            set.items.push_back(std::move(item));
        }
        set.classes.push_back(label);
    }

    bool ok = true;
    FuzzyParams fp;
    for (int seed = 1; seed <= 20 && ok; ++seed) {
        GAConfig cfg;
        cfg.population_size = 12;
        cfg.max_generations = 10;
        cfg.stall_generations = 0;
        cfg.seed = static_cast<std::uint64_t>(seed);

        bool all_valid = true;
        auto [best_a, trace_a] =
            evolve(set, full_frame(), cfg, fp, set.classes,
                   [&](int, const std::vector<Individual>& pop) {
                       for (const auto& ind : pop)
                           all_valid = all_valid && is_valid(ind.chromosome, cfg.cut_bounds);
                   });
        ok = ok && all_valid;
        for (std::size_t i = 1; i < trace_a.size(); ++i)
            ok = ok && trace_a[i].best_fitness >= trace_a[i - 1].best_fitness;

        auto [best_b, trace_b] = evolve(set, full_frame(), cfg, fp, set.classes);
        ok = ok && best_a == best_b && trace_a.size() == trace_b.size();
        for (std::size_t i = 0; ok && i < trace_a.size(); ++i)
            ok = ok && trace_a[i].best_fitness == trace_b[i].best_fitness &&
                 trace_a[i].mean_fitness == trace_b[i].mean_fitness &&
                 trace_a[i].best == trace_b[i].best;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok = ok && secs < 60.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "20 seeds: monotone best fitness, valid populations, bit-identical reruns "
                  "(%.1f s, budget 60 s)",
                  secs);
    report(5, ok, buf);
}

// ---- criteria 6-8: constructed confusable dataset -------------------------

// Ten classes over a per-sample random gray background. Classes 0-7 each ink
// a patch in a distinct 4-column band at the top of the frame; telling all
// eight apart needs every interior vertical cut (4, 8, ..., 28), and the
// background jitter keeps fat cells from compensating. Classes 8 and 9 share
// the same background and differ only inside an 8x8 region tiled with 2x2
// tiles holding exactly two ink pixels each: class 8 inks the diagonal,
// class 9 the anti-diagonal, with per-tile flip noise. Cell means see the
// orientation only through cells that split tiles on both axes, so the
// coarse pass would have to pull cuts away from the patch bands to read it,
// while a region-restricted second pass resolves it with single-pixel cells.
const Rect kConfusionRect{12, 12, 19, 19};

LabeledSet confusable_set(int per_class, Rng& rng) {
    LabeledSet set;
    for (int label = 0; label < 10; ++label) {
        for (int s = 0; s < per_class; ++s) {
            LabeledItem item;
            item.label = label;
            double bg = 0.25 + 0.5 * rng.uniform01();
            for (int r = 0; r < kFrameSize; ++r)
                for (int c = 0; c < kFrameSize; ++c) {
                    double v = bg + 0.1 * (2.0 * rng.uniform01() - 1.0);
                    if (label < 8 && r >= 2 && r <= 6 && c / 4 == label) v = 1.0;
                    item.image.at(r, c) = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
                }
            if (label >= 8) {
                for (int tr = kConfusionRect.top; tr <= kConfusionRect.bottom; tr += 2)
                    for (int tc = kConfusionRect.left; tc <= kConfusionRect.right; tc += 2) {
                        bool diagonal = label == 8;
                        if (rng.uniform01() < 0.20) diagonal = !diagonal;  // flip noise
                        item.image.at(tr, tc) = diagonal ? 1.0 : 0.0;
                        item.image.at(tr + 1, tc + 1) = diagonal ? 1.0 : 0.0;
                        item.image.at(tr, tc + 1) = diagonal ? 0.0 : 1.0;
                        item.image.at(tr + 1, tc) = diagonal ? 0.0 : 1.0;
                    }
            }
            set.items.push_back(std::move(item));
        }
        set.classes.push_back(label);
    }
    return set;
}

double pair_accuracy(const ConfusionMatrix& cm, int a, int b) {
    auto idx = [&](int label) {
        return static_cast<std::size_t>(
            std::lower_bound(cm.labels.begin(), cm.labels.end(), label) - cm.labels.begin());
    };
    std::size_t ia = idx(a), ib = idx(b);
    long correct = cm.counts[ia][ia] + cm.counts[ib][ib];
    long total = 0;
    for (long v : cm.counts[ia]) total += v;
    for (long v : cm.counts[ib]) total += v;
    return static_cast<double>(correct) / static_cast<double>(total);
}

void criteria_6_7_8() {
    auto start = std::chrono::steady_clock::now();
    Rng rng(4004);
    LabeledSet set = confusable_set(50, rng);

    // Pre-run separator check via the crisp oracle: single-pixel cells inside
    // the override region classify the confusable pair almost perfectly.
    {
        Chromosome fine;
        fine.region = kConfusionRect;
        for (int r = kConfusionRect.top; r <= kConfusionRect.bottom; ++r) fine.h_cuts.push_back(r);
        for (int c = kConfusionRect.left; c <= kConfusionRect.right; ++c) fine.v_cuts.push_back(c);
        std::vector<std::pair<FeatureVector, int>> features;
        for (const auto& item : set.items)
            if (item.label >= 8)
                features.emplace_back(testsupport::crisp_features_oracle(item.image, fine),
                                      item.label);
        ModelSet ms = build_models(features, fine, FuzzyParams{0});
        long correct = 0;
        for (const auto& [vec, label] : features)
            if (classify(vec, ms, {8, 9}).label == label) ++correct;
        double rate = static_cast<double>(correct) / static_cast<double>(features.size());
        if (rate < 0.95) {
            report(6, false, "construction failed its own separator pre-check");
            report(7, false, "skipped: no model");
            report(8, false, "skipped: no model");
            return;
        }
    }

    GAConfig cfg;  // default configuration
    cfg.seed = 97;
    FuzzyParams fp;
    CoarseResult coarse = train_coarse(set, cfg, fp);

    GroupingConfig gcfg;  // default pair threshold
    gcfg.region_overrides[{8, 9}] = kConfusionRect;
    GroupTrainingResult groups = train_groups(set, coarse.cm, gcfg, cfg, fp);

    TwoPassModel model;
    model.fuzzy_params = fp;
    model.coarse = coarse.models;
    model.groups = groups.groups;

    EvalReport eval = evaluate(set, model);
    double pair1 = pair_accuracy(eval.pass1, 8, 9);
    double pair2 = pair_accuracy(eval.pass2, 8, 9);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool has_pair_group = false;
    for (const auto& g : model.groups)
        if (g.spec.members == std::vector<int>{8, 9} && g.spec.region == kConfusionRect)
            has_pair_group = true;

    bool ok6 = has_pair_group && eval.accuracy2 >= eval.accuracy1 && pair2 - pair1 >= 0.10 &&
               secs < 300.0;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "two-pass %.3f >= coarse %.3f; pair accuracy %.2f -> %.2f (+%.0f pp, need >= 10) "
                  "(%.0f s, budget 300 s)",
                  eval.accuracy2, eval.accuracy1, pair1, pair2, (pair2 - pair1) * 100.0, secs);
    report(6, ok6, buf);

    // criterion 7: routing invariants over the whole evaluation set
    bool ok7 = true;
    for (const auto& item : set.items) {
        ClassificationTrace t = classify_two_pass(item.image, model);
        bool coarse_grouped = false;
        for (const auto& g : model.groups)
            if (std::find(g.spec.members.begin(), g.spec.members.end(),
                          t.coarse_prediction.label) != g.spec.members.end())
                coarse_grouped = true;
        if (!coarse_grouped) {
            ok7 = ok7 && !t.group_used.has_value() &&
                  t.final_prediction.label == t.coarse_prediction.label;
        } else {
            ok7 = ok7 && t.group_used.has_value() &&
                  std::find(t.group_used->begin(), t.group_used->end(),
                            t.final_prediction.label) != t.group_used->end() &&
                  std::find(t.group_used->begin(), t.group_used->end(),
                            t.coarse_prediction.label) != t.group_used->end();
        }
    }
    report(7, ok7, "ungrouped coarse labels keep their prediction; grouped finals stay in-group");

    // criterion 8: persistence
    fs::path path = fs::temp_directory_path() / "fuzzygeno_acceptance_model.json";
    save_model(model, path.string());
    TwoPassModel loaded = load_model(path.string());
    fs::path path2 = fs::temp_directory_path() / "fuzzygeno_acceptance_model2.json";
    save_model(loaded, path2.string());
    std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    bool ok8 = !sa.str().empty() && sa.str() == sb.str();

    TwoPassModel tampered = loaded;
    if (!tampered.groups.empty()) {
        tampered.groups.push_back(tampered.groups.front());
        try {
            model_from_json(model_to_json(tampered));
            ok8 = false;
        } catch (const ModelError&) {
        }
    } else {
        ok8 = false;
    }
    fs::remove(path);
    fs::remove(path2);
    report(8, ok8, "save-load-save is byte-identical; overlapping group members are rejected");
}

// ---- criterion 9: format fidelity -----------------------------------------

void criterion9() {
    bool ok = chromosome_to_text(testsupport::published_chromosome()) ==
              "0,7,9,13,21,23,31 | 0,11,19,24,31";
    report(9, ok, "partition dump reproduces the published chromosome text verbatim");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criteria_6_7_8();
    criterion9();
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failures);
    return 1;
}

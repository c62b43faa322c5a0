#include "fuzzygeno/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

using json = nlohmann::json;

namespace fuzzygeno {

std::vector<int> TwoPassModel::classes() const {
    std::vector<int> out;
    for (const auto& [label, m] : coarse.models) out.push_back(label);
    return out;
}

CoarseResult train_coarse(const LabeledSet& data, const GAConfig& cfg, const FuzzyParams& fp) {
    if (data.items.empty()) throw DataError("train_coarse: empty dataset");

    auto [best, trace] = evolve(data, full_frame(), cfg, fp, data.classes);

    std::vector<std::pair<FeatureVector, int>> features;
    features.reserve(data.items.size());
    for (const auto& item : data.items)
        features.emplace_back(extract_features(item.image, best, fp), item.label);

    CoarseResult result;
    result.models = build_models(features, best, fp);
    result.trace = std::move(trace);

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(features.size());
    for (const auto& [vec, label] : features)
        pairs.emplace_back(label, classify(vec, result.models, data.classes).label);
    result.cm = confusion(pairs, data.classes);
    return result;
}

namespace {

OverlapImage class_overlap(const LabeledSet& data, int label) {
    std::vector<NormImage> samples;
    for (const auto& item : data.items)
        if (item.label == label) samples.push_back(item.image);
    if (samples.empty()) throw DataError("no samples of class " + std::to_string(label));
    return overlap_image(samples, label);
}

std::string members_text(const std::vector<int>& members) {
    std::string s;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(members[i]);
    }
    return s;
}

GAConfig group_ga_config(const GAConfig& base, std::size_t group_index) {
    GAConfig cfg = base;
    cfg.seed = base.seed + 0x9e3779b97f4a7c15ULL * (group_index + 1);
    return cfg;
}

}  // namespace

GroupTrainingResult train_groups(const LabeledSet& data, const ConfusionMatrix& cm,
                                 const GroupingConfig& gcfg, const GAConfig& cfg,
                                 const FuzzyParams& fp) {
    GroupTrainingResult result;

    // Forced groups are taken verbatim; discovery fills in the rest,
    // skipping anything that collides with a forced member.
    std::vector<GroupSpec> pending = gcfg.forced_groups;
    std::set<int> taken;
    for (const auto& g : pending) taken.insert(g.members.begin(), g.members.end());

    for (auto& members : form_groups(cm, gcfg.pair_threshold)) {
        bool collides = std::any_of(members.begin(), members.end(),
                                    [&](int m) { return taken.count(m) > 0; });
        if (collides) continue;
        GroupSpec spec;
        spec.members = std::move(members);
        if (auto it = gcfg.region_overrides.find(spec.members); it != gcfg.region_overrides.end()) {
            spec.region = it->second;
        } else {
            std::vector<OverlapImage> overlaps;
            for (int m : spec.members) overlaps.push_back(class_overlap(data, m));
            try {
                spec.region = confusion_region(overlaps, gcfg.region_threshold);
            } catch (const DataError& e) {
                result.warnings.push_back("group {" + members_text(spec.members) +
                                          "} dropped: " + e.what());
                continue;
            }
        }
        pending.push_back(std::move(spec));
    }
    std::sort(pending.begin(), pending.end(),
              [](const GroupSpec& a, const GroupSpec& b) { return a.members < b.members; });

    for (std::size_t gi = 0; gi < pending.size(); ++gi) {
        const GroupSpec& spec = pending[gi];
        GAConfig gacfg = group_ga_config(cfg, gi);
        auto [best, trace] = evolve(data, spec.region, gacfg, fp, spec.members);

        std::vector<std::pair<FeatureVector, int>> features;
        for (const auto& item : data.items)
            if (std::find(spec.members.begin(), spec.members.end(), item.label) !=
                spec.members.end())
                features.emplace_back(extract_features(item.image, best, fp), item.label);

        GroupModel gm;
        gm.spec = spec;
        gm.models = build_models(features, best, fp);
        long correct = 0;
        for (const auto& [vec, label] : features)
            if (classify(vec, gm.models, spec.members).label == label) ++correct;
        gm.group_rate = static_cast<double>(correct) / static_cast<double>(features.size());

        result.groups.push_back(std::move(gm));
        result.traces.push_back(std::move(trace));
    }
    return result;
}

ClassificationTrace classify_two_pass(const NormImage& img, const TwoPassModel& model) {
    ClassificationTrace trace;
    trace.coarse_features = extract_features(img, model.coarse.chromosome, model.fuzzy_params);
    trace.coarse_prediction = classify(trace.coarse_features, model.coarse, model.classes());
    trace.final_prediction = trace.coarse_prediction;

    for (const auto& group : model.groups) {
        const auto& members = group.spec.members;
        if (std::find(members.begin(), members.end(), trace.coarse_prediction.label) ==
            members.end())
            continue;
        trace.group_used = members;
        trace.group_features = extract_features(img, group.models.chromosome, model.fuzzy_params);
        trace.final_prediction = classify(trace.group_features, group.models, members);
        break;
    }
    return trace;
}

EvalReport evaluate(const LabeledSet& data, const TwoPassModel& model) {
    std::vector<int> classes = model.classes();
    for (int label : data.classes)
        if (!std::binary_search(classes.begin(), classes.end(), label))
            throw DataError("evaluate: dataset label " + std::to_string(label) +
                            " unknown to the model");

    std::vector<std::pair<int, int>> pass1, pass2;
    std::map<std::vector<int>, std::pair<long, long>> group_tallies;  // correct, total
    for (const auto& item : data.items) {
        ClassificationTrace t = classify_two_pass(item.image, model);
        pass1.emplace_back(item.label, t.coarse_prediction.label);
        pass2.emplace_back(item.label, t.final_prediction.label);
        for (const auto& group : model.groups) {
            const auto& members = group.spec.members;
            if (std::find(members.begin(), members.end(), item.label) != members.end()) {
                auto& [correct, total] = group_tallies[members];
                ++total;
                if (t.final_prediction.label == item.label) ++correct;
            }
        }
    }

    EvalReport report;
    report.pass1 = confusion(pass1, classes);
    report.pass2 = confusion(pass2, classes);
    report.accuracy1 = accuracy(report.pass1);
    report.accuracy2 = accuracy(report.pass2);
    for (const auto& [members, tally] : group_tallies)
        report.group_rates[members] =
            static_cast<double>(tally.first) / static_cast<double>(tally.second);
    return report;
}

namespace {

json model_set_to_json(const ModelSet& ms) {
    json j;
    j["chromosome"] = chromosome_to_text(ms.chromosome);
    json prototypes = json::object();
    json counts = json::object();
    for (const auto& [label, m] : ms.models) {
        prototypes[std::to_string(label)] = m.prototype;
        counts[std::to_string(label)] = m.sample_count;
    }
    j["prototypes"] = prototypes;
    j["sample_counts"] = counts;
    return j;
}

ModelSet model_set_from_json(const json& j, const FuzzyParams& fp) {
    ModelSet ms;
    ms.chromosome = chromosome_from_text(j.at("chromosome").get<std::string>());
    ms.fuzzy_params = fp;
    int dim = feature_dim(ms.chromosome);
    for (const auto& [key, value] : j.at("prototypes").items()) {
        ClassModel m;
        m.class_id = std::stoi(key);
        m.prototype = value.get<FeatureVector>();
        m.sample_count = j.at("sample_counts").at(key).get<int>();
        if (static_cast<int>(m.prototype.size()) != dim)
            throw ModelError("invalid model: prototype dimension mismatch for class " + key);
        if (m.sample_count < 1) throw ModelError("invalid model: sample_count < 1 for class " + key);
        for (double v : m.prototype)
            if (!(v >= 0.0 && v <= 1.0))
                throw ModelError("invalid model: prototype value outside [0,1] for class " + key);
        ms.models.emplace(m.class_id, std::move(m));
    }
    if (ms.models.empty()) throw ModelError("invalid model: no class prototypes");
    return ms;
}

}  // namespace

std::string model_to_json(const TwoPassModel& model) {
    json j;
    j["version"] = model.version;
    j["fuzzy_params"] = {{"ramp_half_width", model.fuzzy_params.ramp_half_width}};
    j["coarse"] = model_set_to_json(model.coarse);
    json groups = json::array();
    for (const auto& g : model.groups) {
        json gj;
        gj["members"] = g.spec.members;
        gj["region"] = {g.spec.region.top, g.spec.region.left, g.spec.region.bottom,
                        g.spec.region.right};
        gj["chromosome"] = model_set_to_json(g.models)["chromosome"];
        gj["prototypes"] = model_set_to_json(g.models)["prototypes"];
        gj["sample_counts"] = model_set_to_json(g.models)["sample_counts"];
        gj["group_rate"] = g.group_rate;
        groups.push_back(gj);
    }
    j["groups"] = groups;
    return j.dump(2) + "\n";
}

TwoPassModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed model file: ") + e.what());
    }
    try {
        TwoPassModel model;
        model.version = j.at("version").get<std::string>();
        if (model.version != kModelVersion)
            throw ModelError("model version mismatch: " + model.version);
        model.fuzzy_params.ramp_half_width =
            j.at("fuzzy_params").at("ramp_half_width").get<int>();
        if (model.fuzzy_params.ramp_half_width < 0)
            throw ModelError("invalid model: negative ramp half-width");

        model.coarse = model_set_from_json(j.at("coarse"), model.fuzzy_params);
        if (!(model.coarse.chromosome.region == full_frame()))
            throw ModelError("invalid model: coarse chromosome region is not the full frame");

        std::set<int> taken;
        for (const auto& gj : j.at("groups")) {
            GroupModel gm;
            gm.spec.members = gj.at("members").get<std::vector<int>>();
            auto region = gj.at("region").get<std::vector<int>>();
            if (gm.spec.members.size() < 2 || region.size() != 4)
                throw ModelError("invalid model: malformed group");
            gm.spec.region = Rect{region[0], region[1], region[2], region[3]};
            check_rect(gm.spec.region);
            for (int m : gm.spec.members)
                if (!taken.insert(m).second)
                    throw ModelError("invalid model: overlapping groups");
            gm.models = model_set_from_json(gj, model.fuzzy_params);
            if (!(gm.models.chromosome.region == gm.spec.region))
                throw ModelError("invalid model: group chromosome region mismatch");
            std::vector<int> model_labels;
            for (const auto& [label, m] : gm.models.models) model_labels.push_back(label);
            if (model_labels != gm.spec.members)
                throw ModelError("invalid model: group prototypes do not match members");
            gm.group_rate = gj.at("group_rate").get<double>();
            model.groups.push_back(std::move(gm));
        }
        return model;
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed model file: ") + e.what());
    } catch (const DataError& e) {
        throw ModelError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const TwoPassModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot write model file: " + path);
    out << model_to_json(model);
    if (!out) throw ModelError("write failed: " + path);
}

TwoPassModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

}  // namespace fuzzygeno

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fuzzygeno/classifier.hpp"
#include "fuzzygeno/evolution.hpp"
#include "fuzzygeno/grouping.hpp"
#include "fuzzygeno/imaging.hpp"

namespace fuzzygeno {

inline constexpr const char* kModelVersion = "fuzzygeno-1";

struct GroupModel {
    GroupSpec spec;
    ModelSet models;      // chromosome region-constrained to spec.region
    double group_rate = 0.0;
};

struct TwoPassModel {
    FuzzyParams fuzzy_params;
    ModelSet coarse;
    std::vector<GroupModel> groups;
    std::string version = kModelVersion;

    std::vector<int> classes() const;
};

struct ClassificationTrace {
    Prediction coarse_prediction;
    std::optional<std::vector<int>> group_used;
    Prediction final_prediction;
    FeatureVector coarse_features;
    FeatureVector group_features;  // empty when no group was used
};

struct CoarseResult {
    ModelSet models;
    ConfusionMatrix cm;
    EvolutionTrace trace;
};

struct GroupTrainingResult {
    std::vector<GroupModel> groups;
    std::vector<EvolutionTrace> traces;       // parallel to groups
    std::vector<std::string> warnings;        // dropped groups etc.
};

struct EvalReport {
    ConfusionMatrix pass1;
    ConfusionMatrix pass2;
    double accuracy1 = 0.0;
    double accuracy2 = 0.0;
    std::map<std::vector<int>, double> group_rates;  // pass-2 accuracy within each group
};

CoarseResult train_coarse(const LabeledSet& data, const GAConfig& cfg, const FuzzyParams& fp);

GroupTrainingResult train_groups(const LabeledSet& data, const ConfusionMatrix& cm,
                                 const GroupingConfig& gcfg, const GAConfig& cfg,
                                 const FuzzyParams& fp);

ClassificationTrace classify_two_pass(const NormImage& img, const TwoPassModel& model);

EvalReport evaluate(const LabeledSet& data, const TwoPassModel& model);

std::string model_to_json(const TwoPassModel& model);
TwoPassModel model_from_json(const std::string& text);

void save_model(const TwoPassModel& model, const std::string& path);
TwoPassModel load_model(const std::string& path);

}  // namespace fuzzygeno

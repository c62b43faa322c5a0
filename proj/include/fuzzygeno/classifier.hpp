#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fuzzygeno/partitions.hpp"

namespace fuzzygeno {

struct ClassModel {
    int class_id = 0;
    FeatureVector prototype;  // component-wise mean over training samples
    int sample_count = 0;
};

struct ModelSet {
    Chromosome chromosome;
    FuzzyParams fuzzy_params;
    std::map<int, ClassModel> models;
};

struct Prediction {
    int label = 0;
    std::map<int, double> scores;  // similarity per allowed class
};

struct ConfusionMatrix {
    std::vector<int> labels;                  // sorted
    std::vector<std::vector<long>> counts;    // counts[i][j]: true i predicted j

    long total() const;
    long diagonal() const;
};

ModelSet build_models(const std::vector<std::pair<FeatureVector, int>>& features,
                      const Chromosome& ch, const FuzzyParams& fp);

// 1 - mean absolute difference; 1 exactly iff the vectors are equal.
double similarity(const FeatureVector& x, const FeatureVector& prototype);
double similarity(const FeatureVector& x, const ClassModel& m);

// Argmax similarity over the allowed classes, smallest label on ties.
Prediction classify(const FeatureVector& x, const ModelSet& ms, const std::vector<int>& allowed);

ConfusionMatrix confusion(const std::vector<std::pair<int, int>>& true_pred,
                          const std::vector<int>& labels);

double accuracy(const ConfusionMatrix& cm);

// Tab-separated grid with label header row and column.
std::string confusion_to_tsv(const ConfusionMatrix& cm);

}  // namespace fuzzygeno

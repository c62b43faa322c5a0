#include "fuzzygeno/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fuzzygeno {

long ConfusionMatrix::total() const {
    long t = 0;
    for (const auto& row : counts)
        for (long v : row) t += v;
    return t;
}

long ConfusionMatrix::diagonal() const {
    long t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

ModelSet build_models(const std::vector<std::pair<FeatureVector, int>>& features,
                      const Chromosome& ch, const FuzzyParams& fp) {
    if (features.empty()) throw DataError("build_models: empty input");

    std::size_t dim = features.front().first.size();
    ModelSet ms;
    ms.chromosome = ch;
    ms.fuzzy_params = fp;
    for (const auto& [vec, label] : features) {
        if (vec.size() != dim) throw DataError("build_models: feature dimension mismatch");
        auto [it, inserted] = ms.models.try_emplace(label, ClassModel{label, FeatureVector(dim), 0});
        for (std::size_t i = 0; i < dim; ++i) it->second.prototype[i] += vec[i];
        ++it->second.sample_count;
    }
    for (auto& [label, m] : ms.models)
        for (double& v : m.prototype) v /= m.sample_count;
    return ms;
}

double similarity(const FeatureVector& x, const FeatureVector& prototype) {
    if (x.size() != prototype.size()) throw DataError("similarity: dimension mismatch");
    double dist = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dist += std::abs(x[i] - prototype[i]);
    return 1.0 - dist / static_cast<double>(x.size());
}

double similarity(const FeatureVector& x, const ClassModel& m) {
    return similarity(x, m.prototype);
}

Prediction classify(const FeatureVector& x, const ModelSet& ms, const std::vector<int>& allowed) {
    if (allowed.empty()) throw DataError("classify: empty allowed set");

    Prediction pred;
    bool first = true;
    double best = 0.0;
    for (int label : allowed) {
        auto it = ms.models.find(label);
        if (it == ms.models.end()) throw DataError("classify: unknown class " + std::to_string(label));
        double s = similarity(x, it->second);
        pred.scores[label] = s;
        if (first || s > best || (s == best && label < pred.label)) {
            pred.label = label;
            best = s;
            first = false;
        }
    }
    return pred;
}

ConfusionMatrix confusion(const std::vector<std::pair<int, int>>& true_pred,
                          const std::vector<int>& labels) {
    ConfusionMatrix cm;
    cm.labels = labels;
    cm.counts.assign(labels.size(), std::vector<long>(labels.size(), 0));

    auto index_of = [&](int label) {
        auto it = std::lower_bound(labels.begin(), labels.end(), label);
        if (it == labels.end() || *it != label)
            throw DataError("confusion: unknown label " + std::to_string(label));
        return static_cast<std::size_t>(it - labels.begin());
    };
    for (const auto& [t, p] : true_pred) ++cm.counts[index_of(t)][index_of(p)];
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    long total = cm.total();
    if (total == 0) throw DataError("accuracy: empty confusion matrix");
    return static_cast<double>(cm.diagonal()) / static_cast<double>(total);
}

std::string confusion_to_tsv(const ConfusionMatrix& cm) {
    std::ostringstream out;
    for (int label : cm.labels) out << '\t' << label;
    out << '\n';
    for (std::size_t i = 0; i < cm.labels.size(); ++i) {
        out << cm.labels[i];
        for (long v : cm.counts[i]) out << '\t' << v;
        out << '\n';
    }
    return out.str();
}

}  // namespace fuzzygeno

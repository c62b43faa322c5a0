#include <doctest.h>

#include "fuzzygeno/classifier.hpp"
#include "test_support.hpp"

using namespace fuzzygeno;
using testsupport::published_chromosome;

namespace {

ModelSet two_class_models(const FeatureVector& a, const FeatureVector& b) {
    Chromosome ch;
    ch.region = full_frame();
    ch.h_cuts = {0, 16, 31};
    ch.v_cuts = {0, 31};
    return build_models({{a, 0}, {b, 1}}, ch, FuzzyParams{});
}

}  // namespace

TEST_CASE("build_models averages per class") {
    Chromosome ch = published_chromosome();
    FuzzyParams fp;

    SUBCASE("one sample per class keeps the samples") {
        FeatureVector a(24, 0.2), b(24, 0.9);
        ModelSet ms = build_models({{a, 3}, {b, 6}}, ch, fp);
        CHECK(ms.models.at(3).prototype == a);
        CHECK(ms.models.at(6).prototype == b);
        CHECK(ms.models.at(3).sample_count == 1);
    }

    SUBCASE("two samples midpoint") {
        ModelSet ms = build_models({{{0.0, 1.0}, 5}, {{1.0, 0.0}, 5}}, ch, fp);
        CHECK(ms.models.at(5).prototype == FeatureVector{0.5, 0.5});
        CHECK(ms.models.at(5).sample_count == 2);
    }

    SUBCASE("repeated identical samples are a fixed point") {
        FeatureVector v{0.1, 0.4, 0.8};
        std::vector<std::pair<FeatureVector, int>> input(50, {v, 2});
        ModelSet ms = build_models(input, ch, fp);
        for (std::size_t i = 0; i < v.size(); ++i)
            CHECK(ms.models.at(2).prototype[i] == doctest::Approx(v[i]));
    }

    CHECK_THROWS_AS(build_models({}, ch, fp), DataError);
    CHECK_THROWS_AS(build_models({{{0.1}, 0}, {{0.1, 0.2}, 0}}, ch, fp), DataError);
}

TEST_CASE("similarity is 1 minus normalized L1 distance") {
    CHECK(similarity(FeatureVector{0.3, 0.7}, FeatureVector{0.3, 0.7}) == 1.0);
    CHECK(similarity(FeatureVector{0.0, 0.0}, FeatureVector{1.0, 1.0}) == 0.0);
    CHECK(similarity(FeatureVector{0.2, 0.6}, FeatureVector{0.4, 0.2}) == doctest::Approx(0.7));
    CHECK_THROWS_AS(similarity(FeatureVector{0.1}, FeatureVector{0.1, 0.2}), DataError);
}

TEST_CASE("similarity symmetry and bounds") {
    Rng rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 30));
        FeatureVector x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.uniform01();
            y[i] = rng.uniform01();
        }
        double s = similarity(x, y);
        CHECK(s == similarity(y, x));
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        CHECK((s == 1.0) == (x == y));
    }
}

TEST_CASE("classify picks the best-similarity class, smallest label on ties") {
    ModelSet ms = two_class_models({0.0, 0.0}, {1.0, 1.0});

    SUBCASE("singleton allowed set") {
        CHECK(classify({0.9, 0.9}, ms, {0}).label == 0);
    }

    SUBCASE("equal scores break to the smaller label") {
        Prediction p = classify({0.5, 0.5}, ms, {0, 1});
        CHECK(p.scores.at(0) == doctest::Approx(p.scores.at(1)));
        CHECK(p.label == 0);
        // order of the allowed list must not matter
        CHECK(classify({0.5, 0.5}, ms, {1, 0}).label == 0);
    }

    SUBCASE("exact prototype match wins when prototypes differ") {
        CHECK(classify({1.0, 1.0}, ms, {0, 1}).label == 1);
        CHECK(classify({1.0, 1.0}, ms, {0, 1}).scores.at(1) == 1.0);
    }

    CHECK_THROWS_AS(classify({0.5, 0.5}, ms, {}), DataError);
    CHECK_THROWS_AS(classify({0.5, 0.5}, ms, {0, 9}), DataError);
}

TEST_CASE("confusion tallies and row sums") {
    std::vector<int> labels{0, 1, 2};

    SUBCASE("all correct gives a diagonal matrix") {
        ConfusionMatrix cm = confusion({{0, 0}, {1, 1}, {2, 2}, {1, 1}}, labels);
        CHECK(cm.counts[0][0] == 1);
        CHECK(cm.counts[1][1] == 2);
        CHECK(cm.diagonal() == cm.total());
    }

    SUBCASE("single wrong prediction lands off-diagonal") {
        ConfusionMatrix cm = confusion({{2, 0}}, labels);
        CHECK(cm.counts[2][0] == 1);
        CHECK(cm.diagonal() == 0);
    }

    SUBCASE("row sums equal per-class counts") {
        Rng rng(77);
        std::vector<std::pair<int, int>> pairs;
        std::vector<long> per_class(3, 0);
        for (int i = 0; i < 500; ++i) {
            int t = rng.uniform_int(0, 2), p = rng.uniform_int(0, 2);
            pairs.emplace_back(t, p);
            ++per_class[static_cast<std::size_t>(t)];
        }
        ConfusionMatrix cm = confusion(pairs, labels);
        for (std::size_t i = 0; i < 3; ++i) {
            long row = 0;
            for (long v : cm.counts[i]) row += v;
            CHECK(row == per_class[i]);
        }
    }

    CHECK_THROWS_AS(confusion({{0, 5}}, labels), DataError);
}

TEST_CASE("accuracy on the published matrices") {
    ConfusionMatrix pass1 = testsupport::published_pass1_matrix();
    CHECK(pass1.diagonal() == 431);
    CHECK(pass1.total() == 500);
    CHECK(accuracy(pass1) == 431.0 / 500.0);

    ConfusionMatrix pass2 = testsupport::published_pass2_matrix();
    CHECK(pass2.diagonal() == 452);
    CHECK(accuracy(pass2) == 452.0 / 500.0);

    ConfusionMatrix diag = confusion({{0, 0}, {1, 1}}, {0, 1});
    CHECK(accuracy(diag) == 1.0);

    ConfusionMatrix empty;
    CHECK_THROWS_AS(accuracy(empty), DataError);
}

TEST_CASE("accuracy(confusion(p)) equals the direct fraction for random p") {
    Rng rng(2024);
    std::vector<int> labels{0, 1, 2, 3, 4};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::pair<int, int>> pairs;
        long correct = 0;
        int n = rng.uniform_int(1, 300);
        for (int i = 0; i < n; ++i) {
            int t = rng.uniform_int(0, 4), p = rng.uniform_int(0, 4);
            pairs.emplace_back(t, p);
            if (t == p) ++correct;
        }
        CHECK(accuracy(confusion(pairs, labels)) ==
              static_cast<double>(correct) / static_cast<double>(n));
    }
}

TEST_CASE("confusion TSV layout") {
    ConfusionMatrix cm = confusion({{0, 0}, {0, 1}, {1, 1}}, {0, 1});
    CHECK(confusion_to_tsv(cm) == "\t0\t1\n0\t1\t1\n1\t0\t1\n");
}

#include <doctest.h>

#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qprior/learner.hpp"

using namespace qprior;
using testutil::make_names;
using testutil::make_record;

namespace {

// Feature "x" separates the classes; "noise" cycles unrelated values.
Dataset two_feature_dataset(std::size_t n) {
    auto names = make_names({"x", "noise"});
    Suite suite;
    suite.id = "two";
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = i % 2 == 0;
        const double x = (positive ? 1.0 : 0.0) + 0.02 * static_cast<double>(i % 5);
        const double noise = static_cast<double>((i * 37) % 11) / 11.0;
        auto rec = make_record("t" + std::to_string(i), names, {x, noise});
        rec.label = positive;
        suite.records.push_back(std::move(rec));
    }
    return dataset_from_suite(std::move(suite));
}

}  // namespace

TEST_CASE("features_per_split resolves and parses") {
    CHECK(FeaturesPerSplit::sqrt_of().resolve(9) == 3);
    CHECK(FeaturesPerSplit::sqrt_of().resolve(2) == 1);
    CHECK(FeaturesPerSplit::all_of().resolve(9) == 9);
    CHECK(FeaturesPerSplit::exactly(2).resolve(9) == 2);
    CHECK(FeaturesPerSplit::exactly(20).resolve(9) == 9);
    CHECK(FeaturesPerSplit::parse("sqrt").to_string() == "sqrt");
    CHECK(FeaturesPerSplit::parse("all").to_string() == "all");
    CHECK(FeaturesPerSplit::parse("3").to_string() == "3");
    CHECK_THROWS(FeaturesPerSplit::parse("some"));
    CHECK_THROWS(FeaturesPerSplit::parse("0"));
}

TEST_CASE("training is deterministic and execution-mode independent") {
    Dataset data = two_feature_dataset(80);
    ForestConfig cfg;
    cfg.n_trees = 30;
    cfg.seed = 11;
    RandomForest serial_a = train_forest(data, cfg, {}, Exec::serial);
    RandomForest serial_b = train_forest(data, cfg, {}, Exec::serial);
    RandomForest parallel = train_forest(data, cfg, {}, Exec::parallel);
    CHECK(forest_to_json(serial_a) == forest_to_json(serial_b));
    CHECK(forest_to_json(serial_a) == forest_to_json(parallel));
    // A different seed grows a different forest.
    cfg.seed = 12;
    CHECK(forest_to_json(train_forest(data, cfg)) != forest_to_json(serial_a));
}

TEST_CASE("a forest separates a separable problem") {
    Dataset data = testutil::separable_dataset(200);
    ForestConfig cfg;
    cfg.n_trees = 40;
    cfg.seed = 7;
    RandomForest forest = train_forest(data, cfg);
    std::vector<double> proba;
    std::vector<std::uint8_t> labels;
    for (const auto* rec : data.all_records()) {
        proba.push_back(forest.predict(rec->features));
        labels.push_back(rec->label ? 1 : 0);
    }
    CHECK(roc_auc(proba, labels) >= 0.95);
    BinaryMetrics bm = evaluate_binary(proba, labels);
    CHECK(bm.f1 >= 0.95);
}

TEST_CASE("importances sum to one and favor the informative feature") {
    Dataset data = two_feature_dataset(120);
    ForestConfig cfg;
    cfg.n_trees = 30;
    cfg.seed = 3;
    cfg.features_per_split = FeaturesPerSplit::all_of();
    RandomForest forest = train_forest(data, cfg);
    auto imp = forest.feature_importances();
    REQUIRE(imp.size() == 2);
    CHECK(std::accumulate(imp.begin(), imp.end(), 0.0) == doctest::Approx(1.0));
    CHECK(imp[0] > imp[1]);  // "x" over "noise"
}

TEST_CASE("feature_names selects and orders the model inputs") {
    Dataset data = two_feature_dataset(60);
    ForestConfig cfg;
    cfg.n_trees = 10;
    cfg.seed = 5;
    RandomForest forest = train_forest(data, cfg, {"x"});
    CHECK(forest.feature_names() == std::vector<std::string>{"x"});
    // Prediction looks features up by name, so extra record features are fine.
    const auto* rec = data.all_records()[0];
    CHECK(forest.predict(rec->features) == forest.predict_row({rec->features.by_name("x")}));
    CHECK_THROWS(train_forest(data, cfg, {"x", "absent"}));
}

TEST_CASE("evaluate_binary counts the confusion matrix") {
    BinaryMetrics bm = evaluate_binary({0.9, 0.4, 0.6, 0.1}, {1, 1, 0, 0});
    CHECK(bm.tp == 1);
    CHECK(bm.fn == 1);
    CHECK(bm.fp == 1);
    CHECK(bm.tn == 1);
    CHECK(bm.precision == doctest::Approx(0.5));
    CHECK(bm.recall == doctest::Approx(0.5));
    CHECK(bm.f1 == doctest::Approx(0.5));
    CHECK(bm.accuracy == doctest::Approx(0.5));
    // Threshold rule is >=.
    BinaryMetrics at = evaluate_binary({0.5}, {1}, 0.5);
    CHECK(at.tp == 1);
    CHECK_THROWS_AS(evaluate_binary({0.5}, {1, 0}), std::invalid_argument);
}

TEST_CASE("roc_auc handles perfect, inverted, tied, and degenerate inputs") {
    CHECK(roc_auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
    CHECK(roc_auc({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0}) == doctest::Approx(0.0));
    CHECK(roc_auc({0.5, 0.5}, {1, 0}) == doctest::Approx(0.5));  // tie half credit
    CHECK(roc_auc({0.3, 0.7}, {1, 1}) == doctest::Approx(0.5));  // one class only
}

TEST_CASE("grid search prefers the simplest of tied configurations") {
    Dataset data = testutil::separable_dataset(60);
    GridSpec grid;
    grid.n_trees = {10, 20};
    grid.max_depth = {2, 4};
    grid.min_samples_leaf = {1, 2};
    GridResult res = grid_search(data, grid, 3, 42);
    CHECK(res.cells.size() == 8);
    // Every cell separates perfectly, so ties resolve to fewer trees, then
    // shallower depth, then the larger leaf floor.
    CHECK(res.best_score == doctest::Approx(1.0));
    CHECK(res.best.n_trees == 10);
    CHECK(res.best.max_depth == 2);
    CHECK(res.best.min_samples_leaf == 2);
}

TEST_CASE("rfe drops worthless features before informative ones") {
    auto names = make_names({"x", "c_a", "c_b"});
    Suite suite;
    suite.id = "rfe";
    for (std::size_t i = 0; i < 60; ++i) {
        const bool positive = i % 2 == 0;
        auto rec = make_record("t" + std::to_string(i), names,
                               {positive ? 1.0 : 0.0, 5.0, 5.0});
        rec.label = positive;
        suite.records.push_back(std::move(rec));
    }
    Dataset data = dataset_from_suite(std::move(suite));
    ForestConfig cfg;
    cfg.n_trees = 15;
    cfg.seed = 2;
    RfeResult res = rfe(data, cfg, 1);
    REQUIRE(res.steps.size() == 2);
    // Both constants have zero importance; the tie drops the later name first.
    CHECK(res.steps[0].eliminated == "c_b");
    CHECK(res.steps[0].importance == doctest::Approx(0.0));
    CHECK(res.steps[1].eliminated == "c_a");
    CHECK(res.selected == std::vector<std::string>{"x"});
}

TEST_CASE("forest json round trip preserves predictions") {
    Dataset data = two_feature_dataset(50);
    ForestConfig cfg;
    cfg.n_trees = 12;
    cfg.max_depth = 5;
    cfg.min_samples_leaf = 3;
    cfg.seed = 9;
    RandomForest forest = train_forest(data, cfg);
    RandomForest back = forest_from_json(forest_to_json(forest));
    CHECK(back.config().n_trees == cfg.n_trees);
    CHECK(back.config().max_depth == cfg.max_depth);
    CHECK(back.config().min_samples_leaf == cfg.min_samples_leaf);
    CHECK(back.feature_names() == forest.feature_names());
    for (const auto* rec : data.all_records())
        CHECK(back.predict(rec->features) == forest.predict(rec->features));
    CHECK(back.feature_importances() == forest.feature_importances());

    const std::string path = "forest_roundtrip_tmp.json";
    save_forest(forest, path);
    RandomForest loaded = load_forest(path);
    CHECK(forest_to_json(loaded) == forest_to_json(forest));
    std::remove(path.c_str());
}

TEST_CASE("predict_suite returns one likelihood per record in order") {
    Dataset data = two_feature_dataset(20);
    ForestConfig cfg;
    cfg.n_trees = 8;
    cfg.seed = 1;
    RandomForest forest = train_forest(data, cfg);
    const auto& records = data.suites[0].records;
    std::vector<double> p = predict_suite(forest, records);
    REQUIRE(p.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(p[i] == forest.predict(records[i].features));
        CHECK(p[i] >= 0.0);
        CHECK(p[i] <= 1.0);
    }
}

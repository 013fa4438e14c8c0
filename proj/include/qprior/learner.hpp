#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qprior/anneal.hpp"  // Exec
#include "qprior/ingest.hpp"
#include "qprior/model.hpp"

namespace qprior {

struct FeaturesPerSplit {
    enum class Mode { sqrt_mode, all, count };
    Mode mode = Mode::sqrt_mode;
    std::size_t count = 0;  // used when mode == count

    static FeaturesPerSplit sqrt_of() { return {Mode::sqrt_mode, 0}; }
    static FeaturesPerSplit all_of() { return {Mode::all, 0}; }
    static FeaturesPerSplit exactly(std::size_t n) { return {Mode::count, n}; }

    // Number of candidate features per split for d available features.
    std::size_t resolve(std::size_t d) const;
    std::string to_string() const;
    static FeaturesPerSplit parse(const std::string& text);
};

struct ForestConfig {
    std::size_t n_trees = 100;
    std::size_t max_depth = 8;
    std::size_t min_samples_leaf = 2;
    FeaturesPerSplit features_per_split;
    std::uint64_t seed = 0;
};

// Flat binary CART node; feature == -1 marks a leaf. Internal nodes keep
// sample counts and class fractions so Gini importances can be recomputed
// from a deserialized model.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::size_t n_samples = 0;
    double pos_fraction = 0.0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    double predict(const std::vector<double>& row) const;
};

class RandomForest {
public:
    RandomForest() = default;
    RandomForest(ForestConfig config, std::vector<std::string> feature_names,
                 std::vector<DecisionTree> trees);

    const ForestConfig& config() const { return config_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<DecisionTree>& trees() const { return trees_; }

    // Mean leaf positive-fraction across trees; row is in feature_names order.
    double predict_row(const std::vector<double>& row) const;
    // Looks the forest's features up by name in the record's feature vector.
    double predict(const FeatureVector& features) const;

    // Mean Gini impurity decrease per feature, normalized to sum to one
    // (all-zero when no tree ever splits).
    std::vector<double> feature_importances() const;

private:
    ForestConfig config_;
    std::vector<std::string> feature_names_;
    std::vector<DecisionTree> trees_;
};

// Trains on every record of the dataset. feature_names selects and orders the
// model's inputs; empty means all of the dataset's features. Trees are
// independent (per-tree derived seeds), so serial and parallel execution
// produce identical forests.
RandomForest train_forest(const Dataset& data, const ForestConfig& config,
                          const std::vector<std::string>& feature_names = {},
                          Exec exec = Exec::parallel);

// Fault likelihood per record, in record order.
std::vector<double> predict_suite(const RandomForest& forest,
                                  const std::vector<TestCaseRecord>& records);

struct BinaryMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    double auc = 0.5;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Threshold rule: proba >= threshold counts as a positive prediction.
BinaryMetrics evaluate_binary(const std::vector<double>& proba,
                              const std::vector<std::uint8_t>& labels,
                              double threshold = 0.5);

// Mann-Whitney formulation with half credit for ties; returns 0.5 when either
// class is absent.
double roc_auc(const std::vector<double>& proba,
               const std::vector<std::uint8_t>& labels);

struct GridSpec {
    std::vector<std::size_t> n_trees{50, 100, 200};
    std::vector<std::size_t> max_depth{4, 8, 12};
    std::vector<std::size_t> min_samples_leaf{1, 2, 5};
};

struct GridCell {
    std::size_t n_trees = 0;
    std::size_t max_depth = 0;
    std::size_t min_samples_leaf = 0;
    double mean_f1 = 0.0;
};

struct GridResult {
    ForestConfig best;
    double best_score = 0.0;
    std::vector<GridCell> cells;  // grid order
};

// Exhaustive search scored by mean F1 over stratified k-fold CV. Score ties
// prefer fewer trees, then shallower depth, then larger min_samples_leaf,
// then earlier grid position.
GridResult grid_search(const Dataset& data, const GridSpec& grid, std::size_t k,
                       std::uint64_t seed, Exec exec = Exec::parallel);

struct RfeStep {
    std::string eliminated;
    double importance = 0.0;  // importance it had when dropped
};

struct RfeResult {
    std::vector<RfeStep> steps;         // in elimination order
    std::vector<std::string> selected;  // surviving features, original order
};

// Recursive feature elimination: retrain, drop the feature with the smallest
// importance (ties drop the lexicographically later name), repeat until
// target_features remain.
RfeResult rfe(const Dataset& data, const ForestConfig& config,
              std::size_t target_features, Exec exec = Exec::parallel);

std::string forest_to_json(const RandomForest& forest);
RandomForest forest_from_json(const std::string& text);
void save_forest(const RandomForest& forest, const std::string& path);
RandomForest load_forest(const std::string& path);

}  // namespace qprior

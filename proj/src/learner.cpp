#include "qprior/learner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qprior/rng.hpp"

namespace qprior {

std::size_t FeaturesPerSplit::resolve(std::size_t d) const {
    if (d == 0) throw std::invalid_argument("no features available");
    switch (mode) {
        case Mode::all:
            return d;
        case Mode::sqrt_mode:
            return std::max<std::size_t>(
                1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d)))));
        case Mode::count:
            if (count == 0) throw std::invalid_argument("features_per_split count is zero");
            return std::min(count, d);
    }
    throw std::logic_error("unreachable");
}

std::string FeaturesPerSplit::to_string() const {
    switch (mode) {
        case Mode::all: return "all";
        case Mode::sqrt_mode: return "sqrt";
        case Mode::count: return std::to_string(count);
    }
    throw std::logic_error("unreachable");
}

FeaturesPerSplit FeaturesPerSplit::parse(const std::string& text) {
    if (text == "sqrt") return sqrt_of();
    if (text == "all") return all_of();
    std::size_t pos = 0;
    const unsigned long v = std::stoul(text, &pos);
    if (pos != text.size() || v == 0)
        throw ConfigError("features_per_split must be 'sqrt', 'all', or a positive integer");
    return exactly(static_cast<std::size_t>(v));
}

double DecisionTree::predict(const std::vector<double>& row) const {
    std::size_t at = 0;
    while (nodes[at].feature >= 0) {
        const auto& nd = nodes[at];
        at = static_cast<std::size_t>(
            row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right);
    }
    return nodes[at].pos_fraction;
}

RandomForest::RandomForest(ForestConfig config, std::vector<std::string> feature_names,
                           std::vector<DecisionTree> trees)
    : config_(std::move(config)),
      feature_names_(std::move(feature_names)),
      trees_(std::move(trees)) {}

double RandomForest::predict_row(const std::vector<double>& row) const {
    if (trees_.empty()) throw std::logic_error("predict on an untrained forest");
    if (row.size() != feature_names_.size())
        throw std::invalid_argument("feature row width mismatch");
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict(row);
    return sum / static_cast<double>(trees_.size());
}

double RandomForest::predict(const FeatureVector& features) const {
    std::vector<double> row(feature_names_.size());
    for (std::size_t j = 0; j < feature_names_.size(); ++j)
        row[j] = features.by_name(feature_names_[j]);
    return predict_row(row);
}

std::vector<double> RandomForest::feature_importances() const {
    std::vector<double> total(feature_names_.size(), 0.0);
    auto gini = [](double f) { return 2.0 * f * (1.0 - f); };
    for (const auto& tree : trees_) {
        if (tree.nodes.empty()) continue;
        const double n_root = static_cast<double>(tree.nodes.front().n_samples);
        for (const auto& nd : tree.nodes) {
            if (nd.feature < 0) continue;
            const auto& l = tree.nodes[static_cast<std::size_t>(nd.left)];
            const auto& r = tree.nodes[static_cast<std::size_t>(nd.right)];
            const double n = static_cast<double>(nd.n_samples);
            const double decrease =
                gini(nd.pos_fraction) -
                (static_cast<double>(l.n_samples) * gini(l.pos_fraction) +
                 static_cast<double>(r.n_samples) * gini(r.pos_fraction)) /
                    n;
            total[static_cast<std::size_t>(nd.feature)] += (n / n_root) * decrease;
        }
    }
    const double sum = std::accumulate(total.begin(), total.end(), 0.0);
    if (sum > 0.0)
        for (auto& v : total) v /= sum;
    return total;
}

namespace {

// Builds one CART tree over the bootstrap sample held in `idx`.
class TreeBuilder {
public:
    TreeBuilder(const std::vector<std::vector<double>>& rows,
                const std::vector<std::uint8_t>& labels, const ForestConfig& config,
                std::size_t n_features, Rng& rng)
        : rows_(rows),
          labels_(labels),
          config_(config),
          mtry_(config.features_per_split.resolve(n_features)),
          scratch_features_(n_features),
          rng_(rng) {
        std::iota(scratch_features_.begin(), scratch_features_.end(), 0u);
    }

    DecisionTree build(std::vector<std::size_t> idx) {
        DecisionTree tree;
        grow(tree, std::move(idx), 0);
        return tree;
    }

private:
    struct Split {
        bool found = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double weighted_gini = 0.0;
    };

    static double gini(std::size_t pos, std::size_t n) {
        const double f = static_cast<double>(pos) / static_cast<double>(n);
        return 2.0 * f * (1.0 - f);
    }

    Split best_split(const std::vector<std::size_t>& idx) {
        // Random feature subset, then ascending order so equal-quality splits
        // resolve to the lowest feature index and threshold.
        rng_.shuffle(scratch_features_);
        std::vector<std::size_t> chosen(scratch_features_.begin(),
                                        scratch_features_.begin() +
                                            static_cast<std::ptrdiff_t>(mtry_));
        std::sort(chosen.begin(), chosen.end());

        const std::size_t n = idx.size();
        const std::size_t msl = config_.min_samples_leaf;
        Split best;
        std::vector<std::pair<double, std::uint8_t>> column(n);
        for (std::size_t f : chosen) {
            for (std::size_t i = 0; i < n; ++i)
                column[i] = {rows_[idx[i]][f], labels_[idx[i]]};
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            std::size_t pos_left = 0;
            const std::size_t pos_total = static_cast<std::size_t>(std::count_if(
                column.begin(), column.end(), [](const auto& c) { return c.second != 0; }));
            for (std::size_t i = 0; i + 1 < n; ++i) {
                if (column[i].second) ++pos_left;
                if (column[i].first == column[i + 1].first) continue;
                const std::size_t nl = i + 1, nr = n - nl;
                if (nl < msl || nr < msl) continue;
                const double weighted =
                    (static_cast<double>(nl) * gini(pos_left, nl) +
                     static_cast<double>(nr) * gini(pos_total - pos_left, nr)) /
                    static_cast<double>(n);
                if (!best.found || weighted < best.weighted_gini) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = (column[i].first + column[i + 1].first) / 2.0;
                    best.weighted_gini = weighted;
                }
            }
        }
        return best;
    }

    int grow(DecisionTree& tree, std::vector<std::size_t> idx, std::size_t depth) {
        const std::size_t n = idx.size();
        const std::size_t pos = static_cast<std::size_t>(std::count_if(
            idx.begin(), idx.end(), [&](std::size_t i) { return labels_[i] != 0; }));
        const int at = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.back().n_samples = n;
        tree.nodes.back().pos_fraction = static_cast<double>(pos) / static_cast<double>(n);

        const bool pure = pos == 0 || pos == n;
        if (pure || depth >= config_.max_depth || n < 2 * config_.min_samples_leaf)
            return at;
        const Split split = best_split(idx);
        if (!split.found || split.weighted_gini >= gini(pos, n)) return at;

        std::vector<std::size_t> left, right;
        left.reserve(n);
        right.reserve(n);
        for (std::size_t i : idx)
            (rows_[i][split.feature] <= split.threshold ? left : right).push_back(i);
        idx.clear();
        idx.shrink_to_fit();

        const int l = grow(tree, std::move(left), depth + 1);
        const int r = grow(tree, std::move(right), depth + 1);
        auto& nd = tree.nodes[static_cast<std::size_t>(at)];
        nd.feature = static_cast<int>(split.feature);
        nd.threshold = split.threshold;
        nd.left = l;
        nd.right = r;
        return at;
    }

    const std::vector<std::vector<double>>& rows_;
    const std::vector<std::uint8_t>& labels_;
    const ForestConfig& config_;
    std::size_t mtry_;
    std::vector<std::size_t> scratch_features_;
    Rng& rng_;
};

void extract_matrix(const Dataset& data, const std::vector<std::string>& feature_names,
                    std::vector<std::vector<double>>& rows,
                    std::vector<std::uint8_t>& labels) {
    for (const auto* rec : data.all_records()) {
        std::vector<double> row(feature_names.size());
        for (std::size_t j = 0; j < feature_names.size(); ++j) {
            row[j] = rec->features.by_name(feature_names[j]);
            if (is_missing(row[j]))
                throw std::invalid_argument("record '" + rec->id +
                                            "' has a missing value; impute first");
        }
        rows.push_back(std::move(row));
        labels.push_back(rec->label ? 1 : 0);
    }
}

DecisionTree train_one_tree(const std::vector<std::vector<double>>& rows,
                            const std::vector<std::uint8_t>& labels,
                            const ForestConfig& config, std::size_t tree_index) {
    Rng rng(derive_seed(config.seed, tree_index));
    const std::size_t n = rows.size();
    std::vector<std::size_t> bootstrap(n);
    for (auto& b : bootstrap) b = rng.uniform_index(n);
    TreeBuilder builder(rows, labels, config, rows.front().size(), rng);
    return builder.build(std::move(bootstrap));
}

}  // namespace

RandomForest train_forest(const Dataset& data, const ForestConfig& config,
                          const std::vector<std::string>& feature_names, Exec exec) {
    if (config.n_trees == 0) throw std::invalid_argument("n_trees must be positive");
    std::vector<std::string> names = feature_names;
    if (names.empty()) {
        if (!data.feature_names) throw std::invalid_argument("dataset has no feature schema");
        names = *data.feature_names;
    }
    std::vector<std::vector<double>> rows;
    std::vector<std::uint8_t> labels;
    extract_matrix(data, names, rows, labels);
    if (rows.empty()) throw std::invalid_argument("cannot train on an empty dataset");

    std::vector<DecisionTree> trees(config.n_trees);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long t = 0; t < static_cast<long>(config.n_trees); ++t)
            trees[static_cast<std::size_t>(t)] =
                train_one_tree(rows, labels, config, static_cast<std::size_t>(t));
    } else {
        for (std::size_t t = 0; t < config.n_trees; ++t)
            trees[t] = train_one_tree(rows, labels, config, t);
    }
    return RandomForest(config, std::move(names), std::move(trees));
}

std::vector<double> predict_suite(const RandomForest& forest,
                                  const std::vector<TestCaseRecord>& records) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& rec : records) out.push_back(forest.predict(rec.features));
    return out;
}

BinaryMetrics evaluate_binary(const std::vector<double>& proba,
                              const std::vector<std::uint8_t>& labels,
                              double threshold) {
    if (proba.size() != labels.size())
        throw std::invalid_argument("proba/label length mismatch");
    BinaryMetrics m;
    for (std::size_t i = 0; i < proba.size(); ++i) {
        const bool pred = proba[i] >= threshold;
        const bool truth = labels[i] != 0;
        if (pred && truth)
            ++m.tp;
        else if (pred && !truth)
            ++m.fp;
        else if (!pred && truth)
            ++m.fn;
        else
            ++m.tn;
    }
    const auto ratio = [](std::size_t a, std::size_t b) {
        return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
    };
    m.precision = ratio(m.tp, m.tp + m.fp);
    m.recall = ratio(m.tp, m.tp + m.fn);
    m.f1 = (m.precision + m.recall) == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    m.accuracy = ratio(m.tp + m.tn, proba.size());
    m.auc = roc_auc(proba, labels);
    return m;
}

double roc_auc(const std::vector<double>& proba,
               const std::vector<std::uint8_t>& labels) {
    if (proba.size() != labels.size())
        throw std::invalid_argument("proba/label length mismatch");
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < proba.size(); ++i)
        (labels[i] ? pos : neg).push_back(proba[i]);
    if (pos.empty() || neg.empty()) return 0.5;
    double wins = 0.0;
    for (double p : pos)
        for (double q : neg) {
            if (p > q)
                wins += 1.0;
            else if (p == q)
                wins += 0.5;
        }
    return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

GridResult grid_search(const Dataset& data, const GridSpec& grid, std::size_t k,
                       std::uint64_t seed, Exec exec) {
    if (grid.n_trees.empty() || grid.max_depth.empty() || grid.min_samples_leaf.empty())
        throw std::invalid_argument("grid axes must be non-empty");
    const auto folds = kfold_partition(data, k, seed);

    GridResult result;
    bool have_best = false;
    for (std::size_t nt : grid.n_trees) {
        for (std::size_t md : grid.max_depth) {
            for (std::size_t msl : grid.min_samples_leaf) {
                ForestConfig config;
                config.n_trees = nt;
                config.max_depth = md;
                config.min_samples_leaf = msl;
                config.seed = seed;
                double f1_sum = 0.0;
                for (std::size_t i = 0; i < folds.size(); ++i) {
                    const Dataset train = merge_folds(folds, i);
                    const RandomForest forest = train_forest(train, config, {}, exec);
                    std::vector<double> proba;
                    std::vector<std::uint8_t> labels;
                    for (const auto* rec : folds[i].all_records()) {
                        proba.push_back(forest.predict(rec->features));
                        labels.push_back(rec->label ? 1 : 0);
                    }
                    f1_sum += evaluate_binary(proba, labels).f1;
                }
                const double mean_f1 = f1_sum / static_cast<double>(folds.size());
                result.cells.push_back({nt, md, msl, mean_f1});

                const bool better =
                    !have_best || mean_f1 > result.best_score ||
                    (mean_f1 == result.best_score &&
                     (nt < result.best.n_trees ||
                      (nt == result.best.n_trees &&
                       (md < result.best.max_depth ||
                        (md == result.best.max_depth &&
                         msl > result.best.min_samples_leaf)))));
                if (better) {
                    have_best = true;
                    result.best = config;
                    result.best_score = mean_f1;
                }
            }
        }
    }
    return result;
}

RfeResult rfe(const Dataset& data, const ForestConfig& config,
              std::size_t target_features, Exec exec) {
    if (target_features == 0)
        throw std::invalid_argument("target_features must be positive");
    if (!data.feature_names) throw std::invalid_argument("dataset has no feature schema");
    RfeResult result;
    std::vector<std::string> current = *data.feature_names;
    while (current.size() > target_features) {
        const RandomForest forest = train_forest(data, config, current, exec);
        const auto imps = forest.feature_importances();
        std::size_t drop = 0;
        for (std::size_t j = 1; j < current.size(); ++j) {
            if (imps[j] < imps[drop] ||
                (imps[j] == imps[drop] && current[j] > current[drop]))
                drop = j;
        }
        result.steps.push_back({current[drop], imps[drop]});
        current.erase(current.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    result.selected = std::move(current);
    return result;
}

namespace {

nlohmann::json config_to_json(const ForestConfig& c) {
    return {{"n_trees", c.n_trees},
            {"max_depth", c.max_depth},
            {"min_samples_leaf", c.min_samples_leaf},
            {"features_per_split", c.features_per_split.to_string()},
            {"seed", c.seed}};
}

ForestConfig config_from_json(const nlohmann::json& j) {
    ForestConfig c;
    c.n_trees = j.at("n_trees").get<std::size_t>();
    c.max_depth = j.at("max_depth").get<std::size_t>();
    c.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
    c.features_per_split = FeaturesPerSplit::parse(j.at("features_per_split").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

}  // namespace

std::string forest_to_json(const RandomForest& forest) {
    nlohmann::json doc;
    doc["config"] = config_to_json(forest.config());
    doc["feature_names"] = forest.feature_names();
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : forest.trees()) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& nd : tree.nodes)
            nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.n_samples,
                             nd.pos_fraction});
        trees.push_back(std::move(nodes));
    }
    doc["trees"] = std::move(trees);
    return doc.dump() + "\n";
}

RandomForest forest_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid forest json: ") + e.what());
    }
    const ForestConfig config = config_from_json(doc.at("config"));
    std::vector<std::string> names =
        doc.at("feature_names").get<std::vector<std::string>>();
    std::vector<DecisionTree> trees;
    for (const auto& tnodes : doc.at("trees")) {
        DecisionTree tree;
        for (const auto& nj : tnodes) {
            if (!nj.is_array() || nj.size() != 6)
                throw SchemaError("forest json: malformed tree node");
            TreeNode nd;
            nd.feature = nj[0].get<int>();
            nd.threshold = nj[1].get<double>();
            nd.left = nj[2].get<int>();
            nd.right = nj[3].get<int>();
            nd.n_samples = nj[4].get<std::size_t>();
            nd.pos_fraction = nj[5].get<double>();
            if (nd.feature >= 0 &&
                (nd.feature >= static_cast<int>(names.size()) || nd.left < 0 || nd.right < 0))
                throw SchemaError("forest json: node references out of range");
            tree.nodes.push_back(nd);
        }
        if (tree.nodes.empty()) throw SchemaError("forest json: empty tree");
        trees.push_back(std::move(tree));
    }
    return RandomForest(config, std::move(names), std::move(trees));
}

void save_forest(const RandomForest& forest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << forest_to_json(forest);
}

RandomForest load_forest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return forest_from_json(buf.str());
}

}  // namespace qprior

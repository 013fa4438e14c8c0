#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qprior/model.hpp"

namespace qprior {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AllMissingColumn : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct KTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Suite {
    std::string id;
    std::vector<TestCaseRecord> records;
    FaultMatrix faults;
};

struct MinMax {
    double min = 0.0;
    double max = 0.0;
};

struct Dataset {
    std::vector<Suite> suites;
    FeatureNames feature_names;
    // Per-feature (min, max) captured by fit_normalize; empty until fit.
    std::vector<MinMax> normalization_params;

    std::size_t record_count() const;
    std::vector<const TestCaseRecord*> all_records() const;
};

enum class FileFormat { csv, json };

FileFormat format_from_name(const std::string& name);

// CSV schema (header required):
//   id,cyclomatic_complexity,code_churn,dependency_degree,exec_time,
//   line_coverage,branch_coverage,mutation_kill_score,coverage,detects
// where coverage/detects are ';'-separated lists and an empty numeric cell
// means MISSING. JSON is an array of objects with the same field names.
Dataset load_dataset(const std::string& path, FileFormat format);
Dataset dataset_from_csv_text(const std::string& text, const std::string& suite_id);
Dataset dataset_from_json_text(const std::string& text, const std::string& suite_id);

std::string dataset_to_csv_text(const Dataset& dataset);
std::string dataset_to_json_text(const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::string& path, FileFormat format);

// Replaces each MISSING cell with the arithmetic mean of the non-missing
// values in its feature column, pooled over the whole dataset. A record's raw
// exec_time is backfilled when its exec_time feature cell was missing.
Dataset impute_missing(const Dataset& dataset);

// Removes records whose coverage set has fewer than min_elements entries.
std::pair<Dataset, std::size_t> drop_low_coverage(const Dataset& dataset,
                                                  std::size_t min_elements);

// Min-max scales every feature to [0,1] with params fit on this dataset;
// constant columns map to 0. Run impute_missing first.
Dataset fit_normalize(const Dataset& dataset);

// Applies previously fit params (e.g. the training set's) without refitting.
// Values outside the fit range extend linearly, no clamping.
Dataset apply_normalization(const Dataset& dataset,
                            const std::vector<MinMax>& params);

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

// Stratified by label: per class, floor(count * (1 - train_fraction)) records
// go to test and the remainder to train. Deterministic given the seed.
std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset,
                                             const SplitSpec& spec);

// k disjoint stratified folds covering the dataset, sizes differing by <= 1.
std::vector<Dataset> kfold_partition(const Dataset& dataset, std::size_t k,
                                     std::uint64_t seed);

// Union of every fold except `hold_out`, preserving suite structure.
Dataset merge_folds(const std::vector<Dataset>& folds, std::size_t hold_out);

struct SyntheticConfig {
    std::size_t n_tests = 100;
    std::size_t n_faults = 25;
    std::size_t n_code_elements = 200;
    double redundancy = 0.3;   // within-module expected pairwise Jaccard
    double fault_skew = 1.5;   // concentration of faults on churn-heavy elements
    double churn_alpha = 2.0;  // Pareto shape for per-element churn
    double noise = 0.1;        // relative feature noise
    std::uint64_t seed = 0;
};

// Deterministic Defects4J-like suite: churn-weighted fault placement over
// module-clustered coverage, detection gated per test by its mutation kill
// score, features derived from the generating quantities plus noise. Every
// fault ends up detectable by at least one test.
Suite generate_synthetic_suite(const SyntheticConfig& config,
                               const std::string& suite_id = "synthetic");

Dataset dataset_from_suite(Suite suite);

// Module/class of a code element or fault id from the synthetic generator
// ("mod3.e17" or "mod3.f2" -> "mod3"). Empty when the id has no module prefix.
std::string module_of(const std::string& element_or_fault_id);

}  // namespace qprior

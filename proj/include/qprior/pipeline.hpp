#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qprior/clock.hpp"
#include "qprior/evaluate.hpp"
#include "qprior/ingest.hpp"
#include "qprior/learner.hpp"
#include "qprior/prioritize.hpp"

namespace qprior {

struct InsufficientBuilds : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Synthetic commit churn applied to the suite before each build.
struct MutationConfig {
    double drift = 0.05;        // relative Gaussian perturbation of features
    std::size_t max_added = 3;  // 0..max tests cloned-and-perturbed per build
    std::size_t max_removed = 3;
};

struct SimulationConfig {
    std::size_t n_builds = 15;
    std::size_t retrain_every = 5;
    bool retrain_enabled = true;
    std::vector<Policy> policies{Policy::random, Policy::greedy, Policy::ml_only,
                                 Policy::quantum_enhanced};
    PolicyConfig policy;  // solver/qubo/schedule shared by every policy run
    ForestConfig forest;
    MutationConfig mutation;
    std::uint64_t seed = 0;
    // Virtual clock (default) makes ledgers and logs byte-reproducible; turn
    // off to record real wall-clock stage times.
    bool virtual_clock = true;
};

struct BuildRecord {
    std::size_t build_number = 0;
    std::string commit_id;
    bool retrained = false;
    std::string forest_version;  // "v1", "v2", ... bumped on retrain
    std::size_t n_tests = 0;
    std::size_t n_faults = 0;
    std::size_t n_added = 0;
    std::size_t n_removed = 0;
    // Detectable faults per module class, for the defect-density heatmap.
    std::map<std::string, std::size_t> faults_by_class;
    std::vector<MetricsRecord> metrics;  // one per policy, config order
};

struct PipelineLog {
    std::vector<BuildRecord> builds;
};

// Deterministic build loop: mutate suite, prioritize under every policy,
// score, reveal labels, retrain each retrain_every-th build. Errors from
// inner modules are rethrown with the build number attached.
PipelineLog run_simulation(const Suite& initial, const SimulationConfig& config,
                           Clock* clock = nullptr);

// One JSON object per line, one line per build.
std::string pipeline_log_to_jsonl(const PipelineLog& log);
PipelineLog pipeline_log_from_jsonl(const std::string& text);
void save_pipeline_log(const PipelineLog& log, const std::string& path);
PipelineLog load_pipeline_log(const std::string& path);

struct DriftReport {
    double mean_before = 0.0;  // quantum_enhanced APFD, first window
    double mean_after = 0.0;   // quantum_enhanced APFD, last window
    double delta = 0.0;        // after - before
    double p_value = 1.0;
    std::size_t window = 0;  // builds per window (half the log)
    std::size_t first_retrain_build = 0;  // 0 when never retrained
    std::size_t last_retrain_build = 0;
};

// Compares quantum_enhanced APFD between the first and last half-log windows
// (they bracket the first and last retrain events); significance via the
// paired permutation test over window positions. Needs >= 10 builds.
DriftReport drift_check(const PipelineLog& log);

}  // namespace qprior

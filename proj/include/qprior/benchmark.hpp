#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qprior/evaluate.hpp"
#include "qprior/prioritize.hpp"

namespace qprior {

struct BenchmarkCase {
    std::string label;
    std::size_t n_tests = 0;
    std::size_t n_faults = 0;
};

struct BenchmarkConfig {
    std::size_t n_seeds = 30;
    std::vector<BenchmarkCase> cases;
    std::uint64_t seed = 42;
    PolicyConfig policy;  // solver/schedule/lambda knobs; policy field is set per run
    std::size_t n_trees = 100;
    double redundancy = 0.3;
    double fault_skew = 1.5;
    double noise = 0.1;
};

// Runs all four policies over n_seeds seeded generator draws per case. Each
// run trains the forest on three sibling suites and evaluates on a fourth,
// so predictions are honest out-of-suite estimates. Deterministic in seed.
std::vector<MetricsRecord> run_benchmark(const BenchmarkConfig& config);

}  // namespace qprior

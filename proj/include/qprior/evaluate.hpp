#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qprior/model.hpp"
#include "qprior/prioritize.hpp"

namespace qprior {

struct NoFaults : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LengthMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ApfdResult {
    double apfd = 0.0;
    std::vector<std::size_t> tf;  // 1-based first-detection position per fault
};

// Rothermel APFD = 1 - sum(TF_j)/(n*m) + 1/(2n), computed after excluding
// faults no test detects. Throws NoFaults when nothing detectable remains.
ApfdResult apfd(const Ordering& ordering, const FaultMatrix& faults);

// Early-exit execution time: run the sequence in order, stop once every
// detectable fault has been seen. No detectable faults -> full-suite time.
double tet(const Ordering& ordering, const FaultMatrix& faults,
           const std::vector<TestCaseRecord>& records);

// Two-sided paired permutation test on the mean difference, 10,000 random
// sign flips with a fixed internal seed, add-one smoothing:
// p = (#{|resampled mean| >= |observed mean|} + 1) / (N + 1).
double paired_significance(const std::vector<double>& a,
                           const std::vector<double>& b);

struct MetricsRecord {
    Policy policy = Policy::random;
    std::string suite_id;
    std::uint64_t seed = 0;
    std::size_t n = 0;  // tests
    std::size_t m = 0;  // detectable faults
    double apfd = 0.0;
    double tet = 0.0;
    OverheadLedger overhead;
    std::vector<std::size_t> tf;  // not persisted to CSV
};

struct AggregateRow {
    Policy policy = Policy::random;
    SuiteCategory category = SuiteCategory::Small;
    std::size_t count = 0;
    double mean_apfd = 0.0;
    double std_apfd = 0.0;  // population standard deviation
    double mean_tet = 0.0;
    double mean_overhead_total = 0.0;
};

// Groups by (policy, suite category from n); rows sorted by policy then
// category enum order.
std::vector<AggregateRow> aggregate(const std::vector<MetricsRecord>& metrics);

// CSV schema:
//   policy,suite_id,category,seed,n,m,apfd,tet,overhead_total,overhead_solve,
//   overhead_feature_extraction,overhead_prediction,overhead_qubo_build,
//   overhead_serialize_transfer,overhead_parse_order
std::string metrics_to_csv(const std::vector<MetricsRecord>& metrics);
std::vector<MetricsRecord> metrics_from_csv(const std::string& text);
void save_metrics(const std::vector<MetricsRecord>& metrics, const std::string& path);
std::vector<MetricsRecord> load_metrics(const std::string& path);

}  // namespace qprior

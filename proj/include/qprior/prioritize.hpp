#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qprior/anneal.hpp"
#include "qprior/clock.hpp"
#include "qprior/ingest.hpp"
#include "qprior/learner.hpp"
#include "qprior/model.hpp"
#include "qprior/qubo.hpp"

namespace qprior {

struct EmptySuite : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FeatureMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GreedyKey { coverage_desc, time_asc };

const char* greedy_key_name(GreedyKey k);
GreedyKey greedy_key_from_name(const std::string& name);

struct PolicyConfig {
    Policy policy = Policy::quantum_enhanced;
    GreedyKey greedy_key = GreedyKey::coverage_desc;
    QuboConfig qubo;
    SolverKind solver = SolverKind::sa;
    AnnealSchedule schedule;
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;
};

// Per-stage overhead of one prioritization run, in seconds. For remote_stub
// solves the serialization share of the solver's wall time is booked under
// serialize_transfer and the remainder under solve.
struct OverheadLedger {
    double feature_extraction = 0.0;
    double prediction = 0.0;
    double qubo_build = 0.0;
    double serialize_transfer = 0.0;
    double solve = 0.0;
    double parse_order = 0.0;

    double total() const {
        return feature_extraction + prediction + qubo_build + serialize_transfer +
               solve + parse_order;
    }
};

struct PrioritizeResult {
    Ordering ordering;
    OverheadLedger ledger;
    std::vector<double> fault_likelihood;  // per record (ml_only / quantum_enhanced)
    std::size_t rounds = 0;                // selection rounds (quantum_enhanced)
    DecomposeReport decompose;             // accumulated over rounds
};

// Uniform random permutation; selected = all tests.
Ordering prioritize_random(const Suite& suite, std::uint64_t seed);

// coverage_desc: |coverage| descending, ties exec_time ascending, then id.
// time_asc: exec_time ascending, ties |coverage| descending, then id.
Ordering prioritize_greedy(const Suite& suite, GreedyKey key);

// Predicted fault likelihood descending, ties exec_time ascending, then id.
// Optionally returns the per-record predictions through p_out.
Ordering prioritize_ml_only(const Suite& suite, const RandomForest& forest,
                            std::vector<double>* p_out = nullptr);

// Iterative batched QUBO selection: each round builds a selection problem
// over the still-unordered tests (redundancy against already-ordered tests
// folded into the linear terms), solves it, and appends the chosen tests by
// descending likelihood. Rounds repeat until every test is placed;
// Ordering.selected is the round-1 subset.
PrioritizeResult prioritize_quantum(const Suite& suite, const RandomForest& forest,
                                    const PolicyConfig& config,
                                    Clock* clock = nullptr);

// Policy dispatch with stage timing. forest may be null for random/greedy.
PrioritizeResult prioritize(const Suite& suite, const RandomForest* forest,
                            const PolicyConfig& config, Clock* clock = nullptr);

// JSON round trip: {policy, suite_id, sequence, selected, seed}.
std::string ordering_to_json(const Ordering& ordering);
Ordering ordering_from_json(const std::string& text);

}  // namespace qprior

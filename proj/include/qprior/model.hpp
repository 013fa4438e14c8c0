#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qprior {

// Sentinel for a missing numeric feature value.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

// Canonical feature schema shared by file ingestion and the synthetic
// generator. Order matters: feature vectors are positional.
const std::vector<std::string>& canonical_feature_names();

using FeatureNames = std::shared_ptr<const std::vector<std::string>>;

// Positional feature values plus a shared pointer to the ordered name list.
// All records of a dataset share one name list instance.
class FeatureVector {
public:
    FeatureVector() = default;
    FeatureVector(FeatureNames names, std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    const std::vector<std::string>& names() const;
    const FeatureNames& names_ptr() const { return names_; }
    bool has_missing() const;
    double by_name(const std::string& name) const;

private:
    FeatureNames names_;
    std::vector<double> values_;
};

struct TestCaseRecord {
    std::string id;
    FeatureVector features;
    std::set<std::string> coverage;  // covered code-element identifiers
    double exec_time = 0.0;          // seconds, raw (never normalized)
    std::set<std::string> detects;   // ground-truth fault identifiers
    bool label = false;              // historically fault-detecting
};

// m fault columns, one boolean row per test id. Rows all have width m.
class FaultMatrix {
public:
    FaultMatrix() = default;
    FaultMatrix(std::vector<std::string> fault_ids,
                std::map<std::string, std::vector<bool>> rows);

    static FaultMatrix from_records(const std::vector<TestCaseRecord>& records);

    std::size_t fault_count() const { return fault_ids_.size(); }
    const std::vector<std::string>& fault_ids() const { return fault_ids_; }
    const std::map<std::string, std::vector<bool>>& rows() const { return rows_; }
    const std::vector<bool>* row(const std::string& test_id) const;
    bool detects(const std::string& test_id, std::size_t fault_idx) const;

    // Number of faults removed so far because no test detects them.
    int dropped_undetectable() const { return dropped_undetectable_; }

    // Removes all-false fault columns; the count accumulates across calls.
    FaultMatrix without_undetectable() const;

    // Keeps only the given test rows, then prunes newly undetectable faults.
    FaultMatrix restricted_to(const std::vector<std::string>& test_ids) const;

private:
    std::vector<std::string> fault_ids_;
    std::map<std::string, std::vector<bool>> rows_;
    int dropped_undetectable_ = 0;
};

enum class Policy { random, greedy, ml_only, quantum_enhanced };

const char* policy_name(Policy p);
Policy policy_from_name(const std::string& name);

struct Ordering {
    Policy policy = Policy::random;
    std::string suite_id;
    std::vector<std::string> sequence;  // permutation of all test ids
    std::vector<std::string> selected;  // optimizer-chosen subset, a prefix of sequence
    std::uint64_t seed = 0;
};

// True iff sequence is a permutation of the record ids and every selected
// test precedes every unselected one.
bool ordering_is_valid(const Ordering& ordering,
                       const std::vector<TestCaseRecord>& records);

enum class SuiteCategory { Small, Medium, Large };

const char* category_name(SuiteCategory c);

// <50 Small, 50-100 Medium (inclusive), >100 Large.
SuiteCategory categorize_suite(std::size_t n_tests);

struct ValidationIssue {
    enum class Kind {
        duplicate_id,
        negative_exec_time,
        feature_width_mismatch,
        undetectable_fault,
    };
    Kind kind;
    std::string subject;
};

struct ValidationReport {
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;
    bool valid() const { return errors.empty(); }
};

// Report-only structural checks: duplicate ids, negative times, feature width
// mismatches (errors) and all-false fault columns (warnings).
ValidationReport validate_suite(const std::vector<TestCaseRecord>& records,
                                const FaultMatrix& faults);

}  // namespace qprior

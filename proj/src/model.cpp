#include "qprior/model.hpp"

#include <algorithm>

namespace qprior {

const std::vector<std::string>& canonical_feature_names() {
    static const std::vector<std::string> names = {
        "cyclomatic_complexity", "code_churn",      "dependency_degree",
        "exec_time",             "line_coverage",   "branch_coverage",
        "mutation_kill_score",
    };
    return names;
}

FeatureVector::FeatureVector(FeatureNames names, std::vector<double> values)
    : names_(std::move(names)), values_(std::move(values)) {
    if (names_ && names_->size() != values_.size())
        throw std::invalid_argument("feature vector width does not match name list");
}

const std::vector<std::string>& FeatureVector::names() const {
    static const std::vector<std::string> empty;
    return names_ ? *names_ : empty;
}

bool FeatureVector::has_missing() const {
    return std::any_of(values_.begin(), values_.end(),
                       [](double v) { return is_missing(v); });
}

double FeatureVector::by_name(const std::string& name) const {
    const auto& ns = names();
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (ns[i] == name) return values_[i];
    throw std::out_of_range("unknown feature: " + name);
}

FaultMatrix::FaultMatrix(std::vector<std::string> fault_ids,
                         std::map<std::string, std::vector<bool>> rows)
    : fault_ids_(std::move(fault_ids)), rows_(std::move(rows)) {
    for (const auto& [id, row] : rows_)
        if (row.size() != fault_ids_.size())
            throw std::invalid_argument("fault row width mismatch for test " + id);
}

FaultMatrix FaultMatrix::from_records(const std::vector<TestCaseRecord>& records) {
    std::set<std::string> fault_set;
    for (const auto& r : records) fault_set.insert(r.detects.begin(), r.detects.end());
    std::vector<std::string> fault_ids(fault_set.begin(), fault_set.end());

    std::map<std::string, std::vector<bool>> rows;
    for (const auto& r : records) {
        std::vector<bool> row(fault_ids.size(), false);
        for (std::size_t j = 0; j < fault_ids.size(); ++j)
            row[j] = r.detects.count(fault_ids[j]) > 0;
        rows[r.id] = std::move(row);
    }
    return FaultMatrix(std::move(fault_ids), std::move(rows));
}

const std::vector<bool>* FaultMatrix::row(const std::string& test_id) const {
    auto it = rows_.find(test_id);
    return it == rows_.end() ? nullptr : &it->second;
}

bool FaultMatrix::detects(const std::string& test_id, std::size_t fault_idx) const {
    const auto* r = row(test_id);
    return r && fault_idx < r->size() && (*r)[fault_idx];
}

FaultMatrix FaultMatrix::without_undetectable() const {
    std::vector<bool> keep(fault_ids_.size(), false);
    for (const auto& [id, row] : rows_)
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j]) keep[j] = true;

    std::vector<std::string> kept_ids;
    for (std::size_t j = 0; j < fault_ids_.size(); ++j)
        if (keep[j]) kept_ids.push_back(fault_ids_[j]);

    std::map<std::string, std::vector<bool>> kept_rows;
    for (const auto& [id, row] : rows_) {
        std::vector<bool> r;
        r.reserve(kept_ids.size());
        for (std::size_t j = 0; j < row.size(); ++j)
            if (keep[j]) r.push_back(row[j]);
        kept_rows[id] = std::move(r);
    }

    FaultMatrix out(std::move(kept_ids), std::move(kept_rows));
    out.dropped_undetectable_ =
        dropped_undetectable_ + static_cast<int>(fault_ids_.size() - out.fault_ids_.size());
    return out;
}

FaultMatrix FaultMatrix::restricted_to(const std::vector<std::string>& test_ids) const {
    std::map<std::string, std::vector<bool>> kept;
    for (const auto& id : test_ids) {
        auto it = rows_.find(id);
        if (it != rows_.end()) kept[id] = it->second;
    }
    FaultMatrix out(fault_ids_, std::move(kept));
    out.dropped_undetectable_ = dropped_undetectable_;
    return out.without_undetectable();
}

const char* policy_name(Policy p) {
    switch (p) {
        case Policy::random: return "random";
        case Policy::greedy: return "greedy";
        case Policy::ml_only: return "ml_only";
        case Policy::quantum_enhanced: return "quantum_enhanced";
    }
    return "unknown";
}

Policy policy_from_name(const std::string& name) {
    if (name == "random") return Policy::random;
    if (name == "greedy") return Policy::greedy;
    if (name == "ml_only") return Policy::ml_only;
    if (name == "quantum_enhanced") return Policy::quantum_enhanced;
    throw std::invalid_argument("unknown policy: " + name);
}

bool ordering_is_valid(const Ordering& ordering,
                       const std::vector<TestCaseRecord>& records) {
    if (ordering.sequence.size() != records.size()) return false;
    std::set<std::string> suite_ids;
    for (const auto& r : records) suite_ids.insert(r.id);
    std::set<std::string> seq_ids(ordering.sequence.begin(), ordering.sequence.end());
    if (seq_ids != suite_ids || seq_ids.size() != ordering.sequence.size()) return false;

    std::set<std::string> selected(ordering.selected.begin(), ordering.selected.end());
    bool seen_unselected = false;
    for (const auto& id : ordering.sequence) {
        if (selected.count(id)) {
            if (seen_unselected) return false;
        } else {
            seen_unselected = true;
        }
    }
    return true;
}

const char* category_name(SuiteCategory c) {
    switch (c) {
        case SuiteCategory::Small: return "small";
        case SuiteCategory::Medium: return "medium";
        case SuiteCategory::Large: return "large";
    }
    return "unknown";
}

SuiteCategory categorize_suite(std::size_t n_tests) {
    if (n_tests < 50) return SuiteCategory::Small;
    if (n_tests <= 100) return SuiteCategory::Medium;
    return SuiteCategory::Large;
}

ValidationReport validate_suite(const std::vector<TestCaseRecord>& records,
                                const FaultMatrix& faults) {
    ValidationReport report;
    std::set<std::string> seen;
    std::size_t width = records.empty() ? 0 : records.front().features.size();

    for (const auto& r : records) {
        if (!seen.insert(r.id).second)
            report.errors.push_back({ValidationIssue::Kind::duplicate_id, r.id});
        if (r.exec_time < 0.0)
            report.errors.push_back({ValidationIssue::Kind::negative_exec_time, r.id});
        if (r.features.size() != width)
            report.errors.push_back({ValidationIssue::Kind::feature_width_mismatch, r.id});
    }

    std::vector<bool> detected(faults.fault_count(), false);
    for (const auto& [id, row] : faults.rows())
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j]) detected[j] = true;
    for (std::size_t j = 0; j < detected.size(); ++j)
        if (!detected[j])
            report.warnings.push_back(
                {ValidationIssue::Kind::undetectable_fault, faults.fault_ids()[j]});

    return report;
}

}  // namespace qprior

#pragma once

// Small builders shared by the unit tests.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "qprior/ingest.hpp"
#include "qprior/model.hpp"

namespace testutil {

inline qprior::FeatureNames make_names(std::vector<std::string> names) {
    return std::make_shared<const std::vector<std::string>>(std::move(names));
}

inline qprior::TestCaseRecord make_record(const std::string& id,
                                          qprior::FeatureNames names,
                                          std::vector<double> values,
                                          std::set<std::string> coverage = {},
                                          double exec_time = 1.0,
                                          std::set<std::string> detects = {},
                                          bool label = false) {
    qprior::TestCaseRecord rec;
    rec.id = id;
    rec.features = qprior::FeatureVector(std::move(names), std::move(values));
    rec.coverage = std::move(coverage);
    rec.exec_time = exec_time;
    rec.detects = std::move(detects);
    rec.label = label;
    return rec;
}

// n records over one feature "x": positives near 1, negatives near 0.
// Deterministic, linearly separable up to the noise amplitude.
inline qprior::Dataset separable_dataset(std::size_t n, double noise = 0.05,
                                         const std::string& suite_id = "sep") {
    auto names = make_names({"x"});
    qprior::Suite suite;
    suite.id = suite_id;
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = i % 2 == 0;
        const double base = positive ? 1.0 : 0.0;
        const double jitter = noise * static_cast<double>(i % 7) / 7.0;
        auto rec = make_record("t" + std::to_string(i), names, {base + jitter});
        rec.label = positive;
        suite.records.push_back(std::move(rec));
    }
    return qprior::dataset_from_suite(std::move(suite));
}

}  // namespace testutil

#include "qprior/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qprior/rng.hpp"

namespace qprior {

namespace {

std::string hex8(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(8, '0');
    for (std::size_t i = 0; i < 8; ++i) out[7 - i] = digits[(v >> (4 * i)) & 0xf];
    return out;
}

// Clone-and-perturb suite churn: remove up to max_removed tests, drift every
// feature, add up to max_added near-copies of surviving tests.
void mutate_suite(Suite& suite, const MutationConfig& config, std::size_t build,
                  Rng& rng, std::size_t& added, std::size_t& removed) {
    auto& records = suite.records;

    std::size_t n_remove = rng.uniform_index(config.max_removed + 1);
    n_remove = std::min(n_remove, records.size() > 1 ? records.size() - 1 : 0);
    removed = 0;
    std::size_t positives = static_cast<std::size_t>(std::count_if(
        records.begin(), records.end(), [](const auto& r) { return r.label; }));
    for (std::size_t k = 0; k < n_remove; ++k) {
        // Never delete the last fault-detecting test: downstream scoring
        // needs at least one detectable fault per build.
        std::size_t at = rng.uniform_index(records.size());
        bool ok = false;
        for (std::size_t tries = 0; tries < records.size(); ++tries) {
            const std::size_t i = (at + tries) % records.size();
            if (!(records[i].label && positives == 1)) {
                at = i;
                ok = true;
                break;
            }
        }
        if (!ok) break;
        if (records[at].label) --positives;
        records.erase(records.begin() + static_cast<std::ptrdiff_t>(at));
        ++removed;
    }

    if (config.drift > 0.0) {
        for (auto& rec : records) {
            auto& values = rec.features.mutable_values();
            for (std::size_t f = 0; f < values.size(); ++f)
                values[f] = std::max(
                    0.0, values[f] * (1.0 + config.drift * rng.normal(0.0, 1.0)));
            rec.exec_time = rec.features.by_name("exec_time");
        }
    }

    const std::size_t n_add = rng.uniform_index(config.max_added + 1);
    for (std::size_t k = 0; k < n_add; ++k) {
        TestCaseRecord fresh = records[rng.uniform_index(records.size())];
        fresh.id = "b" + std::to_string(build) + "_t" + std::to_string(k);
        auto& values = fresh.features.mutable_values();
        for (std::size_t f = 0; f < values.size(); ++f)
            values[f] = std::max(0.0, values[f] * (1.0 + 0.2 * rng.normal(0.0, 1.0)));
        fresh.exec_time = fresh.features.by_name("exec_time");
        // A new test for the same area keeps each template detection with
        // probability 1/2 -- fresh tests are not guaranteed regressions.
        std::set<std::string> kept;
        for (const auto& fid : fresh.detects)
            if (rng.bernoulli(0.5)) kept.insert(fid);
        fresh.detects = std::move(kept);
        fresh.label = !fresh.detects.empty();
        records.push_back(std::move(fresh));
    }
    added = n_add;

    suite.faults = FaultMatrix::from_records(records);
}

Dataset history_dataset(const std::vector<TestCaseRecord>& observed,
                        const FeatureNames& names) {
    Suite suite;
    suite.id = "history";
    suite.records = observed;
    suite.faults = FaultMatrix::from_records(suite.records);
    Dataset ds;
    ds.feature_names = names;
    ds.suites.push_back(std::move(suite));
    return ds;
}

}  // namespace

PipelineLog run_simulation(const Suite& initial, const SimulationConfig& config,
                           Clock* clock) {
    if (config.n_builds < 1) throw std::invalid_argument("n_builds must be >= 1");
    if (config.retrain_every < 1)
        throw std::invalid_argument("retrain_every must be >= 1");
    if (initial.records.empty()) throw EmptySuite("initial suite has no tests");
    if (config.policies.empty())
        throw std::invalid_argument("at least one policy required");

    VirtualClock virt;
    MonotonicClock wall;
    Clock& clk = clock ? *clock
                       : (config.virtual_clock ? static_cast<Clock&>(virt)
                                               : static_cast<Clock&>(wall));

    const FeatureNames names = initial.records.front().features.names_ptr();
    std::vector<TestCaseRecord> observed = initial.records;
    std::size_t forest_version = 1;
    RandomForest forest = [&] {
        ForestConfig fc = config.forest;
        fc.seed = derive_seed(config.seed, 0xf0);
        return train_forest(history_dataset(observed, names), fc, {},
                            config.policy.exec);
    }();

    Suite current = initial;
    PipelineLog log;
    for (std::size_t b = 1; b <= config.n_builds; ++b) {
        try {
            BuildRecord build;
            build.build_number = b;
            const std::uint64_t build_seed = derive_seed(config.seed, b);
            build.commit_id = "commit-" + hex8(build_seed);

            Rng rng(build_seed);
            mutate_suite(current, config.mutation, b, rng, build.n_added,
                         build.n_removed);

            const ValidationReport check = validate_suite(current.records, current.faults);
            if (!check.valid())
                throw std::runtime_error("suite invalid after mutation: " +
                                         check.errors.front().subject);

            build.n_tests = current.records.size();
            build.n_faults = current.faults.fault_count();
            for (const auto& fid : current.faults.fault_ids()) {
                std::string cls = module_of(fid);
                if (cls.empty()) cls = "unclassified";
                ++build.faults_by_class[cls];
            }

            for (std::size_t pi = 0; pi < config.policies.size(); ++pi) {
                PolicyConfig pc = config.policy;
                pc.policy = config.policies[pi];
                pc.seed = derive_seed(build_seed, pi + 1);
                const PrioritizeResult pr = prioritize(current, &forest, pc, &clk);
                MetricsRecord mr;
                mr.policy = pc.policy;
                mr.suite_id = current.id;
                mr.seed = pc.seed;
                mr.n = current.records.size();
                mr.overhead = pr.ledger;
                const ApfdResult a = apfd(pr.ordering, current.faults);
                mr.m = a.tf.size();
                mr.apfd = a.apfd;
                mr.tf = a.tf;
                mr.tet = tet(pr.ordering, current.faults, current.records);
                build.metrics.push_back(std::move(mr));
            }

            // Post-build fault triage reveals this build's labels.
            observed.insert(observed.end(), current.records.begin(),
                            current.records.end());
            build.retrained =
                config.retrain_enabled && b % config.retrain_every == 0;
            if (build.retrained) {
                ForestConfig fc = config.forest;
                fc.seed = derive_seed(config.seed, 0xf0 + forest_version);
                forest = train_forest(history_dataset(observed, names), fc, {},
                                      config.policy.exec);
                ++forest_version;
            }
            build.forest_version = "v" + std::to_string(forest_version);
            log.builds.push_back(std::move(build));
        } catch (const std::exception& e) {
            throw std::runtime_error("build " + std::to_string(b) + ": " + e.what());
        }
    }
    return log;
}

namespace {

nlohmann::json ledger_to_json(const OverheadLedger& o) {
    return {{"feature_extraction", o.feature_extraction},
            {"prediction", o.prediction},
            {"qubo_build", o.qubo_build},
            {"serialize_transfer", o.serialize_transfer},
            {"solve", o.solve},
            {"parse_order", o.parse_order},
            {"total", o.total()}};
}

OverheadLedger ledger_from_json(const nlohmann::json& j) {
    OverheadLedger o;
    o.feature_extraction = j.at("feature_extraction").get<double>();
    o.prediction = j.at("prediction").get<double>();
    o.qubo_build = j.at("qubo_build").get<double>();
    o.serialize_transfer = j.at("serialize_transfer").get<double>();
    o.solve = j.at("solve").get<double>();
    o.parse_order = j.at("parse_order").get<double>();
    return o;
}

}  // namespace

std::string pipeline_log_to_jsonl(const PipelineLog& log) {
    std::string out;
    for (const auto& build : log.builds) {
        nlohmann::json line;
        line["build"] = build.build_number;
        line["commit"] = build.commit_id;
        line["retrained"] = build.retrained;
        line["forest_version"] = build.forest_version;
        line["n_tests"] = build.n_tests;
        line["n_faults"] = build.n_faults;
        line["n_added"] = build.n_added;
        line["n_removed"] = build.n_removed;
        line["faults_by_class"] = build.faults_by_class;
        nlohmann::json metrics = nlohmann::json::array();
        for (const auto& mr : build.metrics) {
            nlohmann::json mj;
            mj["policy"] = policy_name(mr.policy);
            mj["suite_id"] = mr.suite_id;
            mj["seed"] = mr.seed;
            mj["n"] = mr.n;
            mj["m"] = mr.m;
            mj["apfd"] = mr.apfd;
            mj["tet"] = mr.tet;
            mj["tf"] = mr.tf;
            mj["overhead"] = ledger_to_json(mr.overhead);
            metrics.push_back(std::move(mj));
        }
        line["metrics"] = std::move(metrics);
        out += line.dump();
        out.push_back('\n');
    }
    return out;
}

PipelineLog pipeline_log_from_jsonl(const std::string& text) {
    PipelineLog log;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("pipeline log line " + std::to_string(line_no) + ": " +
                             e.what());
        }
        BuildRecord build;
        build.build_number = j.at("build").get<std::size_t>();
        build.commit_id = j.at("commit").get<std::string>();
        build.retrained = j.at("retrained").get<bool>();
        build.forest_version = j.at("forest_version").get<std::string>();
        build.n_tests = j.at("n_tests").get<std::size_t>();
        build.n_faults = j.at("n_faults").get<std::size_t>();
        build.n_added = j.at("n_added").get<std::size_t>();
        build.n_removed = j.at("n_removed").get<std::size_t>();
        build.faults_by_class =
            j.at("faults_by_class").get<std::map<std::string, std::size_t>>();
        for (const auto& mj : j.at("metrics")) {
            MetricsRecord mr;
            mr.policy = policy_from_name(mj.at("policy").get<std::string>());
            mr.suite_id = mj.at("suite_id").get<std::string>();
            mr.seed = mj.at("seed").get<std::uint64_t>();
            mr.n = mj.at("n").get<std::size_t>();
            mr.m = mj.at("m").get<std::size_t>();
            mr.apfd = mj.at("apfd").get<double>();
            mr.tet = mj.at("tet").get<double>();
            mr.tf = mj.at("tf").get<std::vector<std::size_t>>();
            mr.overhead = ledger_from_json(mj.at("overhead"));
            build.metrics.push_back(std::move(mr));
        }
        log.builds.push_back(std::move(build));
    }
    return log;
}

void save_pipeline_log(const PipelineLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << pipeline_log_to_jsonl(log);
}

PipelineLog load_pipeline_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return pipeline_log_from_jsonl(buf.str());
}

DriftReport drift_check(const PipelineLog& log) {
    const std::size_t n = log.builds.size();
    if (n < 10)
        throw InsufficientBuilds("drift check needs >= 10 builds, got " +
                                 std::to_string(n));
    std::vector<double> series;
    series.reserve(n);
    for (const auto& build : log.builds) {
        const auto it = std::find_if(
            build.metrics.begin(), build.metrics.end(),
            [](const MetricsRecord& m) { return m.policy == Policy::quantum_enhanced; });
        if (it == build.metrics.end())
            throw std::invalid_argument("drift check requires quantum_enhanced metrics");
        series.push_back(it->apfd);
    }

    DriftReport report;
    for (const auto& build : log.builds) {
        if (build.retrained) {
            if (report.first_retrain_build == 0)
                report.first_retrain_build = build.build_number;
            report.last_retrain_build = build.build_number;
        }
    }
    const std::size_t w = n / 2;
    report.window = w;
    std::vector<double> before(series.begin(),
                               series.begin() + static_cast<std::ptrdiff_t>(w));
    std::vector<double> after(series.end() - static_cast<std::ptrdiff_t>(w),
                              series.end());
    const auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    report.mean_before = mean(before);
    report.mean_after = mean(after);
    report.delta = report.mean_after - report.mean_before;
    report.p_value = paired_significance(after, before);
    return report;
}

}  // namespace qprior

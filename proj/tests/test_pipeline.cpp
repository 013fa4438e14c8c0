#include <doctest.h>

#include <string>
#include <vector>

#include "helpers.hpp"
#include "qprior/pipeline.hpp"

using namespace qprior;

namespace {

Suite small_synthetic(std::uint64_t seed = 31) {
    SyntheticConfig cfg;
    cfg.n_tests = 20;
    cfg.n_faults = 6;
    cfg.n_code_elements = 40;
    cfg.seed = seed;
    return generate_synthetic_suite(cfg, "ci");
}

SimulationConfig fast_config() {
    SimulationConfig cfg;
    cfg.n_builds = 10;
    cfg.retrain_every = 5;
    cfg.forest.n_trees = 10;
    cfg.policy.schedule.sweeps = 100;
    cfg.policy.schedule.restarts = 2;
    cfg.seed = 5;
    return cfg;
}

}  // namespace

TEST_CASE("simulation retrains on schedule and versions the model") {
    SimulationConfig cfg = fast_config();
    PipelineLog log = run_simulation(small_synthetic(), cfg);
    REQUIRE(log.builds.size() == 10);
    for (const auto& build : log.builds) {
        CHECK(build.retrained == (build.build_number % 5 == 0));
        CHECK(build.commit_id.rfind("commit-", 0) == 0);
        CHECK(build.n_tests > 0);
        // One metrics row per policy, in config order.
        REQUIRE(build.metrics.size() == cfg.policies.size());
        for (std::size_t i = 0; i < cfg.policies.size(); ++i) {
            CHECK(build.metrics[i].policy == cfg.policies[i]);
            CHECK(build.metrics[i].apfd > 0.0);
            CHECK(build.metrics[i].apfd <= 1.0);
            CHECK(build.metrics[i].n == build.n_tests);
        }
        CHECK(build.n_added <= cfg.mutation.max_added);
        CHECK(build.n_removed <= cfg.mutation.max_removed);
    }
    // v1 until the first retrain finishes build 5, then v2, then v3.
    CHECK(log.builds[0].forest_version == "v1");
    CHECK(log.builds[3].forest_version == "v1");
    CHECK(log.builds[4].forest_version == "v2");
    CHECK(log.builds[8].forest_version == "v2");
    CHECK(log.builds[9].forest_version == "v3");
}

TEST_CASE("retraining can be disabled") {
    SimulationConfig cfg = fast_config();
    cfg.retrain_enabled = false;
    PipelineLog log = run_simulation(small_synthetic(), cfg);
    for (const auto& build : log.builds) {
        CHECK_FALSE(build.retrained);
        CHECK(build.forest_version == "v1");
    }
}

TEST_CASE("simulation runs are byte-reproducible under the virtual clock") {
    SimulationConfig cfg = fast_config();
    PipelineLog a = run_simulation(small_synthetic(), cfg);
    PipelineLog b = run_simulation(small_synthetic(), cfg);
    CHECK(pipeline_log_to_jsonl(a) == pipeline_log_to_jsonl(b));
    // And sensitive to the seed.
    cfg.seed = 6;
    PipelineLog c = run_simulation(small_synthetic(), cfg);
    CHECK(pipeline_log_to_jsonl(a) != pipeline_log_to_jsonl(c));
}

TEST_CASE("pipeline log jsonl round trip") {
    SimulationConfig cfg = fast_config();
    cfg.n_builds = 3;
    PipelineLog log = run_simulation(small_synthetic(), cfg);
    const std::string text = pipeline_log_to_jsonl(log);
    PipelineLog back = pipeline_log_from_jsonl(text);
    CHECK(pipeline_log_to_jsonl(back) == text);
    REQUIRE(back.builds.size() == 3);
    CHECK(back.builds[1].build_number == log.builds[1].build_number);
    CHECK(back.builds[1].commit_id == log.builds[1].commit_id);
    CHECK(back.builds[1].faults_by_class == log.builds[1].faults_by_class);
    CHECK(back.builds[1].metrics.size() == log.builds[1].metrics.size());
    CHECK(back.builds[1].metrics[0].apfd == log.builds[1].metrics[0].apfd);
    CHECK(back.builds[1].metrics[3].overhead.total() ==
          doctest::Approx(log.builds[1].metrics[3].overhead.total()));
}

TEST_CASE("drift check windows bracket the retrain events") {
    // Hand-built log: constant quantum APFD, retrains at builds 5 and 10.
    PipelineLog log;
    for (std::size_t b = 1; b <= 10; ++b) {
        BuildRecord build;
        build.build_number = b;
        build.retrained = b % 5 == 0;
        MetricsRecord mr;
        mr.policy = Policy::quantum_enhanced;
        mr.apfd = 0.8;
        build.metrics.push_back(mr);
        log.builds.push_back(std::move(build));
    }
    DriftReport report = drift_check(log);
    CHECK(report.window == 5);
    CHECK(report.first_retrain_build == 5);
    CHECK(report.last_retrain_build == 10);
    CHECK(report.mean_before == doctest::Approx(0.8));
    CHECK(report.mean_after == doctest::Approx(0.8));
    CHECK(report.delta == doctest::Approx(0.0));
    CHECK(report.p_value == doctest::Approx(1.0));  // identical windows

    PipelineLog too_short;
    too_short.builds.assign(9, BuildRecord{});
    CHECK_THROWS_AS(drift_check(too_short), InsufficientBuilds);
}

TEST_CASE("simulation rejects nonsense configurations") {
    SimulationConfig cfg = fast_config();
    cfg.n_builds = 0;
    CHECK_THROWS_AS(run_simulation(small_synthetic(), cfg), std::invalid_argument);
    cfg = fast_config();
    cfg.retrain_every = 0;
    CHECK_THROWS_AS(run_simulation(small_synthetic(), cfg), std::invalid_argument);
    cfg = fast_config();
    cfg.policies.clear();
    CHECK_THROWS_AS(run_simulation(small_synthetic(), cfg), std::invalid_argument);
    Suite empty;
    empty.id = "none";
    CHECK_THROWS_AS(run_simulation(empty, fast_config()), EmptySuite);
}

#include "qprior/benchmark.hpp"

#include <algorithm>

#include "qprior/ingest.hpp"
#include "qprior/learner.hpp"
#include "qprior/rng.hpp"

namespace qprior {

std::vector<MetricsRecord> run_benchmark(const BenchmarkConfig& config) {
    const Policy policies[] = {Policy::random, Policy::greedy, Policy::ml_only,
                               Policy::quantum_enhanced};
    std::vector<MetricsRecord> metrics;
    for (std::size_t si = 0; si < config.n_seeds; ++si) {
        for (std::size_t zi = 0; zi < config.cases.size(); ++zi) {
            const auto& c = config.cases[zi];
            const std::uint64_t base =
                derive_seed(config.seed, (static_cast<std::uint64_t>(si) << 16) | zi);

            SyntheticConfig sc;
            sc.n_tests = c.n_tests;
            sc.n_faults = c.n_faults;
            sc.n_code_elements = std::max<std::size_t>(40, c.n_tests * 2);
            sc.redundancy = config.redundancy;
            sc.fault_skew = config.fault_skew;
            sc.noise = config.noise;

            Dataset train_data;
            for (std::size_t h = 0; h < 3; ++h) {
                sc.seed = derive_seed(base, 10 + h);
                train_data.suites.push_back(
                    generate_synthetic_suite(sc, "hist" + std::to_string(h)));
            }
            train_data.feature_names =
                train_data.suites.front().records.front().features.names_ptr();
            sc.seed = derive_seed(base, 2);
            const Suite eval_suite =
                generate_synthetic_suite(sc, c.label + "_s" + std::to_string(si));

            ForestConfig fc;
            fc.n_trees = config.n_trees;
            fc.seed = derive_seed(base, 3);
            const RandomForest forest = train_forest(train_data, fc);

            for (std::size_t pi = 0; pi < 4; ++pi) {
                PolicyConfig pc = config.policy;
                pc.policy = policies[pi];
                pc.seed = derive_seed(base, 4 + pi);
                const PrioritizeResult result = prioritize(eval_suite, &forest, pc);

                MetricsRecord rec;
                rec.policy = policies[pi];
                rec.suite_id = eval_suite.id;
                rec.seed = si;
                rec.n = eval_suite.records.size();
                const ApfdResult a = apfd(result.ordering, eval_suite.faults);
                rec.apfd = a.apfd;
                rec.tf = a.tf;
                rec.m = a.tf.size();
                rec.tet = tet(result.ordering, eval_suite.faults, eval_suite.records);
                rec.overhead = result.ledger;
                metrics.push_back(std::move(rec));
            }
        }
    }
    return metrics;
}

}  // namespace qprior

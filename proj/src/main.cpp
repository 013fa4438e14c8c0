// qprior: test-case prioritization with an annealing-based selection backend.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qprior/anneal.hpp"
#include "qprior/benchmark.hpp"
#include "qprior/clock.hpp"
#include "qprior/evaluate.hpp"
#include "qprior/ingest.hpp"
#include "qprior/learner.hpp"
#include "qprior/pipeline.hpp"
#include "qprior/prioritize.hpp"
#include "qprior/report.hpp"
#include "qprior/rng.hpp"
#include "qprior/util.hpp"

namespace {

using nlohmann::json;
using namespace qprior;

using ConfigSetters = std::map<std::string, std::function<void(const json&)>>;

// Applies a JSON config file; flags passed on the command line win, so each
// setter is wrapped to fire only when its option was not given explicitly.
void apply_config_file(const std::string& path, const ConfigSetters& setters) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("unknown config key '" + key + "'");
        try {
            it->second(value);
        } catch (const json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }
}

std::function<void(const json&)> unless_flag(CLI::Option* opt,
                                             std::function<void(const json&)> set) {
    return [opt, set = std::move(set)](const json& v) {
        if (opt->count() == 0) set(v);
    };
}

std::uint64_t env_seed_or(std::uint64_t fallback) {
    const char* env = std::getenv("QPRIOR_SEED");
    if (!env || !*env) return fallback;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (!end || *end != '\0')
        throw ConfigError(std::string("QPRIOR_SEED is not an integer: '") + env + "'");
    return static_cast<std::uint64_t>(v);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

FileFormat pick_format(const std::string& format_flag, const std::string& path) {
    if (format_flag == "csv") return FileFormat::csv;
    if (format_flag == "json") return FileFormat::json;
    return format_from_name(path);
}

struct SizeSpec {
    std::string label;
    std::size_t n_tests = 0;
    std::size_t n_faults = 0;
};

SizeSpec size_from_token(const std::string& token) {
    if (token == "small") return {"small", 30, 8};
    if (token == "medium") return {"medium", 75, 18};
    if (token == "large") return {"large", 150, 35};
    char* end = nullptr;
    const unsigned long long n = std::strtoull(token.c_str(), &end, 10);
    if (!end || *end != '\0' || n == 0)
        throw ConfigError("unknown size '" + token + "' (use small|medium|large|<n>)");
    const auto tests = static_cast<std::size_t>(n);
    return {token, tests, std::max<std::size_t>(2, tests / 4)};
}

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

const Suite& pick_suite(const Dataset& data, const std::string& suite_id) {
    if (data.suites.empty()) throw SchemaError("dataset contains no suites");
    if (suite_id.empty()) return data.suites.front();
    for (const auto& s : data.suites)
        if (s.id == suite_id) return s;
    throw SchemaError("no suite named '" + suite_id + "' in dataset");
}

// ---------------------------------------------------------------- generate
struct GenerateOpts {
    SyntheticConfig synth;
    std::string out = "suite.csv";
    std::string format;
    std::string config;
    std::string suite_id = "synthetic";
};

int run_generate(const GenerateOpts& o) {
    const Suite suite = generate_synthetic_suite(o.synth, o.suite_id);
    const Dataset data = dataset_from_suite(suite);
    save_dataset(data, o.out, pick_format(o.format, o.out));
    std::cout << "wrote suite '" << suite.id << "' (" << suite.records.size()
              << " tests, " << suite.faults.fault_ids().size() << " faults) to "
              << o.out << "\n";
    return 0;
}

// ------------------------------------------------------------------- train
struct TrainOpts {
    std::string data_path;
    std::string out = "forest.json";
    std::string config;
    std::uint64_t seed = 42;
    ForestConfig forest;
    bool skip_grid = false;
    bool skip_rfe = false;
    std::size_t rfe_target = 5;
    std::size_t folds = 5;
};

int run_train(const TrainOpts& o) {
    Dataset data = load_dataset(o.data_path, format_from_name(o.data_path));
    data = impute_missing(data);

    ForestConfig fc = o.forest;
    fc.seed = o.seed;
    if (!o.skip_grid) {
        const GridResult grid = grid_search(data, GridSpec{}, o.folds, o.seed);
        fc = grid.best;
        std::cout << "grid search best: n_trees=" << fc.n_trees
                  << " max_depth=" << fc.max_depth
                  << " min_samples_leaf=" << fc.min_samples_leaf
                  << " (mean F1 " << detail::format_double(grid.best_score) << ")\n";
    }

    const RandomForest forest = train_forest(data, fc);
    const auto importances = forest.feature_importances();
    std::cout << "feature importances:\n";
    for (std::size_t i = 0; i < importances.size(); ++i)
        std::cout << "  " << forest.feature_names()[i] << " "
                  << detail::format_double(importances[i]) << "\n";

    if (!o.skip_rfe && o.rfe_target < data.feature_names->size()) {
        const RfeResult r = rfe(data, fc, o.rfe_target);
        std::cout << "rfe eliminated:";
        for (const auto& step : r.steps) std::cout << " " << step.eliminated;
        std::cout << "\nrfe selected:";
        for (const auto& name : r.selected) std::cout << " " << name;
        std::cout << "\n";
    }

    save_forest(forest, o.out);
    std::cout << "wrote forest to " << o.out << "\n";
    return 0;
}

// -------------------------------------------------------------- prioritize
struct PrioritizeOpts {
    std::string data_path;
    std::string suite_id;
    std::string model_path;
    std::string out;
    std::string config;
    PolicyConfig policy;
    std::string policy_name = "quantum_enhanced";
    std::string solver = "sa";
    std::uint64_t seed = 42;
};

int run_prioritize(const PrioritizeOpts& o) {
    Dataset data = load_dataset(o.data_path, format_from_name(o.data_path));
    data = impute_missing(data);
    const Suite& suite = pick_suite(data, o.suite_id);

    PolicyConfig pc = o.policy;
    pc.policy = policy_from_name(o.policy_name);
    pc.solver = solver_from_name(o.solver);
    pc.seed = o.seed;
    pc.schedule.seed = o.seed;

    RandomForest forest;
    const RandomForest* forest_ptr = nullptr;
    const bool needs_model =
        pc.policy == Policy::ml_only || pc.policy == Policy::quantum_enhanced;
    if (needs_model) {
        if (!o.model_path.empty()) {
            forest = load_forest(o.model_path);
        } else {
            ForestConfig fc;
            fc.seed = derive_seed(o.seed, 0xf0);
            forest = train_forest(data, fc);
        }
        forest_ptr = &forest;
    }

    const PrioritizeResult result = prioritize(suite, forest_ptr, pc);
    const std::string payload = ordering_to_json(result.ordering);
    if (o.out.empty()) {
        std::cout << payload;
    } else {
        write_text(o.out, payload);
        std::cout << "wrote ordering (" << result.ordering.sequence.size()
                  << " tests, " << result.ordering.selected.size()
                  << " selected) to " << o.out << "\n";
        std::cout << "overhead total "
                  << detail::format_double(result.ledger.total()) << " s (solve "
                  << detail::format_double(result.ledger.solve) << " s)\n";
    }
    return 0;
}

// ------------------------------------------------------------------- bench
struct BenchOpts {
    std::size_t n_seeds = 30;
    std::string sizes = "small,medium,large";
    std::string out = "metrics.csv";
    std::string config;
    std::uint64_t seed = 42;
    PolicyConfig policy;
    std::string solver = "sa";
    std::size_t n_trees = 100;
    double redundancy = 0.3;
    double fault_skew = 1.5;
    double noise = 0.1;
};

int run_bench(const BenchOpts& o) {
    BenchmarkConfig bc;
    bc.n_seeds = o.n_seeds;
    for (const auto& token : split_csv_list(o.sizes)) {
        const SizeSpec size = size_from_token(token);
        bc.cases.push_back({size.label, size.n_tests, size.n_faults});
    }
    if (bc.cases.empty()) throw ConfigError("--sizes produced an empty list");
    bc.seed = o.seed;
    bc.policy = o.policy;
    bc.policy.solver = solver_from_name(o.solver);
    bc.n_trees = o.n_trees;
    bc.redundancy = o.redundancy;
    bc.fault_skew = o.fault_skew;
    bc.noise = o.noise;

    const std::vector<MetricsRecord> metrics = run_benchmark(bc);
    save_metrics(metrics, o.out);
    std::cout << "wrote " << metrics.size() << " metric rows to " << o.out << "\n";
    for (const auto& row : aggregate(metrics)) {
        std::cout << policy_name(row.policy) << " " << category_name(row.category)
                  << ": mean APFD " << detail::format_double(row.mean_apfd)
                  << ", mean TET " << detail::format_double(row.mean_tet) << " s ("
                  << row.count << " runs)\n";
    }
    return 0;
}

// ---------------------------------------------------------------- simulate
struct SimulateOpts {
    std::size_t builds = 15;
    std::size_t retrain_every = 5;
    std::string out = "pipeline.jsonl";
    std::string config;
    std::uint64_t seed = 42;
    std::size_t n_tests = 60;
    std::size_t n_faults = 15;
    std::size_t n_trees = 100;
    PolicyConfig policy;
    std::string solver = "sa";
};

int run_simulate(const SimulateOpts& o) {
    SyntheticConfig sc;
    sc.n_tests = o.n_tests;
    sc.n_faults = o.n_faults;
    sc.n_code_elements = std::max<std::size_t>(40, o.n_tests * 2);
    sc.seed = derive_seed(o.seed, 1);
    const Suite initial = generate_synthetic_suite(sc, "pipeline");

    SimulationConfig cfg;
    cfg.n_builds = o.builds;
    cfg.retrain_every = o.retrain_every;
    cfg.seed = o.seed;
    cfg.policy = o.policy;
    cfg.policy.solver = solver_from_name(o.solver);
    cfg.forest.n_trees = o.n_trees;

    std::string existing;
    if (std::filesystem::exists(o.out)) existing = read_text(o.out);

    const PipelineLog log = run_simulation(initial, cfg);
    const std::string text = pipeline_log_to_jsonl(log);
    if (!existing.empty()) {
        if (text.compare(0, existing.size(), existing) != 0)
            throw SchemaError("existing log '" + o.out +
                              "' does not match this configuration; refusing to "
                              "append");
        if (existing.size() >= text.size()) {
            std::cout << o.out << " already has " << log.builds.size()
                      << " builds; nothing to do\n";
            return 0;
        }
        std::ofstream out(o.out, std::ios::binary | std::ios::app);
        out << text.substr(existing.size());
        std::cout << "resumed " << o.out << " to " << log.builds.size()
                  << " builds\n";
    } else {
        write_text(o.out, text);
        std::cout << "wrote " << log.builds.size() << " builds to " << o.out << "\n";
    }

    if (log.builds.size() >= 10) {
        const DriftReport drift = drift_check(log);
        std::cout << "drift: mean APFD " << detail::format_double(drift.mean_before)
                  << " -> " << detail::format_double(drift.mean_after) << " (delta "
                  << detail::format_double(drift.delta) << ", p "
                  << detail::format_double(drift.p_value) << ")\n";
    }
    return 0;
}

// ------------------------------------------------------------------ report
struct ReportOpts {
    std::string metrics_path;
    std::string log_path;
    std::string out = "report";
    std::string config;
};

int run_report(const ReportOpts& o) {
    const std::vector<MetricsRecord> metrics = load_metrics(o.metrics_path);
    PipelineLog log;
    const PipelineLog* log_ptr = nullptr;
    if (!o.log_path.empty()) {
        log = load_pipeline_log(o.log_path);
        log_ptr = &log;
    }
    const auto written = emit_report(metrics, log_ptr, o.out);
    std::cout << table1_text(compute_table1(metrics));
    for (const auto& path : written) std::cout << "wrote " << path << "\n";
    return 0;
}

void add_policy_flags(CLI::App* sub, PolicyConfig& pc, std::string& solver,
                      ConfigSetters& setters) {
    auto* lr = sub->add_option("--lambda-r", pc.qubo.lambda_r,
                               "redundancy penalty weight");
    auto* lt = sub->add_option("--lambda-t", pc.qubo.lambda_t,
                               "execution-time penalty weight");
    auto* bs = sub->add_option("--batch-size", pc.qubo.batch_size,
                               "selection sub-problem size cap");
    auto* sw = sub->add_option("--sweeps", pc.schedule.sweeps,
                               "annealing sweeps per restart");
    auto* rs = sub->add_option("--restarts", pc.schedule.restarts,
                               "annealing restarts");
    auto* so = sub->add_option("--solver", solver, "solver: sa|exhaustive|remote_stub")
                   ->check(CLI::IsMember({"sa", "exhaustive", "remote_stub"}));
    setters["lambda_r"] = unless_flag(lr, [&pc](const json& v) {
        pc.qubo.lambda_r = v.get<double>();
    });
    setters["lambda_t"] = unless_flag(lt, [&pc](const json& v) {
        pc.qubo.lambda_t = v.get<double>();
    });
    setters["batch_size"] = unless_flag(bs, [&pc](const json& v) {
        pc.qubo.batch_size = v.get<std::size_t>();
    });
    setters["sweeps"] = unless_flag(sw, [&pc](const json& v) {
        pc.schedule.sweeps = v.get<std::size_t>();
    });
    setters["restarts"] = unless_flag(rs, [&pc](const json& v) {
        pc.schedule.restarts = v.get<std::size_t>();
    });
    setters["solver"] = unless_flag(so, [&solver](const json& v) {
        solver = v.get<std::string>();
        solver_from_name(solver);  // validate
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"test-case prioritization via ML fault prediction and annealing "
                 "selection"};
    app.require_subcommand(1);

    std::uint64_t default_seed = 42;
    try {
        default_seed = env_seed_or(42);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    GenerateOpts gen;
    gen.synth.seed = default_seed;
    ConfigSetters gen_setters;
    auto* gen_cmd = app.add_subcommand("generate", "produce a synthetic test suite");
    {
        auto* seed = gen_cmd->add_option("--seed", gen.synth.seed, "generator seed");
        auto* tests = gen_cmd->add_option("--tests", gen.synth.n_tests, "tests");
        auto* faults = gen_cmd->add_option("--faults", gen.synth.n_faults, "faults");
        auto* elems =
            gen_cmd->add_option("--elements", gen.synth.n_code_elements,
                                "code elements");
        auto* red = gen_cmd->add_option("--redundancy", gen.synth.redundancy,
                                        "coverage redundancy in [0,1]");
        auto* noise = gen_cmd->add_option("--noise", gen.synth.noise, "feature noise");
        auto* out = gen_cmd->add_option("--out", gen.out, "output file");
        auto* fmt = gen_cmd->add_option("--format", gen.format, "csv|json")
                        ->check(CLI::IsMember({"csv", "json"}));
        gen_cmd->add_option("--config", gen.config, "JSON config file");
        gen_setters["seed"] = unless_flag(seed, [&](const json& v) {
            gen.synth.seed = v.get<std::uint64_t>();
        });
        gen_setters["n_tests"] = unless_flag(tests, [&](const json& v) {
            gen.synth.n_tests = v.get<std::size_t>();
        });
        gen_setters["n_faults"] = unless_flag(faults, [&](const json& v) {
            gen.synth.n_faults = v.get<std::size_t>();
        });
        gen_setters["n_code_elements"] = unless_flag(elems, [&](const json& v) {
            gen.synth.n_code_elements = v.get<std::size_t>();
        });
        gen_setters["redundancy"] = unless_flag(red, [&](const json& v) {
            gen.synth.redundancy = v.get<double>();
        });
        gen_setters["noise"] = unless_flag(noise, [&](const json& v) {
            gen.synth.noise = v.get<double>();
        });
        gen_setters["out"] = unless_flag(out, [&](const json& v) {
            gen.out = v.get<std::string>();
        });
        gen_setters["format"] = unless_flag(fmt, [&](const json& v) {
            gen.format = v.get<std::string>();
        });
    }

    TrainOpts train;
    train.seed = default_seed;
    ConfigSetters train_setters;
    auto* train_cmd =
        app.add_subcommand("train", "fit the fault-likelihood forest");
    {
        train_cmd->add_option("data", train.data_path, "dataset file (csv|json)")
            ->required();
        auto* seed = train_cmd->add_option("--seed", train.seed, "training seed");
        auto* out = train_cmd->add_option("--out", train.out, "forest output path");
        train_cmd->add_flag("--skip-grid", train.skip_grid,
                            "train with defaults, no grid search");
        train_cmd->add_flag("--skip-rfe", train.skip_rfe,
                            "skip recursive feature elimination");
        auto* trees = train_cmd->add_option("--trees", train.forest.n_trees,
                                            "trees when --skip-grid");
        auto* rfe_t =
            train_cmd->add_option("--rfe-target", train.rfe_target,
                                  "features to keep in elimination report");
        auto* folds = train_cmd->add_option("--folds", train.folds, "CV folds");
        train_cmd->add_option("--config", train.config, "JSON config file");
        train_setters["seed"] = unless_flag(seed, [&](const json& v) {
            train.seed = v.get<std::uint64_t>();
        });
        train_setters["out"] = unless_flag(out, [&](const json& v) {
            train.out = v.get<std::string>();
        });
        train_setters["n_trees"] = unless_flag(trees, [&](const json& v) {
            train.forest.n_trees = v.get<std::size_t>();
        });
        train_setters["rfe_target"] = unless_flag(rfe_t, [&](const json& v) {
            train.rfe_target = v.get<std::size_t>();
        });
        train_setters["folds"] = unless_flag(folds, [&](const json& v) {
            train.folds = v.get<std::size_t>();
        });
    }

    PrioritizeOpts pri;
    pri.seed = default_seed;
    ConfigSetters pri_setters;
    auto* pri_cmd = app.add_subcommand("prioritize", "order one suite's tests");
    {
        pri_cmd->add_option("data", pri.data_path, "dataset file (csv|json)")
            ->required();
        auto* seed = pri_cmd->add_option("--seed", pri.seed, "policy seed");
        auto* pol =
            pri_cmd
                ->add_option("--policy", pri.policy_name,
                             "random|greedy|ml_only|quantum_enhanced")
                ->check(CLI::IsMember(
                    {"random", "greedy", "ml_only", "quantum_enhanced"}));
        pri_cmd->add_option("--suite", pri.suite_id, "suite id (default: first)");
        pri_cmd->add_option("--model", pri.model_path, "trained forest JSON");
        auto* out = pri_cmd->add_option("--out", pri.out,
                                        "ordering output path (default: stdout)");
        pri_cmd->add_option("--config", pri.config, "JSON config file");
        add_policy_flags(pri_cmd, pri.policy, pri.solver, pri_setters);
        pri_setters["seed"] = unless_flag(seed, [&](const json& v) {
            pri.seed = v.get<std::uint64_t>();
        });
        pri_setters["policy"] = unless_flag(pol, [&](const json& v) {
            pri.policy_name = v.get<std::string>();
            policy_from_name(pri.policy_name);  // validate
        });
        pri_setters["out"] = unless_flag(out, [&](const json& v) {
            pri.out = v.get<std::string>();
        });
    }

    BenchOpts bench;
    bench.seed = default_seed;
    ConfigSetters bench_setters;
    auto* bench_cmd = app.add_subcommand(
        "bench", "all four policies across seeds and suite sizes");
    {
        auto* seed = bench_cmd->add_option("--seed", bench.seed, "base seed");
        auto* seeds = bench_cmd->add_option("--seeds", bench.n_seeds,
                                            "number of seeded runs");
        auto* sizes = bench_cmd->add_option(
            "--sizes", bench.sizes, "comma list: small|medium|large|<n_tests>");
        auto* out = bench_cmd->add_option("--out", bench.out, "metrics CSV path");
        auto* trees = bench_cmd->add_option("--trees", bench.n_trees, "forest size");
        auto* red = bench_cmd->add_option("--redundancy", bench.redundancy,
                                          "coverage redundancy in [0,1]");
        auto* skew = bench_cmd->add_option("--fault-skew", bench.fault_skew,
                                           "fault concentration exponent");
        auto* noise = bench_cmd->add_option("--noise", bench.noise,
                                            "feature noise level");
        bench_cmd->add_option("--config", bench.config, "JSON config file");
        add_policy_flags(bench_cmd, bench.policy, bench.solver, bench_setters);
        bench_setters["seed"] = unless_flag(seed, [&](const json& v) {
            bench.seed = v.get<std::uint64_t>();
        });
        bench_setters["seeds"] = unless_flag(seeds, [&](const json& v) {
            bench.n_seeds = v.get<std::size_t>();
        });
        bench_setters["sizes"] = unless_flag(sizes, [&](const json& v) {
            bench.sizes = v.get<std::string>();
        });
        bench_setters["out"] = unless_flag(out, [&](const json& v) {
            bench.out = v.get<std::string>();
        });
        bench_setters["n_trees"] = unless_flag(trees, [&](const json& v) {
            bench.n_trees = v.get<std::size_t>();
        });
        bench_setters["redundancy"] = unless_flag(red, [&](const json& v) {
            bench.redundancy = v.get<double>();
        });
        bench_setters["fault_skew"] = unless_flag(skew, [&](const json& v) {
            bench.fault_skew = v.get<double>();
        });
        bench_setters["noise"] = unless_flag(noise, [&](const json& v) {
            bench.noise = v.get<double>();
        });
    }

    SimulateOpts sim;
    sim.seed = default_seed;
    ConfigSetters sim_setters;
    auto* sim_cmd = app.add_subcommand("simulate", "run the CI/CD build stream");
    {
        auto* seed = sim_cmd->add_option("--seed", sim.seed, "simulation seed");
        auto* builds = sim_cmd->add_option("--builds", sim.builds, "builds to run");
        auto* re = sim_cmd->add_option("--retrain-every", sim.retrain_every,
                                       "retrain cadence in builds");
        auto* out = sim_cmd->add_option("--out", sim.out, "JSON-lines log path");
        auto* tests =
            sim_cmd->add_option("--tests", sim.n_tests, "initial suite size");
        auto* faults =
            sim_cmd->add_option("--faults", sim.n_faults, "initial fault count");
        auto* trees = sim_cmd->add_option("--trees", sim.n_trees, "forest size");
        sim_cmd->add_option("--config", sim.config, "JSON config file");
        add_policy_flags(sim_cmd, sim.policy, sim.solver, sim_setters);
        sim_setters["seed"] = unless_flag(seed, [&](const json& v) {
            sim.seed = v.get<std::uint64_t>();
        });
        sim_setters["builds"] = unless_flag(builds, [&](const json& v) {
            sim.builds = v.get<std::size_t>();
        });
        sim_setters["retrain_every"] = unless_flag(re, [&](const json& v) {
            sim.retrain_every = v.get<std::size_t>();
        });
        sim_setters["out"] = unless_flag(out, [&](const json& v) {
            sim.out = v.get<std::string>();
        });
        sim_setters["n_tests"] = unless_flag(tests, [&](const json& v) {
            sim.n_tests = v.get<std::size_t>();
        });
        sim_setters["n_faults"] = unless_flag(faults, [&](const json& v) {
            sim.n_faults = v.get<std::size_t>();
        });
        sim_setters["n_trees"] = unless_flag(trees, [&](const json& v) {
            sim.n_trees = v.get<std::size_t>();
        });
    }

    ReportOpts rep;
    ConfigSetters rep_setters;
    auto* rep_cmd =
        app.add_subcommand("report", "emit the summary table and figures");
    {
        rep_cmd->add_option("metrics", rep.metrics_path, "metrics CSV")->required();
        rep_cmd->add_option("--log", rep.log_path,
                            "pipeline JSON-lines log (enables the heatmap)");
        auto* out = rep_cmd->add_option("--out", rep.out, "output directory");
        rep_cmd->add_option("--config", rep.config, "JSON config file");
        rep_setters["out"] = unless_flag(out, [&](const json& v) {
            rep.out = v.get<std::string>();
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (gen_cmd->parsed()) {
            apply_config_file(gen.config, gen_setters);
            return run_generate(gen);
        }
        if (train_cmd->parsed()) {
            apply_config_file(train.config, train_setters);
            return run_train(train);
        }
        if (pri_cmd->parsed()) {
            apply_config_file(pri.config, pri_setters);
            return run_prioritize(pri);
        }
        if (bench_cmd->parsed()) {
            apply_config_file(bench.config, bench_setters);
            return run_bench(bench);
        }
        if (sim_cmd->parsed()) {
            apply_config_file(sim.config, sim_setters);
            return run_simulate(sim);
        }
        if (rep_cmd->parsed()) {
            apply_config_file(rep.config, rep_setters);
            return run_report(rep);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << app.help();
    return 1;
}

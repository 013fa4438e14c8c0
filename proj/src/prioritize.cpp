#include "qprior/prioritize.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "qprior/rng.hpp"

namespace qprior {

const char* greedy_key_name(GreedyKey k) {
    return k == GreedyKey::coverage_desc ? "coverage_desc" : "time_asc";
}

GreedyKey greedy_key_from_name(const std::string& name) {
    if (name == "coverage_desc") return GreedyKey::coverage_desc;
    if (name == "time_asc") return GreedyKey::time_asc;
    throw ConfigError("unknown greedy key '" + name + "'");
}

namespace {

void require_nonempty(const Suite& suite) {
    if (suite.records.empty())
        throw EmptySuite("suite '" + suite.id + "' has no tests");
}

void require_features(const Suite& suite, const RandomForest& forest) {
    const auto& have = suite.records.front().features.names();
    for (const auto& need : forest.feature_names()) {
        if (std::find(have.begin(), have.end(), need) == have.end())
            throw FeatureMismatch("suite '" + suite.id + "' lacks feature '" + need +
                                  "' required by the model");
    }
}

std::vector<std::string> ids_of(const std::vector<TestCaseRecord>& records,
                                const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(records[i].id);
    return out;
}

// Likelihood descending, then quicker, then id: the ordering used both inside
// selection rounds and by the ml_only policy, so the two agree on ties.
struct LikelihoodOrder {
    const std::vector<TestCaseRecord>& records;
    const std::vector<double>& p;
    bool operator()(std::size_t a, std::size_t b) const {
        if (p[a] != p[b]) return p[a] > p[b];
        if (records[a].exec_time != records[b].exec_time)
            return records[a].exec_time < records[b].exec_time;
        return records[a].id < records[b].id;
    }
};

}  // namespace

Ordering prioritize_random(const Suite& suite, std::uint64_t seed) {
    require_nonempty(suite);
    std::vector<std::size_t> idx(suite.records.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(idx);
    Ordering out;
    out.policy = Policy::random;
    out.suite_id = suite.id;
    out.sequence = ids_of(suite.records, idx);
    out.selected = out.sequence;
    out.seed = seed;
    return out;
}

Ordering prioritize_greedy(const Suite& suite, GreedyKey key) {
    require_nonempty(suite);
    const auto& records = suite.records;
    std::vector<std::size_t> idx(records.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& ra = records[a];
        const auto& rb = records[b];
        if (key == GreedyKey::coverage_desc) {
            if (ra.coverage.size() != rb.coverage.size())
                return ra.coverage.size() > rb.coverage.size();
            if (ra.exec_time != rb.exec_time) return ra.exec_time < rb.exec_time;
        } else {
            if (ra.exec_time != rb.exec_time) return ra.exec_time < rb.exec_time;
            if (ra.coverage.size() != rb.coverage.size())
                return ra.coverage.size() > rb.coverage.size();
        }
        return ra.id < rb.id;
    });
    Ordering out;
    out.policy = Policy::greedy;
    out.suite_id = suite.id;
    out.sequence = ids_of(records, idx);
    out.selected = out.sequence;
    return out;
}

Ordering prioritize_ml_only(const Suite& suite, const RandomForest& forest,
                            std::vector<double>* p_out) {
    require_nonempty(suite);
    require_features(suite, forest);
    const auto& records = suite.records;
    std::vector<double> p = predict_suite(forest, records);
    std::vector<std::size_t> idx(records.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), LikelihoodOrder{records, p});
    Ordering out;
    out.policy = Policy::ml_only;
    out.suite_id = suite.id;
    out.sequence = ids_of(records, idx);
    out.selected = out.sequence;
    if (p_out) *p_out = std::move(p);
    return out;
}

PrioritizeResult prioritize_quantum(const Suite& suite, const RandomForest& forest,
                                    const PolicyConfig& config, Clock* clock) {
    require_nonempty(suite);
    require_features(suite, forest);
    MonotonicClock wall;
    Clock& clk = clock ? *clock : static_cast<Clock&>(wall);

    const auto& records = suite.records;
    const std::size_t n = records.size();
    PrioritizeResult result;

    // Feature rows for the model, then one likelihood per test.
    double t0 = clk.now();
    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& names = forest.feature_names();
        rows[i].resize(names.size());
        for (std::size_t j = 0; j < names.size(); ++j)
            rows[i][j] = records[i].features.by_name(names[j]);
    }
    result.ledger.feature_extraction += clk.now() - t0;

    t0 = clk.now();
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = forest.predict_row(rows[i]);
    result.ledger.prediction += clk.now() - t0;
    result.fault_likelihood = p;

    t0 = clk.now();
    const OverlapMatrix overlap = overlap_matrix(records, config.qubo.overlap_kind);
    result.ledger.qubo_build += clk.now() - t0;

    // The exhaustive solver enumerates assignments, so cap its sub-problem
    // size regardless of the configured batch size.
    std::size_t batch = std::max<std::size_t>(1, config.qubo.batch_size);
    if (config.solver == SolverKind::exhaustive)
        batch = std::min<std::size_t>(batch, 20);

    std::vector<std::size_t> remaining(n);
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    std::vector<std::size_t> sequence;
    sequence.reserve(n);

    while (!remaining.empty()) {
        ++result.rounds;
        const std::size_t m = remaining.size();

        t0 = clk.now();
        std::vector<double> p_r(m), t_r(m);
        double lo = records[remaining[0]].exec_time, hi = lo;
        for (std::size_t k = 0; k < m; ++k) {
            p_r[k] = p[remaining[k]];
            const double e = records[remaining[k]].exec_time;
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        const double span = hi - lo;
        for (std::size_t k = 0; k < m; ++k) {
            const double e = records[remaining[k]].exec_time;
            t_r[k] = span == 0.0 ? 0.0 : (e - lo) / span;
        }
        OverlapMatrix o_r(m);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b)
                o_r.set(a, b, overlap.at(remaining[a], remaining[b]));
        QuboModel model = build_selection_qubo(p_r, t_r, o_r, config.qubo,
                                               ids_of(records, remaining));
        // Redundancy against tests already placed in earlier rounds.
        for (std::size_t k = 0; k < m; ++k) {
            double carried = 0.0;
            for (std::size_t s : sequence) carried += overlap.at(remaining[k], s);
            model.linear[k] += config.qubo.lambda_r * carried;
        }
        result.ledger.qubo_build += clk.now() - t0;

        AnnealSchedule schedule = config.schedule;
        schedule.seed = derive_seed(config.seed, result.rounds);

        std::vector<std::uint8_t> bits;
        if (m > batch) {
            t0 = clk.now();
            DecomposeReport report;
            const std::vector<QuboModel> parts = decompose(model, batch, &report);
            result.decompose.n_subproblems += report.n_subproblems;
            result.decompose.cut_edges += report.cut_edges;
            result.decompose.cut_weight += report.cut_weight;
            result.ledger.qubo_build += clk.now() - t0;

            std::vector<std::pair<QuboModel, std::vector<std::uint8_t>>> solved;
            solved.reserve(parts.size());
            for (const auto& part : parts) {
                const SolveResult r =
                    solve(part, config.solver, schedule, config.exec, &clk);
                result.ledger.solve += r.wall_time - r.serialize_time;
                result.ledger.serialize_transfer += r.serialize_time;
                solved.emplace_back(part, r.assignment);
            }
            t0 = clk.now();
            bits = merge_solutions(solved, model).bits;
            result.ledger.parse_order += clk.now() - t0;
        } else {
            const SolveResult r = solve(model, config.solver, schedule, config.exec, &clk);
            result.ledger.solve += r.wall_time - r.serialize_time;
            result.ledger.serialize_transfer += r.serialize_time;
            bits = r.assignment;
        }

        t0 = clk.now();
        std::vector<std::size_t> chosen;
        for (std::size_t k = 0; k < m; ++k)
            if (bits[k]) chosen.push_back(remaining[k]);
        if (chosen.empty()) {
            // Guarantee progress: take the single best remaining test.
            std::size_t best = remaining[0];
            for (std::size_t k = 1; k < m; ++k)
                if (LikelihoodOrder{records, p}(remaining[k], best)) best = remaining[k];
            chosen.push_back(best);
        } else {
            std::sort(chosen.begin(), chosen.end(), LikelihoodOrder{records, p});
        }
        if (result.rounds == 1)
            result.ordering.selected = ids_of(records, chosen);
        sequence.insert(sequence.end(), chosen.begin(), chosen.end());
        std::vector<std::size_t> next;
        next.reserve(m - chosen.size());
        for (std::size_t i : remaining)
            if (std::find(chosen.begin(), chosen.end(), i) == chosen.end())
                next.push_back(i);
        remaining = std::move(next);
        result.ledger.parse_order += clk.now() - t0;
    }

    result.ordering.policy = Policy::quantum_enhanced;
    result.ordering.suite_id = suite.id;
    result.ordering.sequence = ids_of(records, sequence);
    result.ordering.seed = config.seed;
    return result;
}

PrioritizeResult prioritize(const Suite& suite, const RandomForest* forest,
                            const PolicyConfig& config, Clock* clock) {
    switch (config.policy) {
        case Policy::random: {
            PrioritizeResult r;
            r.ordering = prioritize_random(suite, config.seed);
            return r;
        }
        case Policy::greedy: {
            PrioritizeResult r;
            r.ordering = prioritize_greedy(suite, config.greedy_key);
            return r;
        }
        case Policy::ml_only: {
            if (!forest)
                throw std::invalid_argument("ml_only policy needs a trained model");
            MonotonicClock wall;
            Clock& clk = clock ? *clock : static_cast<Clock&>(wall);
            PrioritizeResult r;
            const double t0 = clk.now();
            r.ordering = prioritize_ml_only(suite, *forest, &r.fault_likelihood);
            r.ledger.prediction += clk.now() - t0;
            return r;
        }
        case Policy::quantum_enhanced:
            if (!forest)
                throw std::invalid_argument(
                    "quantum_enhanced policy needs a trained model");
            return prioritize_quantum(suite, *forest, config, clock);
    }
    throw std::invalid_argument("unknown policy");
}

std::string ordering_to_json(const Ordering& ordering) {
    nlohmann::json doc;
    doc["policy"] = policy_name(ordering.policy);
    doc["suite_id"] = ordering.suite_id;
    doc["sequence"] = ordering.sequence;
    doc["selected"] = ordering.selected;
    doc["seed"] = ordering.seed;
    return doc.dump(2) + "\n";
}

Ordering ordering_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid ordering json: ") + e.what());
    }
    Ordering out;
    out.policy = policy_from_name(doc.at("policy").get<std::string>());
    out.suite_id = doc.at("suite_id").get<std::string>();
    out.sequence = doc.at("sequence").get<std::vector<std::string>>();
    out.selected = doc.at("selected").get<std::vector<std::string>>();
    out.seed = doc.at("seed").get<std::uint64_t>();
    return out;
}

}  // namespace qprior

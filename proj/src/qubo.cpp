#include "qprior/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace qprior {

void QuboModel::add_quadratic(std::size_t i, std::size_t j, double v) {
    if (i == j) throw std::invalid_argument("diagonal entries belong in linear");
    if (i > j) std::swap(i, j);
    auto key = std::make_pair(i, j);
    auto it = quadratic.find(key);
    double next = (it == quadratic.end() ? 0.0 : it->second) + v;
    if (std::abs(next) < kQuadraticPruneEps) {
        if (it != quadratic.end()) quadratic.erase(it);
    } else {
        quadratic[key] = next;
    }
}

namespace {

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else { ++inter; ++ia; ++ib; }
    }
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

std::size_t intersection_size(const std::set<std::string>& a,
                              const std::set<std::string>& b) {
    std::size_t inter = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else { ++inter; ++ia; ++ib; }
    }
    return inter;
}

}  // namespace

OverlapMatrix overlap_matrix(const std::vector<TestCaseRecord>& records,
                             QuboConfig::OverlapKind kind) {
    const std::size_t n = records.size();
    OverlapMatrix out(n);

    std::size_t max_cov = 0;
    for (const auto& r : records) max_cov = std::max(max_cov, r.coverage.size());

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double o = 0.0;
            if (kind == QuboConfig::OverlapKind::jaccard) {
                o = jaccard(records[i].coverage, records[j].coverage);
            } else if (max_cov > 0) {
                o = static_cast<double>(
                        intersection_size(records[i].coverage, records[j].coverage)) /
                    static_cast<double>(max_cov);
            }
            out.set(i, j, o);
        }
    }
    return out;
}

QuboModel build_selection_qubo(const std::vector<double>& p,
                               const std::vector<double>& t,
                               const OverlapMatrix& overlap,
                               const QuboConfig& config,
                               const std::vector<std::string>& var_ids) {
    const std::size_t n = p.size();
    if (t.size() != n || overlap.size() != n)
        throw std::invalid_argument("p, t and overlap sizes disagree");
    if (!var_ids.empty() && var_ids.size() != n)
        throw std::invalid_argument("var_ids size disagrees with p");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p[i] >= 0.0 && p[i] <= 1.0))
            throw std::invalid_argument("fault likelihood outside [0,1]");
        if (!(t[i] >= 0.0 && t[i] <= 1.0))
            throw std::invalid_argument("normalized exec time outside [0,1]");
    }

    QuboModel model;
    model.n = n;
    model.linear.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        model.linear[i] = -p[i] + config.lambda_t * t[i];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = config.lambda_r * overlap.at(i, j);
            if (std::abs(v) >= kQuadraticPruneEps) model.quadratic[{i, j}] = v;
        }
    model.offset = 0.0;
    if (!var_ids.empty()) {
        model.var_ids = var_ids;
    } else {
        model.var_ids.resize(n);
        for (std::size_t i = 0; i < n; ++i) model.var_ids[i] = "x" + std::to_string(i);
    }
    return model;
}

namespace {

// Adjacency over nonzero quadratic entries. Index-local to one model.
std::vector<std::vector<std::size_t>> coupling_graph(const QuboModel& model) {
    std::vector<std::vector<std::size_t>> adj(model.n);
    for (const auto& [key, v] : model.quadratic) {
        adj[key.first].push_back(key.second);
        adj[key.second].push_back(key.first);
    }
    return adj;
}

std::vector<std::vector<std::size_t>> connected_components(
    const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t n = adj.size();
    std::vector<bool> seen(n, false);
    std::vector<std::vector<std::size_t>> components;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::size_t> comp, stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (std::size_t v : adj[u])
                if (!seen[v]) { seen[v] = true; stack.push_back(v); }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

// Splits a vertex set in two: vertices are peeled off into the first half in
// ascending order of their degree within the remaining set (ties by index).
void bisect_vertices(const std::vector<std::size_t>& vertices,
                     const std::vector<std::vector<std::size_t>>& adj,
                     std::vector<std::size_t>& first,
                     std::vector<std::size_t>& second) {
    std::set<std::size_t> remaining(vertices.begin(), vertices.end());
    const std::size_t target = vertices.size() / 2;
    first.clear();
    second.clear();
    while (first.size() < target) {
        std::size_t best = 0;
        std::size_t best_deg = SIZE_MAX;
        for (std::size_t v : remaining) {
            std::size_t deg = 0;
            for (std::size_t w : adj[v]) deg += remaining.count(w);
            if (deg < best_deg) { best_deg = deg; best = v; }
        }
        first.push_back(best);
        remaining.erase(best);
    }
    second.assign(remaining.begin(), remaining.end());
    std::sort(first.begin(), first.end());
}

QuboModel extract_subproblem(const QuboModel& model,
                             const std::vector<std::size_t>& vertices,
                             bool carry_offset, DecomposeReport* report) {
    std::unordered_map<std::size_t, std::size_t> local;
    for (std::size_t k = 0; k < vertices.size(); ++k) local[vertices[k]] = k;

    QuboModel sub;
    sub.n = vertices.size();
    sub.linear.resize(sub.n);
    sub.var_ids.resize(sub.n);
    sub.offset = carry_offset ? model.offset : 0.0;
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        sub.linear[k] = model.linear[vertices[k]];
        sub.var_ids[k] = model.var_ids[vertices[k]];
    }
    for (const auto& [key, v] : model.quadratic) {
        auto i = local.find(key.first);
        auto j = local.find(key.second);
        if (i != local.end() && j != local.end()) {
            sub.quadratic[{std::min(i->second, j->second),
                           std::max(i->second, j->second)}] = v;
        } else if (report && i != local.end() && j == local.end()) {
            // Count each cut edge once, from the sub holding its lower endpoint.
            report->cut_edges += 1;
            report->cut_weight += std::abs(v);
        }
    }
    return sub;
}

}  // namespace

std::vector<QuboModel> decompose(const QuboModel& model, std::size_t max_vars,
                                 DecomposeReport* report) {
    if (max_vars < 1) throw std::invalid_argument("max_vars must be >= 1");
    if (model.linear.size() != model.n || model.var_ids.size() != model.n)
        throw std::invalid_argument("malformed model");

    auto adj = coupling_graph(model);
    std::vector<std::vector<std::size_t>> pending = connected_components(adj);
    std::vector<std::vector<std::size_t>> final_sets;

    while (!pending.empty()) {
        std::vector<std::size_t> comp = std::move(pending.back());
        pending.pop_back();
        if (comp.size() <= max_vars) {
            final_sets.push_back(std::move(comp));
            continue;
        }
        std::vector<std::size_t> a, b;
        bisect_vertices(comp, adj, a, b);
        pending.push_back(std::move(a));
        pending.push_back(std::move(b));
    }

    // Deterministic order: by smallest contained variable index.
    std::sort(final_sets.begin(), final_sets.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    DecomposeReport local_report;
    DecomposeReport* rep = report ? report : &local_report;
    rep->cut_edges = 0;
    rep->cut_weight = 0.0;

    std::vector<QuboModel> subs;
    subs.reserve(final_sets.size());
    for (std::size_t k = 0; k < final_sets.size(); ++k)
        subs.push_back(extract_subproblem(model, final_sets[k], k == 0, rep));
    rep->n_subproblems = subs.size();
    return subs;
}

MergedSolution merge_solutions(
    const std::vector<std::pair<QuboModel, std::vector<std::uint8_t>>>& subs,
    const QuboModel& original) {
    std::unordered_map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < original.n; ++i) index_of[original.var_ids[i]] = i;
    if (index_of.size() != original.n)
        throw std::invalid_argument("original model has duplicate variable ids");

    std::vector<std::uint8_t> bits(original.n, 0);
    std::vector<bool> assigned(original.n, false);
    for (const auto& [sub, a] : subs) {
        if (a.size() != sub.n)
            throw std::invalid_argument("sub-assignment length mismatch");
        for (std::size_t k = 0; k < sub.n; ++k) {
            auto it = index_of.find(sub.var_ids[k]);
            if (it == index_of.end())
                throw std::invalid_argument("sub-problem variable not in original: " +
                                            sub.var_ids[k]);
            if (assigned[it->second])
                throw std::invalid_argument("variable assigned twice: " + sub.var_ids[k]);
            assigned[it->second] = true;
            bits[it->second] = a[k];
        }
    }
    for (std::size_t i = 0; i < original.n; ++i)
        if (!assigned[i])
            throw std::invalid_argument("variable missing from sub-problems: " +
                                        original.var_ids[i]);

    // One pass of single-flip descent in index order on the original model.
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(original.n);
    for (const auto& [key, v] : original.quadratic) {
        adj[key.first].push_back({key.second, v});
        adj[key.second].push_back({key.first, v});
    }
    for (std::size_t i = 0; i < original.n; ++i) {
        double field = original.linear[i];
        for (const auto& [j, w] : adj[i]) field += bits[j] ? w : 0.0;
        double delta = bits[i] ? -field : field;
        if (delta < 0.0) bits[i] ^= 1;
    }

    MergedSolution out;
    out.bits = std::move(bits);
    out.energy = original.offset;
    for (std::size_t i = 0; i < original.n; ++i)
        if (out.bits[i]) out.energy += original.linear[i];
    for (const auto& [key, v] : original.quadratic)
        if (out.bits[key.first] && out.bits[key.second]) out.energy += v;
    return out;
}

std::string qubo_to_json(const QuboModel& model) {
    nlohmann::json j;
    j["n"] = model.n;
    j["var_ids"] = model.var_ids;
    j["linear"] = model.linear;
    auto quad = nlohmann::json::array();
    for (const auto& [key, v] : model.quadratic)
        quad.push_back({key.first, key.second, v});
    j["quadratic"] = quad;
    j["offset"] = model.offset;
    return j.dump();
}

QuboModel qubo_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    QuboModel model;
    model.n = j.at("n").get<std::size_t>();
    model.var_ids = j.at("var_ids").get<std::vector<std::string>>();
    model.linear = j.at("linear").get<std::vector<double>>();
    model.offset = j.at("offset").get<double>();
    if (model.linear.size() != model.n || model.var_ids.size() != model.n)
        throw std::invalid_argument("qubo json: inconsistent sizes");
    for (const auto& entry : j.at("quadratic")) {
        std::size_t i = entry.at(0).get<std::size_t>();
        std::size_t k = entry.at(1).get<std::size_t>();
        double v = entry.at(2).get<double>();
        if (i >= k || k >= model.n)
            throw std::invalid_argument("qubo json: bad quadratic key");
        model.quadratic[{i, k}] = v;
    }
    return model;
}

}  // namespace qprior

#include "qprior/anneal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qprior/rng.hpp"

namespace qprior {

namespace {

double read_clock(Clock* clock) {
    if (clock) return clock->now();
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

SolverKind solver_from_name(const std::string& name) {
    if (name == "exhaustive") return SolverKind::exhaustive;
    if (name == "sa") return SolverKind::sa;
    if (name == "remote_stub") return SolverKind::remote_stub;
    throw std::invalid_argument("unknown solver: " + name);
}

const char* solver_name(SolverKind kind) {
    switch (kind) {
        case SolverKind::exhaustive: return "exhaustive";
        case SolverKind::sa: return "sa";
        case SolverKind::remote_stub: return "remote_stub";
    }
    return "unknown";
}

double energy(const QuboModel& model, const Assignment& a) {
    if (a.size() != model.n)
        throw std::invalid_argument("assignment length does not match model");
    double e = model.offset;
    for (std::size_t i = 0; i < model.n; ++i)
        if (a[i]) e += model.linear[i];
    for (const auto& [key, v] : model.quadratic)
        if (a[key.first] && a[key.second]) e += v;
    return e;
}

QuboAdjacency::QuboAdjacency(const QuboModel& model)
    : linear_(model.linear), neighbors_(model.n) {
    for (const auto& [key, v] : model.quadratic) {
        neighbors_[key.first].push_back({key.second, v});
        neighbors_[key.second].push_back({key.first, v});
    }
}

double QuboAdjacency::flip_delta(const Assignment& a, std::size_t i) const {
    double field = linear_[i];
    for (const auto& [j, w] : neighbors_[i])
        if (a[j]) field += w;
    return a[i] ? -field : field;
}

SolveResult solve_exhaustive(const QuboModel& model, Clock* clock) {
    if (model.n > 20)
        throw std::invalid_argument("exhaustive solve capped at n <= 20, got n=" +
                                    std::to_string(model.n));
    const double t0 = read_clock(clock);
    const std::size_t n = model.n;

    struct Triplet { std::uint64_t mask; double v; };
    std::vector<Triplet> quads;
    quads.reserve(model.quadratic.size());
    for (const auto& [key, v] : model.quadratic)
        quads.push_back({(1ULL << key.first) | (1ULL << key.second), v});

    std::uint64_t best_mask = 0;
    double best_energy = model.offset;

    const std::uint64_t total = n == 0 ? 1 : (1ULL << n);
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        double e = model.offset;
        std::uint64_t m = mask;
        while (m) {
            const int i = __builtin_ctzll(m);
            e += model.linear[static_cast<std::size_t>(i)];
            m &= m - 1;
        }
        for (const auto& q : quads)
            if ((mask & q.mask) == q.mask) e += q.v;
        // Bit 0 is the most significant position of the lexicographic order,
        // so smaller bit-reversed masks are lexicographically smaller vectors.
        if (e < best_energy) {
            best_energy = e;
            best_mask = mask;
        } else if (e == best_energy) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t bit = 1ULL << i;
                const bool cand = mask & bit, incumbent = best_mask & bit;
                if (cand != incumbent) {
                    if (!cand) best_mask = mask;
                    break;
                }
            }
        }
    }

    SolveResult result;
    result.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        result.assignment[i] = static_cast<std::uint8_t>((best_mask >> i) & 1ULL);
    result.energy = energy(model, result.assignment);
    result.solver = "exhaustive";
    result.wall_time = read_clock(clock) - t0;
    result.n_restarts_used = 0;
    return result;
}

namespace {

struct RestartOutcome {
    Assignment best;
    double best_energy = 0.0;
};

RestartOutcome run_restart(const QuboModel& model, const QuboAdjacency& adj,
                           const AnnealSchedule& schedule, std::size_t restart) {
    const std::size_t n = model.n;
    Rng rng(schedule.seed + restart);

    Assignment a(n);
    for (std::size_t i = 0; i < n; ++i)
        a[i] = static_cast<std::uint8_t>(rng.uniform_index(2));

    double e = energy(model, a);
    RestartOutcome out{a, e};

    const double ratio = schedule.t_end / schedule.t_start;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t sweep = 0; sweep < schedule.sweeps; ++sweep) {
        const double frac =
            schedule.sweeps > 1
                ? static_cast<double>(sweep) / static_cast<double>(schedule.sweeps - 1)
                : 1.0;
        const double temp = schedule.t_start * std::pow(ratio, frac);
        rng.shuffle(order);
        for (std::size_t i : order) {
            const double delta = adj.flip_delta(a, i);
            if (delta <= 0.0 || rng.uniform01() < std::exp(-delta / temp)) {
                a[i] ^= 1;
                e += delta;
                if (e < out.best_energy) {
                    out.best_energy = e;
                    out.best = a;
                }
            }
        }
    }
    return out;
}

}  // namespace

SolveResult solve_sa(const QuboModel& model, const AnnealSchedule& schedule,
                     Exec exec, Clock* clock) {
    if (model.n < 1) throw std::invalid_argument("model must have n >= 1");
    if (!(schedule.t_end > 0.0 && schedule.t_end < schedule.t_start))
        throw std::invalid_argument("schedule requires 0 < t_end < t_start");

    const double t0 = read_clock(clock);
    const QuboAdjacency adj(model);
    const std::size_t restarts = std::max<std::size_t>(1, schedule.restarts);
    std::vector<RestartOutcome> outcomes(restarts);

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long r = 0; r < static_cast<long long>(restarts); ++r)
            outcomes[static_cast<std::size_t>(r)] =
                run_restart(model, adj, schedule, static_cast<std::size_t>(r));
    } else {
        for (std::size_t r = 0; r < restarts; ++r)
            outcomes[r] = run_restart(model, adj, schedule, r);
    }

    // Reduce in index order: parallel and serial pick the same winner.
    std::size_t winner = 0;
    for (std::size_t r = 1; r < restarts; ++r)
        if (outcomes[r].best_energy < outcomes[winner].best_energy) winner = r;

    SolveResult result;
    result.assignment = std::move(outcomes[winner].best);
    result.energy = energy(model, result.assignment);
    result.solver = "sa";
    result.wall_time = read_clock(clock) - t0;
    result.n_restarts_used = restarts;
    return result;
}

SolveResult solve(const QuboModel& model, SolverKind kind,
                  const AnnealSchedule& schedule, Exec exec, Clock* clock) {
    switch (kind) {
        case SolverKind::exhaustive:
            return solve_exhaustive(model, clock);
        case SolverKind::sa:
            return solve_sa(model, schedule, exec, clock);
        case SolverKind::remote_stub: {
            const double s0 = read_clock(clock);
            std::string payload = qubo_to_json(model);
            QuboModel decoded = qubo_from_json(payload);
            const double ser = read_clock(clock) - s0;
            SolveResult result = solve_sa(decoded, schedule, exec, clock);
            result.solver = "remote_stub";
            result.serialize_time = ser;
            result.wall_time += ser;
            return result;
        }
    }
    throw std::invalid_argument("unknown solver kind");
}

}  // namespace qprior

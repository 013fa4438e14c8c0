#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qprior/clock.hpp"
#include "qprior/qubo.hpp"

namespace qprior {

using Assignment = std::vector<std::uint8_t>;

enum class Exec { serial, parallel };

struct SolveResult {
    Assignment assignment;
    double energy = 0.0;  // always re-evaluated under the model, never trusted
    std::string solver;
    double wall_time = 0.0;       // seconds
    double serialize_time = 0.0;  // seconds, nonzero only for remote_stub
    std::size_t n_restarts_used = 0;
};

struct AnnealSchedule {
    double t_start = 2.0;
    double t_end = 0.01;
    std::size_t sweeps = 2000;
    std::size_t restarts = 8;
    std::uint64_t seed = 0;
};

enum class SolverKind { exhaustive, sa, remote_stub };

SolverKind solver_from_name(const std::string& name);
const char* solver_name(SolverKind kind);

double energy(const QuboModel& model, const Assignment& a);

// Per-variable coupling lists; shared by the SA inner loop and the delta
// self-checks in tests.
class QuboAdjacency {
public:
    explicit QuboAdjacency(const QuboModel& model);

    // Energy change of flipping bit i in assignment a.
    double flip_delta(const Assignment& a, std::size_t i) const;

    const std::vector<double>& linear() const { return linear_; }

private:
    std::vector<double> linear_;
    std::vector<std::vector<std::pair<std::size_t, double>>> neighbors_;
};

// Global minimum by enumerating all 2^n assignments, n <= 20. Energy ties go
// to the lexicographically smallest bit vector. `clock` (optional) replaces
// the wall clock for the reported timings.
SolveResult solve_exhaustive(const QuboModel& model, Clock* clock = nullptr);

// Metropolis single-flip annealing on a geometric temperature ladder. Each of
// `restarts` runs starts from a random assignment with its own rng seeded
// seed+restart_index; the best assignment across restarts wins, ties going to
// the lowest restart index so parallel and serial runs agree bit for bit.
SolveResult solve_sa(const QuboModel& model, const AnnealSchedule& schedule,
                     Exec exec = Exec::parallel, Clock* clock = nullptr);

// Uniform dispatch. remote_stub serializes the model to the JSON wire format
// (standing in for a network round trip), then solves with SA locally.
SolveResult solve(const QuboModel& model, SolverKind kind,
                  const AnnealSchedule& schedule, Exec exec = Exec::parallel,
                  Clock* clock = nullptr);

}  // namespace qprior

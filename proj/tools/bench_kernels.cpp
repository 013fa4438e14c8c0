// Compares the serial reference kernels against the OpenMP ones and checks
// that the results are bit-identical.
#include <chrono>
#include <iostream>

#include "qprior/anneal.hpp"
#include "qprior/ingest.hpp"
#include "qprior/learner.hpp"
#include "qprior/rng.hpp"

using namespace qprior;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

QuboModel random_qubo(std::size_t n, double density, std::uint64_t seed) {
    Rng rng(seed);
    QuboModel m;
    m.n = n;
    m.linear.resize(n);
    for (auto& v : m.linear) v = rng.uniform01() * 2.0 - 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.bernoulli(density))
                m.add_quadratic(i, j, rng.uniform01() * 2.0 - 1.0);
    return m;
}

}  // namespace

int main() {
    {
        const QuboModel model = random_qubo(220, 0.25, 7);
        AnnealSchedule sched;
        sched.sweeps = 1500;
        sched.restarts = 8;
        sched.seed = 11;

        auto t0 = std::chrono::steady_clock::now();
        const SolveResult serial = solve_sa(model, sched, Exec::serial);
        const double t_serial = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const SolveResult parallel = solve_sa(model, sched, Exec::parallel);
        const double t_parallel = seconds_since(t0);

        const bool same = serial.assignment == parallel.assignment &&
                          serial.energy == parallel.energy;
        std::cout << "sa_restarts n=220 sweeps=1500 restarts=8: serial "
                  << t_serial << " s, parallel " << t_parallel << " s, speedup "
                  << t_serial / t_parallel << "x, identical="
                  << (same ? "yes" : "NO") << "\n";
        if (!same) return 1;
    }

    {
        SyntheticConfig sc;
        sc.n_tests = 300;
        sc.n_faults = 60;
        sc.n_code_elements = 600;
        sc.seed = 13;
        const Dataset data = dataset_from_suite(generate_synthetic_suite(sc, "bench"));
        ForestConfig fc;
        fc.n_trees = 120;
        fc.seed = 17;

        auto t0 = std::chrono::steady_clock::now();
        const RandomForest serial = train_forest(data, fc, {}, Exec::serial);
        const double t_serial = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const RandomForest parallel = train_forest(data, fc, {}, Exec::parallel);
        const double t_parallel = seconds_since(t0);

        const bool same = forest_to_json(serial) == forest_to_json(parallel);
        std::cout << "forest_train n=300 trees=120: serial " << t_serial
                  << " s, parallel " << t_parallel << " s, speedup "
                  << t_serial / t_parallel << "x, identical="
                  << (same ? "yes" : "NO") << "\n";
        if (!same) return 1;
    }
    return 0;
}

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qprior/model.hpp"

namespace qprior {

// Quadratic entries with absolute value below this are not stored.
inline constexpr double kQuadraticPruneEps = 1e-12;

// Minimization objective over x in {0,1}^n:
//   energy(x) = offset + sum_i linear[i]*x_i + sum_{i<j} quadratic[{i,j}]*x_i*x_j
struct QuboModel {
    std::size_t n = 0;
    std::vector<double> linear;
    std::map<std::pair<std::size_t, std::size_t>, double> quadratic;  // keys i<j
    double offset = 0.0;
    std::vector<std::string> var_ids;  // test id per variable index

    // Inserts (or accumulates into) an upper-triangular entry; prunes tiny values.
    void add_quadratic(std::size_t i, std::size_t j, double v);
};

struct QuboConfig {
    // Weights retuned once against the 30-seed synthetic benchmark (initial
    // values 0.5/0.3 underperformed the ml_only baseline there).
    double lambda_r = 0.3;      // redundancy weight
    double lambda_t = 0.05;     // execution-time weight
    std::size_t batch_size = 25;  // sub-problem size cap per selection round
    enum class OverlapKind { jaccard, raw_intersection_normalized };
    OverlapKind overlap_kind = OverlapKind::jaccard;
};

// Symmetric pairwise coverage overlap, zero diagonal, values in [0,1].
class OverlapMatrix {
public:
    OverlapMatrix() = default;
    explicit OverlapMatrix(std::size_t n) : n_(n), cells_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        cells_[i * n_ + j] = v;
        cells_[j * n_ + i] = v;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> cells_;
};

OverlapMatrix overlap_matrix(const std::vector<TestCaseRecord>& records,
                             QuboConfig::OverlapKind kind);

// H(x) = -sum p_i x_i + lambda_t sum t_i x_i + lambda_r sum_{i<j} o_ij x_i x_j.
// p_i and t_i must lie in [0,1]; lengths must agree with the overlap matrix.
QuboModel build_selection_qubo(const std::vector<double>& p,
                               const std::vector<double>& t,
                               const OverlapMatrix& overlap,
                               const QuboConfig& config,
                               const std::vector<std::string>& var_ids = {});

struct DecomposeReport {
    std::size_t n_subproblems = 0;
    std::size_t cut_edges = 0;
    double cut_weight = 0.0;  // total absolute weight of dropped edges
};

// Splits a model along its quadratic-coupling graph. Connected components no
// larger than max_vars become sub-problems directly; larger ones are halved by
// repeated min-degree vertex-set bisection, dropping the cut edges. The first
// sub-problem carries the original offset. Sub-problem variables partition the
// original index set.
std::vector<QuboModel> decompose(const QuboModel& model, std::size_t max_vars,
                                 DecomposeReport* report = nullptr);

struct MergedSolution {
    std::vector<std::uint8_t> bits;
    double energy = 0.0;
};

// Concatenates sub-problem assignments by original variable id, then runs one
// pass of single-flip descent on the original model to repair cut-edge losses.
// Throws std::invalid_argument if sub-problem variables do not partition the
// original's.
MergedSolution merge_solutions(
    const std::vector<std::pair<QuboModel, std::vector<std::uint8_t>>>& subs,
    const QuboModel& original);

// JSON wire format: {n, var_ids, linear, quadratic:[[i,j,v],...], offset}.
std::string qubo_to_json(const QuboModel& model);
QuboModel qubo_from_json(const std::string& text);

}  // namespace qprior

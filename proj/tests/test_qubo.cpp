#include <doctest.h>

#include <set>
#include <vector>

#include "helpers.hpp"
#include "qprior/anneal.hpp"
#include "qprior/qubo.hpp"

using namespace qprior;
using testutil::make_names;
using testutil::make_record;

TEST_CASE("add_quadratic normalizes, accumulates, and prunes") {
    QuboModel m;
    m.n = 3;
    m.linear.assign(3, 0.0);
    m.add_quadratic(2, 0, 1.5);  // stored as (0,2)
    m.add_quadratic(0, 2, 0.5);  // accumulates
    m.add_quadratic(0, 1, 1e-15);  // below the prune threshold
    REQUIRE(m.quadratic.size() == 1);
    CHECK(m.quadratic.at({0, 2}) == doctest::Approx(2.0));
    CHECK_THROWS(m.add_quadratic(1, 1, 1.0));  // no diagonal terms
}

TEST_CASE("energy matches hand enumeration on a 3-variable model") {
    QuboModel m;
    m.n = 3;
    m.offset = 0.25;
    m.linear = {-1.0, 2.0, -0.5};
    m.add_quadratic(0, 1, 3.0);
    m.add_quadratic(1, 2, -1.0);
    auto e = [&](int a, int b, int c) {
        return 0.25 + -1.0 * a + 2.0 * b + -0.5 * c + 3.0 * a * b + -1.0 * b * c;
    };
    for (int mask = 0; mask < 8; ++mask) {
        const int a = mask & 1, b = (mask >> 1) & 1, c = (mask >> 2) & 1;
        Assignment x{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                     static_cast<std::uint8_t>(c)};
        CHECK(energy(m, x) == doctest::Approx(e(a, b, c)));
    }
}

TEST_CASE("selection qubo assembles -p + lambda_t*t linear and lambda_r*o pairs") {
    OverlapMatrix ov(3);
    ov.set(0, 1, 0.5);
    ov.set(1, 2, 0.25);
    QuboConfig cfg;
    cfg.lambda_r = 0.4;
    cfg.lambda_t = 0.1;
    QuboModel m = build_selection_qubo({0.9, 0.2, 0.6}, {0.3, 1.0, 0.0}, ov, cfg,
                                       {"a", "b", "c"});
    REQUIRE(m.n == 3);
    CHECK(m.linear[0] == doctest::Approx(-0.9 + 0.1 * 0.3));
    CHECK(m.linear[1] == doctest::Approx(-0.2 + 0.1 * 1.0));
    CHECK(m.linear[2] == doctest::Approx(-0.6));
    CHECK(m.quadratic.at({0, 1}) == doctest::Approx(0.4 * 0.5));
    CHECK(m.quadratic.at({1, 2}) == doctest::Approx(0.4 * 0.25));
    CHECK(m.quadratic.count({0, 2}) == 0);  // zero overlap is not stored
    CHECK(m.var_ids == std::vector<std::string>{"a", "b", "c"});

    CHECK_THROWS(build_selection_qubo({1.5}, {0.0}, OverlapMatrix(1), cfg));
    CHECK_THROWS(build_selection_qubo({0.5}, {-0.1}, OverlapMatrix(1), cfg));
    CHECK_THROWS(build_selection_qubo({0.5, 0.5}, {0.0}, OverlapMatrix(2), cfg));
}

TEST_CASE("full redundancy between two equal-likelihood tests keeps only one") {
    // p = (0.9, 0.9), overlap 1, lambda_r = 1, lambda_t = 0. The four
    // assignments score 0, -0.9, -0.9, -0.8, so a single selected test wins
    // and the energy tie goes to the lexicographically smaller bit vector.
    OverlapMatrix ov(2);
    ov.set(0, 1, 1.0);
    QuboConfig cfg;
    cfg.lambda_r = 1.0;
    cfg.lambda_t = 0.0;
    QuboModel m = build_selection_qubo({0.9, 0.9}, {0.0, 0.0}, ov, cfg);
    CHECK(energy(m, {0, 0}) == doctest::Approx(0.0));
    CHECK(energy(m, {1, 0}) == doctest::Approx(-0.9));
    CHECK(energy(m, {0, 1}) == doctest::Approx(-0.9));
    CHECK(energy(m, {1, 1}) == doctest::Approx(-0.8));
    SolveResult best = solve_exhaustive(m);
    CHECK(best.energy == doctest::Approx(-0.9));
    CHECK(best.assignment == Assignment{0, 1});
}

TEST_CASE("overlap_matrix computes jaccard and normalized intersections") {
    auto names = make_names({"x"});
    std::vector<TestCaseRecord> recs{
        make_record("t1", names, {0.0}, {"e1", "e2"}),
        make_record("t2", names, {0.0}, {"e2", "e3"}),
        make_record("t3", names, {0.0}, {"e4", "e5", "e6"}),
    };
    OverlapMatrix jac = overlap_matrix(recs, QuboConfig::OverlapKind::jaccard);
    CHECK(jac.at(0, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(jac.at(1, 0) == doctest::Approx(1.0 / 3.0));  // symmetric
    CHECK(jac.at(0, 2) == doctest::Approx(0.0));
    CHECK(jac.at(1, 1) == doctest::Approx(0.0));  // zero diagonal

    OverlapMatrix raw = overlap_matrix(
        recs, QuboConfig::OverlapKind::raw_intersection_normalized);
    CHECK(raw.at(0, 1) == doctest::Approx(1.0 / 3.0));  // / max coverage size
    CHECK(raw.at(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("decompose splits connected components and reports cuts") {
    // Two components: {0,1} coupled, {2} isolated.
    QuboModel m;
    m.n = 3;
    m.linear = {-1.0, -1.0, -1.0};
    m.offset = 2.0;
    m.var_ids = {"a", "b", "c"};
    m.add_quadratic(0, 1, 0.5);

    DecomposeReport report;
    auto subs = decompose(m, 2, &report);
    CHECK(report.n_subproblems == subs.size());
    CHECK(report.cut_edges == 0);
    CHECK(report.cut_weight == doctest::Approx(0.0));

    std::multiset<std::string> vars;
    double offsets = 0.0;
    for (const auto& sub : subs) {
        offsets += sub.offset;
        for (const auto& id : sub.var_ids) vars.insert(id);
    }
    CHECK(vars == std::multiset<std::string>{"a", "b", "c"});  // partition
    CHECK(offsets == doctest::Approx(2.0));  // offset carried exactly once

    // Forcing max_vars below the component size cuts the coupling edge.
    DecomposeReport cut_report;
    auto cut_subs = decompose(m, 1, &cut_report);
    CHECK(cut_subs.size() == 3);
    CHECK(cut_report.cut_edges == 1);
    CHECK(cut_report.cut_weight == doctest::Approx(0.5));
}

TEST_CASE("merge_solutions reassembles block solutions on the original model") {
    QuboModel m;
    m.n = 4;
    m.linear = {-1.0, 0.5, -2.0, 0.25};
    m.var_ids = {"a", "b", "c", "d"};
    m.add_quadratic(0, 1, 2.0);
    m.add_quadratic(2, 3, 1.0);

    auto subs = decompose(m, 2);
    std::vector<std::pair<QuboModel, std::vector<std::uint8_t>>> solved;
    for (const auto& sub : subs) solved.push_back({sub, solve_exhaustive(sub).assignment});
    MergedSolution merged = merge_solutions(solved, m);
    SolveResult direct = solve_exhaustive(m);
    CHECK(merged.energy == doctest::Approx(direct.energy));
    CHECK(merged.bits == direct.assignment);

    // Dropping a sub-problem breaks the variable partition.
    solved.pop_back();
    CHECK_THROWS_AS(merge_solutions(solved, m), std::invalid_argument);
}

TEST_CASE("qubo json round trip") {
    QuboModel m;
    m.n = 3;
    m.linear = {-0.75, 0.0, 1.25};
    m.offset = 0.5;
    m.var_ids = {"a", "b", "c"};
    m.add_quadratic(0, 2, -0.125);
    QuboModel back = qubo_from_json(qubo_to_json(m));
    CHECK(back.n == m.n);
    CHECK(back.linear == m.linear);
    CHECK(back.offset == m.offset);
    CHECK(back.var_ids == m.var_ids);
    REQUIRE(back.quadratic.size() == 1);
    CHECK(back.quadratic.at({0, 2}) == doctest::Approx(-0.125));
}

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qprior/evaluate.hpp"

using namespace qprior;
using testutil::make_names;
using testutil::make_record;

namespace {

Ordering seq(std::vector<std::string> ids) {
    Ordering ord;
    ord.sequence = std::move(ids);
    ord.selected = ord.sequence;
    return ord;
}

}  // namespace

TEST_CASE("apfd hand examples") {
    // Two tests, one fault. Detection first: 1 - 1/2 + 1/4 = 0.75.
    FaultMatrix fm({"f1"}, {{"t1", {true}}, {"t2", {false}}});
    CHECK(apfd(seq({"t1", "t2"}), fm).apfd == doctest::Approx(0.75));
    // Detection last: 1 - 2/2 + 1/4 = 0.25.
    CHECK(apfd(seq({"t2", "t1"}), fm).apfd == doctest::Approx(0.25));
    // Two faults found at positions 1 and 2: 1 - 3/4 + 1/4 = 0.5.
    FaultMatrix fm2({"f1", "f2"}, {{"t1", {true, false}}, {"t2", {false, true}}});
    ApfdResult r = apfd(seq({"t1", "t2"}), fm2);
    CHECK(r.apfd == doctest::Approx(0.5));
    CHECK(r.tf == std::vector<std::size_t>{1, 2});
}

TEST_CASE("apfd excludes undetectable faults and validates its inputs") {
    FaultMatrix fm({"live", "dead"}, {{"t1", {true, false}}, {"t2", {false, false}}});
    ApfdResult r = apfd(seq({"t2", "t1"}), fm);
    CHECK(r.tf.size() == 1);  // only the detectable fault is scored
    CHECK(r.apfd == doctest::Approx(1.0 - 2.0 / 2.0 + 0.25));

    FaultMatrix none({"dead"}, {{"t1", {false}}});
    CHECK_THROWS_AS(apfd(seq({"t1"}), none), NoFaults);
    CHECK_THROWS_AS(apfd(seq({}), fm), std::invalid_argument);
    // An ordering that misses the detecting test cannot be scored.
    CHECK_THROWS_AS(apfd(seq({"t2"}), fm), std::invalid_argument);
}

TEST_CASE("apfd matches a position-counting oracle over all 120 orderings") {
    const std::vector<std::string> ids{"a", "b", "c", "d", "e"};
    // 3 faults: f0 by {a}, f1 by {b, d}, f2 by {c, e}.
    FaultMatrix fm({"f0", "f1", "f2"},
                   {{"a", {true, false, false}},
                    {"b", {false, true, false}},
                    {"c", {false, false, true}},
                    {"d", {false, true, false}},
                    {"e", {false, false, true}}});
    std::vector<std::string> perm = ids;
    std::sort(perm.begin(), perm.end());
    int checked = 0;
    do {
        double tf_sum = 0.0;
        for (std::size_t f = 0; f < 3; ++f) {
            for (std::size_t pos = 0; pos < perm.size(); ++pos) {
                if (fm.detects(perm[pos], f)) {
                    tf_sum += static_cast<double>(pos + 1);
                    break;
                }
            }
        }
        const double expect = 1.0 - tf_sum / (5.0 * 3.0) + 1.0 / 10.0;
        CHECK(apfd(seq(perm), fm).apfd == doctest::Approx(expect));
        ++checked;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(checked == 120);
}

TEST_CASE("apfd of a run and its reverse sum to one for single-detector faults") {
    // When exactly one test detects each fault, TF_fwd + TF_rev = n + 1 per
    // fault, so APFD_fwd + APFD_rev = 1 exactly.
    FaultMatrix fm({"f0", "f1"},
                   {{"a", {true, false}},
                    {"b", {false, false}},
                    {"c", {false, true}},
                    {"d", {false, false}}});
    Ordering fwd = seq({"b", "a", "d", "c"});
    Ordering rev = seq({"c", "d", "a", "b"});
    const double sum = apfd(fwd, fm).apfd + apfd(rev, fm).apfd;
    CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("tet stops once every detectable fault has been seen") {
    auto names = make_names({"x"});
    std::vector<TestCaseRecord> recs{
        make_record("t1", names, {0.0}, {}, 2.0, {"f1"}),
        make_record("t2", names, {0.0}, {}, 3.0, {"f2"}),
        make_record("t3", names, {0.0}, {}, 5.0, {}),
    };
    FaultMatrix fm = FaultMatrix::from_records(recs);
    CHECK(tet(seq({"t1", "t2", "t3"}), fm, recs) == doctest::Approx(5.0));
    CHECK(tet(seq({"t2", "t1", "t3"}), fm, recs) == doctest::Approx(5.0));
    CHECK(tet(seq({"t3", "t1", "t2"}), fm, recs) == doctest::Approx(10.0));

    // A first test that detects everything exits after exactly its own time.
    std::vector<TestCaseRecord> all_in_one{
        make_record("t1", names, {0.0}, {}, 1.0, {"f1", "f2"}),
        make_record("t2", names, {0.0}, {}, 9.0, {}),
    };
    FaultMatrix fm1 = FaultMatrix::from_records(all_in_one);
    CHECK(tet(seq({"t1", "t2"}), fm1, all_in_one) == doctest::Approx(1.0));

    // No detectable faults: the whole suite runs.
    FaultMatrix empty({"dead"}, {{"t1", {false}}, {"t2", {false}}});
    CHECK(tet(seq({"t1", "t2"}), empty, all_in_one) == doctest::Approx(10.0));

    CHECK_THROWS_AS(tet(seq({"ghost"}), fm, recs), std::invalid_argument);
}

TEST_CASE("paired significance behaves like a permutation test") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
    CHECK(paired_significance(a, a) == doctest::Approx(1.0));
    // Sign symmetry.
    std::vector<double> b = a;
    for (auto& v : b) v += 0.5;
    CHECK(paired_significance(a, b) == doctest::Approx(paired_significance(b, a)));
    // A constant shift across ten pairs is significant.
    std::vector<double> lo(10), hi(10);
    for (int i = 0; i < 10; ++i) {
        lo[i] = static_cast<double>(i);
        hi[i] = lo[i] + 1.0 + 0.01 * static_cast<double>(i % 3);
    }
    const double p = paired_significance(hi, lo);
    CHECK(p < 0.01);
    CHECK(p > 0.0);
    // Determinism: the resampling seed is fixed.
    CHECK(paired_significance(hi, lo) == doctest::Approx(p));

    CHECK_THROWS_AS(paired_significance({1, 2, 3}, {1, 2}), LengthMismatch);
    CHECK_THROWS_AS(paired_significance({1, 2, 3, 4}, {1, 2, 3, 4}), LengthMismatch);
}

TEST_CASE("aggregate groups by policy and suite category") {
    MetricsRecord r1;
    r1.policy = Policy::greedy;
    r1.n = 30;  // Small
    r1.apfd = 0.6;
    r1.tet = 10.0;
    r1.overhead.solve = 1.0;
    MetricsRecord r2 = r1;
    r2.apfd = 0.8;
    r2.tet = 20.0;
    MetricsRecord r3;
    r3.policy = Policy::random;
    r3.n = 120;  // Large
    r3.apfd = 0.5;
    r3.tet = 7.0;

    auto rows = aggregate({r1, r2, r3});
    REQUIRE(rows.size() == 2);
    // Sorted by policy enum order: random before greedy.
    CHECK(rows[0].policy == Policy::random);
    CHECK(rows[0].category == SuiteCategory::Large);
    CHECK(rows[0].count == 1);
    CHECK(rows[1].policy == Policy::greedy);
    CHECK(rows[1].category == SuiteCategory::Small);
    CHECK(rows[1].count == 2);
    CHECK(rows[1].mean_apfd == doctest::Approx(0.7));
    CHECK(rows[1].std_apfd == doctest::Approx(0.1));  // population sd
    CHECK(rows[1].mean_tet == doctest::Approx(15.0));
    CHECK(rows[1].mean_overhead_total == doctest::Approx(1.0));
    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
}

TEST_CASE("metrics csv round trips and validates the stored total") {
    MetricsRecord rec;
    rec.policy = Policy::quantum_enhanced;
    rec.suite_id = "s1";
    rec.seed = 9;
    rec.n = 60;
    rec.m = 12;
    rec.apfd = 0.8125;
    rec.tet = 42.5;
    rec.overhead.feature_extraction = 0.125;
    rec.overhead.prediction = 0.25;
    rec.overhead.qubo_build = 0.0625;
    rec.overhead.serialize_transfer = 0.5;
    rec.overhead.solve = 1.5;
    rec.overhead.parse_order = 0.03125;

    const std::string text = metrics_to_csv({rec});
    auto back = metrics_from_csv(text);
    REQUIRE(back.size() == 1);
    CHECK(back[0].policy == rec.policy);
    CHECK(back[0].suite_id == rec.suite_id);
    CHECK(back[0].seed == rec.seed);
    CHECK(back[0].n == rec.n);
    CHECK(back[0].m == rec.m);
    CHECK(back[0].apfd == rec.apfd);
    CHECK(back[0].tet == rec.tet);
    CHECK(back[0].overhead.total() == doctest::Approx(rec.overhead.total()));
    CHECK(back[0].overhead.solve == rec.overhead.solve);

    // The category column is derived from n.
    CHECK(text.find("medium") != std::string::npos);

    // A total that disagrees with the component sum is rejected.
    std::string corrupted = text;
    const std::string total = "2.46875";  // 0.125+0.25+0.0625+0.5+1.5+0.03125
    const auto at = corrupted.find(total);
    REQUIRE(at != std::string::npos);
    corrupted.replace(at, total.size(), "9.9");
    CHECK_THROWS_AS(metrics_from_csv(corrupted), ParseError);

    // Header must match exactly.
    CHECK_THROWS_AS(metrics_from_csv("policy,apfd\nrandom,0.5\n"), SchemaError);

    // File round trip.
    const std::string path = "metrics_roundtrip_tmp.csv";
    save_metrics({rec}, path);
    auto loaded = load_metrics(path);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].apfd == rec.apfd);
    std::remove(path.c_str());
}

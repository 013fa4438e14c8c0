#include <doctest.h>

#include <vector>

#include "helpers.hpp"
#include "qprior/model.hpp"

using namespace qprior;
using testutil::make_names;
using testutil::make_record;

TEST_CASE("feature vector looks values up by name") {
    auto names = make_names({"a", "b", "c"});
    FeatureVector fv(names, {1.0, kMissing, 3.0});
    CHECK(fv.size() == 3);
    CHECK(fv.by_name("a") == 1.0);
    CHECK(is_missing(fv.by_name("b")));
    CHECK(fv.has_missing());
    CHECK_THROWS(fv.by_name("nope"));
    FeatureVector full(names, {1.0, 2.0, 3.0});
    CHECK_FALSE(full.has_missing());
}

TEST_CASE("fault matrix built from records") {
    auto names = make_names({"x"});
    std::vector<TestCaseRecord> recs{
        make_record("t1", names, {0.0}, {}, 1.0, {"f1", "f2"}),
        make_record("t2", names, {0.0}, {}, 1.0, {"f2"}),
        make_record("t3", names, {0.0}, {}, 1.0, {}),
    };
    FaultMatrix fm = FaultMatrix::from_records(recs);
    CHECK(fm.fault_count() == 2);
    CHECK(fm.fault_ids() == std::vector<std::string>{"f1", "f2"});
    CHECK(fm.detects("t1", 0));
    CHECK(fm.detects("t1", 1));
    CHECK_FALSE(fm.detects("t2", 0));
    CHECK(fm.detects("t2", 1));
    CHECK_FALSE(fm.detects("t3", 0));
    CHECK(fm.row("missing") == nullptr);
}

TEST_CASE("without_undetectable drops all-false columns and counts them") {
    FaultMatrix fm({"f1", "f2", "f3"},
                   {{"t1", {true, false, false}}, {"t2", {false, false, true}}});
    FaultMatrix pruned = fm.without_undetectable();
    CHECK(pruned.fault_count() == 2);
    CHECK(pruned.fault_ids() == std::vector<std::string>{"f1", "f3"});
    CHECK(pruned.dropped_undetectable() == 1);
}

TEST_CASE("restricted_to keeps rows then prunes newly undetectable faults") {
    FaultMatrix fm({"f1", "f2"},
                   {{"t1", {true, false}}, {"t2", {false, true}}});
    FaultMatrix only_t1 = fm.restricted_to({"t1"});
    CHECK(only_t1.fault_count() == 1);
    CHECK(only_t1.fault_ids() == std::vector<std::string>{"f1"});
    CHECK(only_t1.rows().size() == 1);
    CHECK(only_t1.dropped_undetectable() == 1);
}

TEST_CASE("policy names round trip") {
    for (Policy p : {Policy::random, Policy::greedy, Policy::ml_only,
                     Policy::quantum_enhanced})
        CHECK(policy_from_name(policy_name(p)) == p);
    CHECK_THROWS(policy_from_name("bogus"));
}

TEST_CASE("ordering_is_valid checks permutation and selected prefix") {
    auto names = make_names({"x"});
    std::vector<TestCaseRecord> recs{
        make_record("a", names, {0.0}),
        make_record("b", names, {0.0}),
        make_record("c", names, {0.0}),
    };
    Ordering good;
    good.sequence = {"b", "a", "c"};
    good.selected = {"b", "a"};
    CHECK(ordering_is_valid(good, recs));

    Ordering dup = good;
    dup.sequence = {"b", "b", "c"};
    CHECK_FALSE(ordering_is_valid(dup, recs));

    Ordering short_seq = good;
    short_seq.sequence = {"b", "a"};
    CHECK_FALSE(ordering_is_valid(short_seq, recs));

    Ordering bad_prefix = good;
    bad_prefix.selected = {"b", "c"};  // c is not in the leading positions
    CHECK_FALSE(ordering_is_valid(bad_prefix, recs));
}

TEST_CASE("suite size categories use the 50/100 boundaries") {
    CHECK(categorize_suite(1) == SuiteCategory::Small);
    CHECK(categorize_suite(49) == SuiteCategory::Small);
    CHECK(categorize_suite(50) == SuiteCategory::Medium);
    CHECK(categorize_suite(100) == SuiteCategory::Medium);
    CHECK(categorize_suite(101) == SuiteCategory::Large);
}

TEST_CASE("validate_suite reports structural problems") {
    auto names = make_names({"x"});
    auto wide_names = make_names({"x", "y"});
    std::vector<TestCaseRecord> recs{
        make_record("t1", names, {0.0}, {}, 1.0, {"f1"}),
        make_record("t1", names, {0.0}, {}, -2.0),             // duplicate id, bad time
        make_record("t2", wide_names, {0.0, 1.0}, {}, 1.0),    // width mismatch
    };
    FaultMatrix fm({"f1", "dead"},
                   {{"t1", {true, false}}, {"t2", {false, false}}});
    ValidationReport report = validate_suite(recs, fm);
    CHECK_FALSE(report.valid());
    int dup = 0, neg = 0, width = 0;
    for (const auto& e : report.errors) {
        if (e.kind == ValidationIssue::Kind::duplicate_id) ++dup;
        if (e.kind == ValidationIssue::Kind::negative_exec_time) ++neg;
        if (e.kind == ValidationIssue::Kind::feature_width_mismatch) ++width;
    }
    CHECK(dup == 1);
    CHECK(neg == 1);
    CHECK(width == 1);
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].kind == ValidationIssue::Kind::undetectable_fault);
    CHECK(report.warnings[0].subject == "dead");
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qprior/pipeline.hpp"
#include "qprior/report.hpp"

using namespace qprior;

namespace {

MetricsRecord rec_of(Policy p, double apfd_val, double tet_val,
                     OverheadLedger ledger = {}, std::size_t n = 100,
                     const std::string& suite = "s") {
    MetricsRecord r;
    r.policy = p;
    r.suite_id = suite;
    r.n = n;
    r.m = 10;
    r.apfd = apfd_val;
    r.tet = tet_val;
    r.overhead = ledger;
    return r;
}

// Per-policy metrics whose means reproduce the headline comparison table.
std::vector<MetricsRecord> table_fixture() {
    OverheadLedger zero;
    OverheadLedger greedy_ovh;
    greedy_ovh.feature_extraction = 0.5;
    OverheadLedger ml_ovh;
    ml_ovh.prediction = 1.2;
    OverheadLedger quantum_ovh;
    quantum_ovh.feature_extraction = 0.4;
    quantum_ovh.prediction = 0.5;
    quantum_ovh.qubo_build = 0.3;
    quantum_ovh.serialize_transfer = 1.5;
    quantum_ovh.solve = 1.2;
    quantum_ovh.parse_order = 0.2;
    return {
        rec_of(Policy::random, 0.621, 113.0, zero),
        rec_of(Policy::greedy, 0.687, 108.0, greedy_ovh),
        rec_of(Policy::ml_only, 0.759, 94.0, ml_ovh),
        rec_of(Policy::quantum_enhanced, 0.852, 66.0, quantum_ovh),
    };
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("table1 means, ordering, and presentation formatting") {
    auto metrics = table_fixture();
    // Duplicate every row so the mean actually averages something.
    auto twice = metrics;
    twice.insert(twice.end(), metrics.begin(), metrics.end());
    Table1 table = compute_table1(twice);
    REQUIRE(table.rows.size() == 4);
    CHECK(table.missing.empty());
    CHECK(table.rows[0].policy == Policy::random);
    CHECK(table.rows[3].policy == Policy::quantum_enhanced);
    CHECK(table.rows[0].apfd_pct == doctest::Approx(62.1));
    CHECK(table.rows[3].overhead == doctest::Approx(4.1));

    const std::string csv = table1_csv(table);
    CHECK(csv ==
          "policy,apfd_pct,tet_s,overhead_s\n"
          "Random,62.1,113,0\n"
          "Greedy,68.7,108,0.5\n"
          "ML-Only,75.9,94,1.2\n"
          "Quantum-Enhanced,85.2,66,4.1\n");

    const std::string text = table1_text(table);
    CHECK(text.find("Random") != std::string::npos);
    CHECK(text.find("62.1") != std::string::npos);
    CHECK(text.find("113") != std::string::npos);
    CHECK(text.find("4.1") != std::string::npos);
    CHECK(text.find("62.10") == std::string::npos);  // one decimal, trimmed
    CHECK(text.find("113.0") == std::string::npos);  // integral values drop .0
}

TEST_CASE("table1 flags absent policies instead of inventing rows") {
    std::vector<MetricsRecord> only_two{
        rec_of(Policy::random, 0.5, 10.0),
        rec_of(Policy::quantum_enhanced, 0.9, 5.0),
    };
    Table1 table = compute_table1(only_two);
    REQUIRE(table.rows.size() == 2);
    REQUIRE(table.missing.size() == 2);
    CHECK(table.missing[0] == Policy::greedy);
    CHECK(table.missing[1] == Policy::ml_only);
    const std::string text = table1_text(table);
    CHECK(text.find("# warning: no metrics for policy Greedy, row omitted") !=
          std::string::npos);
}

TEST_CASE("box_stats uses inclusive-median-halves quartiles") {
    BoxStats s = box_stats({5, 3, 1, 4, 2});
    CHECK(s.median == doctest::Approx(3.0));
    CHECK(s.q1 == doctest::Approx(2.0));  // lower half {1,2,3}
    CHECK(s.q3 == doctest::Approx(4.0));  // upper half {3,4,5}
    CHECK(s.whisker_low == doctest::Approx(1.0));
    CHECK(s.whisker_high == doctest::Approx(5.0));
    CHECK(s.outliers.empty());

    // Even count: halves split cleanly.
    BoxStats e = box_stats({1, 2, 3, 4});
    CHECK(e.median == doctest::Approx(2.5));
    CHECK(e.q1 == doctest::Approx(1.5));
    CHECK(e.q3 == doctest::Approx(3.5));

    // A far point falls outside the 1.5*IQR fence.
    BoxStats o = box_stats({1, 2, 3, 4, 5, 100});
    REQUIRE(o.outliers.size() == 1);
    CHECK(o.outliers[0] == doctest::Approx(100.0));
    CHECK(o.whisker_high == doctest::Approx(5.0));  // farthest inlier

    CHECK_THROWS(box_stats({}));
}

TEST_CASE("fig1 renders one bar per policy in fixed order") {
    FigureFiles fig = fig1_apfd_bars(table_fixture());
    CHECK(fig.csv ==
          "policy,mean_apfd_pct\n"
          "Random,62.1\n"
          "Greedy,68.7\n"
          "ML-Only,75.9\n"
          "Quantum-Enhanced,85.2\n");
    CHECK(fig.svg.find("<svg") != std::string::npos);
    CHECK(fig.svg.find("Quantum-Enhanced") != std::string::npos);
}

TEST_CASE("fig4 breakdown lists components in ledger order and totals them") {
    OverheadLedger ledger;
    ledger.feature_extraction = 1.0;
    ledger.prediction = 1.0;
    ledger.qubo_build = 1.0;
    ledger.serialize_transfer = 1.0;
    ledger.solve = 0.05;
    ledger.parse_order = 0.05;
    FigureFiles fig = fig4_overhead_breakdown(ledger);
    CHECK(fig.svg.find("CI/CD Overhead Breakdown (total 4.1 s)") != std::string::npos);
    CHECK(fig.csv ==
          "component,seconds\n"
          "feature_extraction,1\n"
          "prediction,1\n"
          "qubo_build,1\n"
          "serialize_transfer,1\n"
          "solve,0.05\n"
          "parse_order,0.05\n");

    // The metrics overload averages quantum_enhanced rows when present.
    FigureFiles from_metrics = fig4_overhead_breakdown(table_fixture());
    CHECK(from_metrics.csv.find("serialize_transfer,1.5") != std::string::npos);
    CHECK(from_metrics.svg.find("(total 4.1 s)") != std::string::npos);
    CHECK_THROWS_AS(fig4_overhead_breakdown(std::vector<MetricsRecord>{}),
                    MissingColumn);
}

TEST_CASE("fig3 and fig5 group by size and category") {
    std::vector<MetricsRecord> metrics;
    for (Policy p : {Policy::random, Policy::quantum_enhanced}) {
        for (std::size_t n : {30, 75, 150}) {
            for (int k = 0; k < 3; ++k) {
                auto r = rec_of(p, 0.5 + 0.01 * k, 10.0 + static_cast<double>(n) + k, {}, n);
                metrics.push_back(r);
            }
        }
    }
    FigureFiles f3 = fig3_tet_lines(metrics);
    CHECK(f3.csv.find("policy,n_tests,mean_tet\n") == 0);
    CHECK(f3.csv.find("Random,30,") != std::string::npos);
    CHECK(f3.csv.find("Quantum-Enhanced,150,") != std::string::npos);

    FigureFiles f5 = fig5_apfd_boxplot(metrics);
    CHECK(f5.csv.find("policy,category,median,q1,q3,whisker_low,whisker_high,outliers\n") == 0);
    CHECK(f5.csv.find("Random,small,") != std::string::npos);
    CHECK(f5.csv.find("Quantum-Enhanced,large,") != std::string::npos);
}

TEST_CASE("fig2 heatmap needs a populated pipeline log") {
    PipelineLog log;
    CHECK_THROWS_AS(fig2_defect_heatmap(log), MissingColumn);
    for (std::size_t b = 1; b <= 3; ++b) {
        BuildRecord build;
        build.build_number = b;
        build.faults_by_class["modA"] = b;
        build.faults_by_class["modB"] = 4 - b;
        log.builds.push_back(std::move(build));
    }
    FigureFiles fig = fig2_defect_heatmap(log);
    CHECK(fig.csv.find("class,build,count\n") == 0);
    CHECK(fig.csv.find("modA,1,1") != std::string::npos);
    CHECK(fig.csv.find("modB,3,1") != std::string::npos);
    CHECK(fig.svg.find("modA") != std::string::npos);
}

TEST_CASE("emit_report writes a stable file set") {
    namespace fs = std::filesystem;
    const std::string dir = "report_tmp_dir";
    auto metrics = table_fixture();
    auto paths = emit_report(metrics, nullptr, dir);
    // table1.{txt,csv} + fig1/3/4/5.{svg,csv}; fig2 needs a log.
    CHECK(paths.size() == 10);
    for (const auto& p : paths) CHECK(fs::exists(p));
    const std::string table_txt = slurp(dir + "/table1.txt");
    CHECK(table_txt.find("Quantum-Enhanced") != std::string::npos);

    // Re-emitting produces byte-identical files.
    std::vector<std::string> before;
    for (const auto& p : paths) before.push_back(slurp(p));
    auto paths2 = emit_report(metrics, nullptr, dir);
    REQUIRE(paths2 == paths);
    for (std::size_t i = 0; i < paths.size(); ++i) CHECK(slurp(paths[i]) == before[i]);

    fs::remove_all(dir);
}

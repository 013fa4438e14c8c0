#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qprior/evaluate.hpp"
#include "qprior/pipeline.hpp"

namespace qprior {

struct MissingColumn : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Display labels used in the emitted table and figure legends.
const char* policy_display_name(Policy p);

struct Table1 {
    struct Row {
        Policy policy = Policy::random;
        double apfd_pct = 0.0;  // mean APFD as percent
        double tet = 0.0;       // mean TET seconds
        double overhead = 0.0;  // mean overhead total seconds
    };
    std::vector<Row> rows;            // fixed policy order; absent policies omitted
    std::vector<Policy> missing;      // policies with no metrics rows
};

Table1 compute_table1(const std::vector<MetricsRecord>& metrics);
std::string table1_text(const Table1& table);  // aligned human-readable table
std::string table1_csv(const Table1& table);

// Box statistics with inclusive-median-halves quartiles (the median joins
// both halves when the count is odd) and linear interpolation inside each
// half; whiskers reach the farthest points within 1.5*IQR of the box.
struct BoxStats {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;
};

BoxStats box_stats(std::vector<double> values);

struct FigureFiles {
    std::string svg;
    std::string csv;  // exactly the values the SVG renders
};

// fig1: mean APFD% bar per policy.
FigureFiles fig1_apfd_bars(const std::vector<MetricsRecord>& metrics);
// fig2: module-class x build heatmap of detectable-fault counts.
FigureFiles fig2_defect_heatmap(const PipelineLog& log);
// fig3: mean TET vs suite size, one line per policy.
FigureFiles fig3_tet_lines(const std::vector<MetricsRecord>& metrics);
// fig4: mean per-stage overhead bars (quantum_enhanced rows when present,
// otherwise all rows). The overload renders one explicit ledger.
FigureFiles fig4_overhead_breakdown(const std::vector<MetricsRecord>& metrics);
FigureFiles fig4_overhead_breakdown(const OverheadLedger& ledger);
// fig5: APFD box-and-whisker per policy, grouped by suite category.
FigureFiles fig5_apfd_boxplot(const std::vector<MetricsRecord>& metrics);

// Writes table1.{txt,csv} and fig1..fig5.{svg,csv} into out_dir (fig2 only
// when a pipeline log is supplied); returns the paths written.
std::vector<std::string> emit_report(const std::vector<MetricsRecord>& metrics,
                                     const PipelineLog* log,
                                     const std::string& out_dir);

}  // namespace qprior

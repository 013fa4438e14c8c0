#include "qprior/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "qprior/util.hpp"

namespace qprior {

namespace {

constexpr Policy kPolicyOrder[] = {Policy::random, Policy::greedy, Policy::ml_only,
                                   Policy::quantum_enhanced};

const char* policy_color(Policy p) {
    switch (p) {
        case Policy::random: return "#9aa0a6";
        case Policy::greedy: return "#f9ab00";
        case Policy::ml_only: return "#4285f4";
        case Policy::quantum_enhanced: return "#34a853";
    }
    return "#000000";
}

// One decimal place, integral values without the trailing ".0" (matches the
// style of the published table: 113, 0.5, 4.1).
std::string fmt1(double v) {
    const double r = std::round(v * 10.0) / 10.0;
    const double i = std::round(r);
    if (r == i) {
        long long whole = static_cast<long long>(i);
        return std::to_string(whole);
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.1f", r);
    return buf;
}

// Short stable SVG coordinates.
std::string fmt_coord(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

class SvgBuilder {
public:
    SvgBuilder(double width, double height) {
        body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                 fmt_coord(width) + "\" height=\"" + fmt_coord(height) +
                 "\" viewBox=\"0 0 " + fmt_coord(width) + " " + fmt_coord(height) +
                 "\" font-family=\"sans-serif\">\n";
        body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke = "") {
        body_ += "<rect x=\"" + fmt_coord(x) + "\" y=\"" + fmt_coord(y) +
                 "\" width=\"" + fmt_coord(w) + "\" height=\"" + fmt_coord(h) +
                 "\" fill=\"" + fill + "\"";
        if (!stroke.empty()) body_ += " stroke=\"" + stroke + "\"";
        body_ += "/>\n";
    }

    void line(double x1, double y1, double x2, double y2,
              const std::string& stroke = "#333", double width = 1.0) {
        body_ += "<line x1=\"" + fmt_coord(x1) + "\" y1=\"" + fmt_coord(y1) +
                 "\" x2=\"" + fmt_coord(x2) + "\" y2=\"" + fmt_coord(y2) +
                 "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt_coord(width) +
                 "\"/>\n";
    }

    void circle(double cx, double cy, double r, const std::string& fill) {
        body_ += "<circle cx=\"" + fmt_coord(cx) + "\" cy=\"" + fmt_coord(cy) +
                 "\" r=\"" + fmt_coord(r) + "\" fill=\"" + fill + "\"/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& stroke) {
        body_ += "<polyline fill=\"none\" stroke=\"" + stroke +
                 "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body_.push_back(' ');
            body_ += fmt_coord(pts[i].first) + "," + fmt_coord(pts[i].second);
        }
        body_ += "\"/>\n";
    }

    void text(double x, double y, const std::string& content, double size = 11,
              const std::string& anchor = "start", const std::string& fill = "#222") {
        body_ += "<text x=\"" + fmt_coord(x) + "\" y=\"" + fmt_coord(y) +
                 "\" font-size=\"" + fmt_coord(size) + "\" text-anchor=\"" + anchor +
                 "\" fill=\"" + fill + "\">" + xml_escape(content) + "</text>\n";
    }

    std::string finish() { return body_ + "</svg>\n"; }

private:
    std::string body_;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

const char* policy_display_name(Policy p) {
    switch (p) {
        case Policy::random: return "Random";
        case Policy::greedy: return "Greedy";
        case Policy::ml_only: return "ML-Only";
        case Policy::quantum_enhanced: return "Quantum-Enhanced";
    }
    return "?";
}

Table1 compute_table1(const std::vector<MetricsRecord>& metrics) {
    Table1 table;
    for (Policy p : kPolicyOrder) {
        std::vector<double> apfd, tet, ovh;
        for (const auto& rec : metrics) {
            if (rec.policy != p) continue;
            apfd.push_back(rec.apfd);
            tet.push_back(rec.tet);
            ovh.push_back(rec.overhead.total());
        }
        if (apfd.empty()) {
            table.missing.push_back(p);
            continue;
        }
        table.rows.push_back(
            {p, mean_of(apfd) * 100.0, mean_of(tet), mean_of(ovh)});
    }
    return table;
}

std::string table1_text(const Table1& table) {
    std::string out = pad_right("Policy", 18) + pad_left("APFD (%)", 10) +
                      pad_left("TET (s)", 10) + pad_left("Overhead (s)", 14) + "\n";
    for (const auto& row : table.rows) {
        out += pad_right(policy_display_name(row.policy), 18);
        out += pad_left(fmt1(row.apfd_pct), 10);
        out += pad_left(fmt1(row.tet), 10);
        out += pad_left(fmt1(row.overhead), 14);
        out.push_back('\n');
    }
    for (Policy p : table.missing)
        out += std::string("# warning: no metrics for policy ") +
               policy_display_name(p) + ", row omitted\n";
    return out;
}

std::string table1_csv(const Table1& table) {
    std::string out = "policy,apfd_pct,tet_s,overhead_s\n";
    for (const auto& row : table.rows) {
        out += policy_display_name(row.policy);
        out.push_back(',');
        out += fmt1(row.apfd_pct);
        out.push_back(',');
        out += fmt1(row.tet);
        out.push_back(',');
        out += fmt1(row.overhead);
        out.push_back('\n');
    }
    return out;
}

BoxStats box_stats(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("box_stats of empty data");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const auto median_of = [&](std::size_t lo, std::size_t hi) {  // [lo, hi]
        const std::size_t len = hi - lo + 1;
        const std::size_t mid = lo + len / 2;
        return len % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    };
    BoxStats b;
    b.median = median_of(0, n - 1);
    if (n == 1) {
        b.q1 = b.q3 = b.median;
    } else if (n % 2 == 1) {
        b.q1 = median_of(0, n / 2);        // lower half includes the median
        b.q3 = median_of(n / 2, n - 1);
    } else {
        b.q1 = median_of(0, n / 2 - 1);
        b.q3 = median_of(n / 2, n - 1);
    }
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr;
    const double hi_fence = b.q3 + 1.5 * iqr;
    b.whisker_low = b.q3;
    b.whisker_high = b.q1;
    bool any = false;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
        } else {
            if (!any) {
                b.whisker_low = b.whisker_high = v;
                any = true;
            } else {
                b.whisker_low = std::min(b.whisker_low, v);
                b.whisker_high = std::max(b.whisker_high, v);
            }
        }
    }
    return b;
}

FigureFiles fig1_apfd_bars(const std::vector<MetricsRecord>& metrics) {
    if (metrics.empty()) throw MissingColumn("fig1 needs metrics rows with apfd");
    struct Bar {
        Policy policy;
        double pct;
    };
    std::vector<Bar> bars;
    for (Policy p : kPolicyOrder) {
        std::vector<double> apfd;
        for (const auto& rec : metrics)
            if (rec.policy == p) apfd.push_back(rec.apfd);
        if (!apfd.empty()) bars.push_back({p, mean_of(apfd) * 100.0});
    }

    std::string csv = "policy,mean_apfd_pct\n";
    for (const auto& b : bars) {
        csv += policy_display_name(b.policy);
        csv.push_back(',');
        csv += detail::format_double(b.pct);
        csv.push_back('\n');
    }

    const double W = 480, H = 320, left = 52, right = 16, top = 34, bottom = 52;
    const double plot_w = W - left - right, plot_h = H - top - bottom;
    SvgBuilder svg(W, H);
    svg.text(W / 2, 20, "APFD Comparison Across Models", 13, "middle");
    for (int g = 0; g <= 5; ++g) {
        const double y = top + plot_h - plot_h * g / 5.0;
        svg.line(left, y, left + plot_w, y, "#ddd");
        svg.text(left - 6, y + 4, fmt1(20.0 * g), 10, "end", "#555");
    }
    svg.line(left, top, left, top + plot_h, "#333");
    svg.line(left, top + plot_h, left + plot_w, top + plot_h, "#333");
    const double slot = plot_w / static_cast<double>(bars.empty() ? 1 : bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double h = plot_h * bars[i].pct / 100.0;
        const double x = left + slot * static_cast<double>(i) + slot * 0.2;
        const double y = top + plot_h - h;
        svg.rect(x, y, slot * 0.6, h, policy_color(bars[i].policy));
        svg.text(x + slot * 0.3, y - 5, fmt1(bars[i].pct), 11, "middle");
        svg.text(x + slot * 0.3, top + plot_h + 16, policy_display_name(bars[i].policy),
                 10, "middle");
    }
    svg.text(14, top + plot_h / 2, "APFD (%)", 11, "middle");
    return {svg.finish(), csv};
}

FigureFiles fig2_defect_heatmap(const PipelineLog& log) {
    if (log.builds.empty()) throw MissingColumn("fig2 needs a non-empty pipeline log");
    std::set<std::string> classes;
    for (const auto& b : log.builds)
        for (const auto& [cls, count] : b.faults_by_class) classes.insert(cls);
    if (classes.empty()) throw MissingColumn("fig2 needs faults_by_class in the log");
    std::vector<std::string> class_list(classes.begin(), classes.end());

    std::string csv = "class,build,count\n";
    std::size_t max_count = 1;
    std::map<std::pair<std::string, std::size_t>, std::size_t> cells;
    for (const auto& b : log.builds) {
        for (const auto& cls : class_list) {
            const auto it = b.faults_by_class.find(cls);
            const std::size_t count = it == b.faults_by_class.end() ? 0 : it->second;
            cells[{cls, b.build_number}] = count;
            max_count = std::max(max_count, count);
            csv += cls + "," + std::to_string(b.build_number) + "," +
                   std::to_string(count) + "\n";
        }
    }

    const double cell_w = 26, cell_h = 20, left = 86, top = 46;
    const double W = left + cell_w * static_cast<double>(log.builds.size()) + 20;
    const double H = top + cell_h * static_cast<double>(class_list.size()) + 40;
    SvgBuilder svg(W, H);
    svg.text(W / 2, 20, "Defect Density by Module Class and Build", 13, "middle");
    for (std::size_t r = 0; r < class_list.size(); ++r)
        svg.text(left - 6, top + cell_h * static_cast<double>(r) + cell_h / 2 + 4,
                 class_list[r], 10, "end");
    for (std::size_t c = 0; c < log.builds.size(); ++c) {
        svg.text(left + cell_w * static_cast<double>(c) + cell_w / 2,
                 top + cell_h * static_cast<double>(class_list.size()) + 14,
                 std::to_string(log.builds[c].build_number), 9, "middle", "#555");
        for (std::size_t r = 0; r < class_list.size(); ++r) {
            const std::size_t count =
                cells[{class_list[r], log.builds[c].build_number}];
            const double shade =
                static_cast<double>(count) / static_cast<double>(max_count);
            const int gb = 255 - static_cast<int>(std::round(195.0 * shade));
            const std::string fill =
                "rgb(255," + std::to_string(gb) + "," + std::to_string(gb) + ")";
            svg.rect(left + cell_w * static_cast<double>(c),
                     top + cell_h * static_cast<double>(r), cell_w - 1, cell_h - 1,
                     fill, "#ccc");
        }
    }
    svg.text(left, H - 8, "builds", 10, "start", "#555");
    return {svg.finish(), csv};
}

FigureFiles fig3_tet_lines(const std::vector<MetricsRecord>& metrics) {
    if (metrics.empty()) throw MissingColumn("fig3 needs metrics rows with tet");
    std::map<std::pair<int, std::size_t>, std::vector<double>> groups;
    std::set<std::size_t> sizes;
    for (const auto& rec : metrics) {
        groups[{static_cast<int>(rec.policy), rec.n}].push_back(rec.tet);
        sizes.insert(rec.n);
    }

    std::string csv = "policy,n_tests,mean_tet\n";
    std::map<int, std::vector<std::pair<std::size_t, double>>> lines;
    for (Policy p : kPolicyOrder) {
        for (std::size_t n : sizes) {
            const auto it = groups.find({static_cast<int>(p), n});
            if (it == groups.end()) continue;
            const double m = mean_of(it->second);
            lines[static_cast<int>(p)].push_back({n, m});
            csv += std::string(policy_display_name(p)) + "," + std::to_string(n) +
                   "," + detail::format_double(m) + "\n";
        }
    }

    double max_tet = 0.0;
    for (const auto& [p, pts] : lines)
        for (const auto& [n, t] : pts) max_tet = std::max(max_tet, t);
    if (max_tet <= 0.0) max_tet = 1.0;
    const double n_lo = static_cast<double>(*sizes.begin());
    const double n_hi = static_cast<double>(*sizes.rbegin());
    const double n_span = n_hi > n_lo ? n_hi - n_lo : 1.0;

    const double W = 520, H = 340, left = 56, right = 140, top = 34, bottom = 46;
    const double plot_w = W - left - right, plot_h = H - top - bottom;
    SvgBuilder svg(W, H);
    svg.text((left + W - right) / 2, 20, "TET vs Test Suite Size", 13, "middle");
    svg.line(left, top, left, top + plot_h, "#333");
    svg.line(left, top + plot_h, left + plot_w, top + plot_h, "#333");
    for (int g = 0; g <= 4; ++g) {
        const double y = top + plot_h - plot_h * g / 4.0;
        svg.line(left, y, left + plot_w, y, "#ddd");
        svg.text(left - 6, y + 4, fmt1(max_tet * 1.1 * g / 4.0), 10, "end", "#555");
    }
    for (std::size_t n : sizes) {
        const double x = left + plot_w * (static_cast<double>(n) - n_lo) / n_span;
        svg.text(x, top + plot_h + 16, std::to_string(n), 10, "middle", "#555");
    }
    double legend_y = top + 10;
    for (Policy p : kPolicyOrder) {
        const auto it = lines.find(static_cast<int>(p));
        if (it == lines.end()) continue;
        std::vector<std::pair<double, double>> pts;
        for (const auto& [n, t] : it->second) {
            const double x = left + plot_w * (static_cast<double>(n) - n_lo) / n_span;
            const double y = top + plot_h - plot_h * t / (max_tet * 1.1);
            pts.push_back({x, y});
        }
        if (pts.size() > 1) svg.polyline(pts, policy_color(p));
        for (const auto& [x, y] : pts) svg.circle(x, y, 3, policy_color(p));
        svg.line(left + plot_w + 12, legend_y, left + plot_w + 30, legend_y,
                 policy_color(p), 2.5);
        svg.text(left + plot_w + 34, legend_y + 4, policy_display_name(p), 10);
        legend_y += 16;
    }
    svg.text(left + plot_w / 2, H - 8, "tests in suite", 10, "middle", "#555");
    svg.text(14, top + plot_h / 2, "TET (s)", 11, "middle");
    return {svg.finish(), csv};
}

namespace {

FigureFiles render_fig4(const OverheadLedger& ledger) {
    const std::pair<const char*, double> comps[] = {
        {"feature_extraction", ledger.feature_extraction},
        {"prediction", ledger.prediction},
        {"qubo_build", ledger.qubo_build},
        {"serialize_transfer", ledger.serialize_transfer},
        {"solve", ledger.solve},
        {"parse_order", ledger.parse_order},
    };
    std::string csv = "component,seconds\n";
    double max_v = 0.0;
    for (const auto& [name, v] : comps) {
        csv += std::string(name) + "," + detail::format_double(v) + "\n";
        max_v = std::max(max_v, v);
    }
    if (max_v <= 0.0) max_v = 1.0;

    const double W = 520, H = 280, left = 150, right = 60, top = 40;
    const double plot_w = W - left - right, row_h = 30;
    SvgBuilder svg(W, H);
    svg.text(W / 2, 20, "CI/CD Overhead Breakdown (total " + fmt1(ledger.total()) + " s)",
             13, "middle");
    for (std::size_t i = 0; i < 6; ++i) {
        const auto& [name, v] = comps[i];
        const double y = top + row_h * static_cast<double>(i);
        const double w = plot_w * v / max_v;
        svg.text(left - 6, y + row_h / 2 + 4, name, 10, "end");
        svg.rect(left, y + 5, w, row_h - 10, "#4285f4");
        svg.text(left + w + 5, y + row_h / 2 + 4, fmt1(v), 10);
    }
    return {svg.finish(), csv};
}

}  // namespace

FigureFiles fig4_overhead_breakdown(const OverheadLedger& ledger) {
    return render_fig4(ledger);
}

FigureFiles fig4_overhead_breakdown(const std::vector<MetricsRecord>& metrics) {
    if (metrics.empty()) throw MissingColumn("fig4 needs metrics rows with overhead");
    std::vector<const MetricsRecord*> pool;
    for (const auto& rec : metrics)
        if (rec.policy == Policy::quantum_enhanced) pool.push_back(&rec);
    if (pool.empty())
        for (const auto& rec : metrics) pool.push_back(&rec);
    OverheadLedger mean;
    for (const auto* rec : pool) {
        mean.feature_extraction += rec->overhead.feature_extraction;
        mean.prediction += rec->overhead.prediction;
        mean.qubo_build += rec->overhead.qubo_build;
        mean.serialize_transfer += rec->overhead.serialize_transfer;
        mean.solve += rec->overhead.solve;
        mean.parse_order += rec->overhead.parse_order;
    }
    const double k = static_cast<double>(pool.size());
    mean.feature_extraction /= k;
    mean.prediction /= k;
    mean.qubo_build /= k;
    mean.serialize_transfer /= k;
    mean.solve /= k;
    mean.parse_order /= k;
    return render_fig4(mean);
}

FigureFiles fig5_apfd_boxplot(const std::vector<MetricsRecord>& metrics) {
    if (metrics.empty()) throw MissingColumn("fig5 needs metrics rows with apfd");
    constexpr SuiteCategory kCats[] = {SuiteCategory::Small, SuiteCategory::Medium,
                                       SuiteCategory::Large};
    struct Group {
        Policy policy;
        SuiteCategory category;
        BoxStats stats;
    };
    std::vector<Group> groups;
    for (SuiteCategory cat : kCats) {
        for (Policy p : kPolicyOrder) {
            std::vector<double> vals;
            for (const auto& rec : metrics)
                if (rec.policy == p && categorize_suite(rec.n) == cat)
                    vals.push_back(rec.apfd * 100.0);
            if (!vals.empty()) groups.push_back({p, cat, box_stats(std::move(vals))});
        }
    }

    std::string csv =
        "policy,category,median,q1,q3,whisker_low,whisker_high,outliers\n";
    for (const auto& g : groups) {
        csv += std::string(policy_display_name(g.policy)) + "," +
               category_name(g.category) + "," + detail::format_double(g.stats.median) +
               "," + detail::format_double(g.stats.q1) + "," +
               detail::format_double(g.stats.q3) + "," +
               detail::format_double(g.stats.whisker_low) + "," +
               detail::format_double(g.stats.whisker_high) + ",";
        for (std::size_t i = 0; i < g.stats.outliers.size(); ++i) {
            if (i) csv.push_back(';');
            csv += detail::format_double(g.stats.outliers[i]);
        }
        csv.push_back('\n');
    }

    const double W = 640, H = 360, left = 52, right = 16, top = 34, bottom = 64;
    const double plot_w = W - left - right, plot_h = H - top - bottom;
    SvgBuilder svg(W, H);
    svg.text(W / 2, 20, "APFD Variability by Suite Size Category", 13, "middle");
    for (int g = 0; g <= 5; ++g) {
        const double y = top + plot_h - plot_h * g / 5.0;
        svg.line(left, y, left + plot_w, y, "#ddd");
        svg.text(left - 6, y + 4, fmt1(20.0 * g), 10, "end", "#555");
    }
    svg.line(left, top, left, top + plot_h, "#333");
    svg.line(left, top + plot_h, left + plot_w, top + plot_h, "#333");
    const double slot =
        plot_w / static_cast<double>(groups.empty() ? 1 : groups.size());
    const auto y_of = [&](double pct) { return top + plot_h - plot_h * pct / 100.0; };
    std::string last_cat;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        const double cx = left + slot * (static_cast<double>(i) + 0.5);
        const double bw = slot * 0.5;
        const auto& s = g.stats;
        svg.line(cx, y_of(s.whisker_low), cx, y_of(s.q1), "#333");
        svg.line(cx, y_of(s.q3), cx, y_of(s.whisker_high), "#333");
        svg.line(cx - bw / 4, y_of(s.whisker_low), cx + bw / 4, y_of(s.whisker_low),
                 "#333");
        svg.line(cx - bw / 4, y_of(s.whisker_high), cx + bw / 4, y_of(s.whisker_high),
                 "#333");
        svg.rect(cx - bw / 2, y_of(s.q3), bw, y_of(s.q1) - y_of(s.q3),
                 policy_color(g.policy), "#333");
        svg.line(cx - bw / 2, y_of(s.median), cx + bw / 2, y_of(s.median), "#111", 2);
        for (double o : s.outliers) svg.circle(cx, y_of(o), 2.5, "#d93025");
        svg.text(cx, top + plot_h + 14, policy_display_name(g.policy), 8, "middle",
                 "#555");
        const std::string cat = category_name(g.category);
        if (cat != last_cat) {
            svg.text(cx, top + plot_h + 30, cat, 11, "middle");
            last_cat = cat;
        }
    }
    svg.text(14, top + plot_h / 2, "APFD (%)", 11, "middle");
    return {svg.finish(), csv};
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

}  // namespace

std::vector<std::string> emit_report(const std::vector<MetricsRecord>& metrics,
                                     const PipelineLog* log,
                                     const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    const auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = out_dir + "/" + name;
        write_file(path, content);
        written.push_back(path);
    };

    const Table1 table = compute_table1(metrics);
    emit("table1.txt", table1_text(table));
    emit("table1.csv", table1_csv(table));

    const FigureFiles f1 = fig1_apfd_bars(metrics);
    emit("fig1.svg", f1.svg);
    emit("fig1.csv", f1.csv);
    if (log) {
        const FigureFiles f2 = fig2_defect_heatmap(*log);
        emit("fig2.svg", f2.svg);
        emit("fig2.csv", f2.csv);
    }
    const FigureFiles f3 = fig3_tet_lines(metrics);
    emit("fig3.svg", f3.svg);
    emit("fig3.csv", f3.csv);
    const FigureFiles f4 = fig4_overhead_breakdown(metrics);
    emit("fig4.svg", f4.svg);
    emit("fig4.csv", f4.csv);
    const FigureFiles f5 = fig5_apfd_boxplot(metrics);
    emit("fig5.svg", f5.svg);
    emit("fig5.csv", f5.csv);
    return written;
}

}  // namespace qprior

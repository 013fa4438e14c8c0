#include "qprior/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "qprior/ingest.hpp"
#include "qprior/rng.hpp"
#include "qprior/util.hpp"

namespace qprior {

namespace {

// Fixed so significance results are reproducible across runs and platforms.
constexpr std::uint64_t kSignificanceSeed = 0x9d2c5680aull;
constexpr std::size_t kSignificanceResamples = 10000;

}  // namespace

ApfdResult apfd(const Ordering& ordering, const FaultMatrix& faults) {
    const FaultMatrix work = faults.without_undetectable();
    const std::size_t m = work.fault_count();
    if (m == 0) throw NoFaults("no detectable faults to score");
    const std::size_t n = ordering.sequence.size();
    if (n == 0) throw std::invalid_argument("empty ordering");

    ApfdResult result;
    result.tf.assign(m, 0);
    std::size_t found = 0;
    for (std::size_t pos = 0; pos < n && found < m; ++pos) {
        const auto* row = work.row(ordering.sequence[pos]);
        if (!row) continue;  // sequence may mention tests absent from the matrix
        for (std::size_t j = 0; j < m; ++j) {
            if (result.tf[j] == 0 && (*row)[j]) {
                result.tf[j] = pos + 1;
                ++found;
            }
        }
    }
    if (found < m)
        throw std::invalid_argument(
            "ordering does not cover the tests detecting every fault");

    double tf_sum = 0.0;
    for (std::size_t v : result.tf) tf_sum += static_cast<double>(v);
    result.apfd = 1.0 - tf_sum / (static_cast<double>(n) * static_cast<double>(m)) +
                  1.0 / (2.0 * static_cast<double>(n));
    return result;
}

double tet(const Ordering& ordering, const FaultMatrix& faults,
           const std::vector<TestCaseRecord>& records) {
    std::map<std::string, double> time_of;
    for (const auto& rec : records) time_of[rec.id] = rec.exec_time;

    const FaultMatrix work = faults.without_undetectable();
    const std::size_t m = work.fault_count();
    std::vector<bool> seen(m, false);
    std::size_t found = 0;
    double elapsed = 0.0;
    for (const auto& id : ordering.sequence) {
        const auto it = time_of.find(id);
        if (it == time_of.end())
            throw std::invalid_argument("ordering references unknown test '" + id + "'");
        elapsed += it->second;
        if (m == 0) continue;  // no faults: fall through to full-suite time
        const auto* row = work.row(id);
        if (row) {
            for (std::size_t j = 0; j < m; ++j) {
                if (!seen[j] && (*row)[j]) {
                    seen[j] = true;
                    ++found;
                }
            }
        }
        if (found == m) return elapsed;
    }
    if (m != 0 && found < m)
        throw std::invalid_argument(
            "ordering does not cover the tests detecting every fault");
    return elapsed;
}

double paired_significance(const std::vector<double>& a,
                           const std::vector<double>& b) {
    if (a.size() != b.size())
        throw LengthMismatch("paired samples differ in length: " +
                             std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    if (a.size() < 5)
        throw LengthMismatch("paired significance needs at least 5 pairs, got " +
                             std::to_string(a.size()));
    const std::size_t n = a.size();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
    double mean = 0.0;
    for (double d : diff) mean += d;
    mean /= static_cast<double>(n);
    const double observed = std::abs(mean);

    Rng rng(kSignificanceSeed);
    std::size_t at_least = 0;
    for (std::size_t r = 0; r < kSignificanceResamples; ++r) {
        double sum = 0.0;
        for (double d : diff) sum += rng.bernoulli(0.5) ? -d : d;
        if (std::abs(sum / static_cast<double>(n)) >= observed) ++at_least;
    }
    return static_cast<double>(at_least + 1) /
           static_cast<double>(kSignificanceResamples + 1);
}

std::vector<AggregateRow> aggregate(const std::vector<MetricsRecord>& metrics) {
    if (metrics.empty())
        throw std::invalid_argument("aggregate needs at least one record");
    std::map<std::pair<int, int>, std::vector<const MetricsRecord*>> groups;
    for (const auto& rec : metrics) {
        const SuiteCategory cat = categorize_suite(rec.n);
        groups[{static_cast<int>(rec.policy), static_cast<int>(cat)}].push_back(&rec);
    }
    std::vector<AggregateRow> rows;
    for (const auto& [key, members] : groups) {
        AggregateRow row;
        row.policy = static_cast<Policy>(key.first);
        row.category = static_cast<SuiteCategory>(key.second);
        row.count = members.size();
        double apfd_sum = 0.0, tet_sum = 0.0, ovh_sum = 0.0;
        for (const auto* rec : members) {
            apfd_sum += rec->apfd;
            tet_sum += rec->tet;
            ovh_sum += rec->overhead.total();
        }
        const double k = static_cast<double>(members.size());
        row.mean_apfd = apfd_sum / k;
        row.mean_tet = tet_sum / k;
        row.mean_overhead_total = ovh_sum / k;
        double var = 0.0;
        for (const auto* rec : members) {
            const double d = rec->apfd - row.mean_apfd;
            var += d * d;
        }
        row.std_apfd = std::sqrt(var / k);
        rows.push_back(row);
    }
    return rows;  // map iteration is already (policy, category) sorted
}

namespace {

const char* kMetricsHeader =
    "policy,suite_id,category,seed,n,m,apfd,tet,overhead_total,overhead_solve,"
    "overhead_feature_extraction,overhead_prediction,overhead_qubo_build,"
    "overhead_serialize_transfer,overhead_parse_order";

std::vector<std::string> split_line(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ParseError("bad numeric cell '" + s + "'");
    return v;
}

}  // namespace

std::string metrics_to_csv(const std::vector<MetricsRecord>& metrics) {
    std::string out = kMetricsHeader;
    out.push_back('\n');
    for (const auto& rec : metrics) {
        const auto& o = rec.overhead;
        out += policy_name(rec.policy);
        out.push_back(',');
        out += rec.suite_id;
        out.push_back(',');
        out += category_name(categorize_suite(rec.n));
        out.push_back(',');
        out += std::to_string(rec.seed);
        out.push_back(',');
        out += std::to_string(rec.n);
        out.push_back(',');
        out += std::to_string(rec.m);
        for (double v : {rec.apfd, rec.tet, o.total(), o.solve, o.feature_extraction,
                         o.prediction, o.qubo_build, o.serialize_transfer,
                         o.parse_order}) {
            out.push_back(',');
            out += detail::format_double(v);
        }
        out.push_back('\n');
    }
    return out;
}

std::vector<MetricsRecord> metrics_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty metrics csv");
    if (split_line(line) != split_line(kMetricsHeader))
        throw SchemaError("metrics csv header mismatch");
    std::vector<MetricsRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_line(line);
        if (cells.size() != 15)
            throw ParseError("metrics csv line " + std::to_string(line_no) + " has " +
                             std::to_string(cells.size()) + " cells, expected 15");
        MetricsRecord rec;
        rec.policy = policy_from_name(cells[0]);
        rec.suite_id = cells[1];
        // cells[2] (category) is derived from n; ignored on load.
        rec.seed = std::stoull(cells[3]);
        rec.n = std::stoul(cells[4]);
        rec.m = std::stoul(cells[5]);
        rec.apfd = to_double(cells[6]);
        rec.tet = to_double(cells[7]);
        // cells[8] is the stored total; components follow.
        rec.overhead.solve = to_double(cells[9]);
        rec.overhead.feature_extraction = to_double(cells[10]);
        rec.overhead.prediction = to_double(cells[11]);
        rec.overhead.qubo_build = to_double(cells[12]);
        rec.overhead.serialize_transfer = to_double(cells[13]);
        rec.overhead.parse_order = to_double(cells[14]);
        const double stored_total = to_double(cells[8]);
        if (std::abs(stored_total - rec.overhead.total()) > 1e-6)
            throw ParseError("metrics csv line " + std::to_string(line_no) +
                             ": overhead components do not sum to total");
        out.push_back(std::move(rec));
    }
    return out;
}

void save_metrics(const std::vector<MetricsRecord>& metrics, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << metrics_to_csv(metrics);
}

std::vector<MetricsRecord> load_metrics(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return metrics_from_csv(buf.str());
}

}  // namespace qprior

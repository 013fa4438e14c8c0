#include "qprior/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qprior/rng.hpp"
#include "qprior/util.hpp"

namespace qprior {

namespace detail {

std::string format_double(double v) {
    if (std::isnan(v)) throw std::invalid_argument("format_double: nan");
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

}  // namespace detail

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_numeric_cell(const std::string& raw, const std::string& where) {
    const std::string cell = trim(raw);
    if (cell.empty()) return kMissing;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw ParseError("bad numeric value '" + cell + "' in " + where);
    return v;
}

std::set<std::string> parse_id_list(const std::string& raw) {
    std::set<std::string> out;
    for (const auto& part : split(raw, ';')) {
        const std::string id = trim(part);
        if (!id.empty()) out.insert(id);
    }
    return out;
}

std::vector<std::string> expected_csv_header() {
    std::vector<std::string> cols;
    cols.push_back("id");
    for (const auto& f : canonical_feature_names()) cols.push_back(f);
    cols.push_back("coverage");
    cols.push_back("detects");
    return cols;
}

std::string basename_no_ext(const std::string& path) {
    const std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const std::size_t dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return base;
}

Suite suite_from_records(std::string suite_id, std::vector<TestCaseRecord> records) {
    Suite s;
    s.id = std::move(suite_id);
    s.faults = FaultMatrix::from_records(records);
    s.records = std::move(records);
    return s;
}

FeatureNames shared_canonical_names() {
    static const FeatureNames names =
        std::make_shared<const std::vector<std::string>>(canonical_feature_names());
    return names;
}

std::string join(const std::set<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out.push_back(';');
        out += id;
    }
    return out;
}

}  // namespace

std::size_t Dataset::record_count() const {
    std::size_t n = 0;
    for (const auto& s : suites) n += s.records.size();
    return n;
}

std::vector<const TestCaseRecord*> Dataset::all_records() const {
    std::vector<const TestCaseRecord*> out;
    out.reserve(record_count());
    for (const auto& s : suites)
        for (const auto& r : s.records) out.push_back(&r);
    return out;
}

FileFormat format_from_name(const std::string& name) {
    std::string key = name;
    const auto dot = key.rfind('.');
    if (dot != std::string::npos) key = key.substr(dot + 1);
    if (key == "csv") return FileFormat::csv;
    if (key == "json" || key == "jsonl") return FileFormat::json;
    throw ConfigError("unknown file format '" + name + "' (expected csv or json)");
}

Dataset dataset_from_csv_text(const std::string& text, const std::string& suite_id) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty csv input");

    const auto expected = expected_csv_header();
    const auto header = split(trim(line), ',');
    if (header.size() != expected.size())
        throw SchemaError("csv header has " + std::to_string(header.size()) +
                          " columns, expected " + std::to_string(expected.size()));
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (trim(header[i]) != expected[i])
            throw SchemaError("csv column " + std::to_string(i) + " is '" +
                              trim(header[i]) + "', expected '" + expected[i] + "'");
    }

    const FeatureNames names = shared_canonical_names();
    const std::size_t n_features = names->size();
    std::vector<TestCaseRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != expected.size())
            throw ParseError("line " + std::to_string(line_no) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(expected.size()));
        TestCaseRecord rec;
        rec.id = trim(cells[0]);
        if (rec.id.empty())
            throw ParseError("line " + std::to_string(line_no) + " has an empty id");
        std::vector<double> values(n_features);
        for (std::size_t f = 0; f < n_features; ++f)
            values[f] = parse_numeric_cell(
                cells[1 + f], "line " + std::to_string(line_no) + " column " + (*names)[f]);
        rec.features = FeatureVector(names, std::move(values));
        rec.coverage = parse_id_list(cells[1 + n_features]);
        rec.detects = parse_id_list(cells[2 + n_features]);
        rec.exec_time = rec.features.by_name("exec_time");
        rec.label = !rec.detects.empty();
        records.push_back(std::move(rec));
    }

    Dataset ds;
    ds.feature_names = names;
    ds.suites.push_back(suite_from_records(suite_id, std::move(records)));
    return ds;
}

namespace {

TestCaseRecord record_from_json(const nlohmann::json& obj, const FeatureNames& names) {
    if (!obj.is_object()) throw ParseError("json record is not an object");
    TestCaseRecord rec;
    if (!obj.contains("id") || !obj["id"].is_string())
        throw SchemaError("json record lacks a string 'id'");
    rec.id = obj["id"].get<std::string>();
    std::vector<double> values;
    values.reserve(names->size());
    for (const auto& f : *names) {
        if (!obj.contains(f) || obj[f].is_null()) {
            values.push_back(kMissing);
        } else if (obj[f].is_number()) {
            values.push_back(obj[f].get<double>());
        } else {
            throw ParseError("field '" + f + "' of record '" + rec.id +
                             "' is not numeric");
        }
    }
    rec.features = FeatureVector(names, std::move(values));
    auto read_list = [&](const char* key) {
        std::set<std::string> out;
        if (!obj.contains(key)) return out;
        if (!obj[key].is_array())
            throw ParseError(std::string("field '") + key + "' of record '" + rec.id +
                             "' is not an array");
        for (const auto& item : obj[key]) {
            if (!item.is_string())
                throw ParseError(std::string("field '") + key + "' of record '" +
                                 rec.id + "' holds a non-string entry");
            out.insert(item.get<std::string>());
        }
        return out;
    };
    rec.coverage = read_list("coverage");
    rec.detects = read_list("detects");
    rec.exec_time = rec.features.by_name("exec_time");
    rec.label = !rec.detects.empty();
    return rec;
}

}  // namespace

Dataset dataset_from_json_text(const std::string& text, const std::string& suite_id) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid json: ") + e.what());
    }
    const FeatureNames names = shared_canonical_names();
    Dataset ds;
    ds.feature_names = names;
    if (doc.is_array()) {
        std::vector<TestCaseRecord> records;
        for (const auto& obj : doc) records.push_back(record_from_json(obj, names));
        ds.suites.push_back(suite_from_records(suite_id, std::move(records)));
        return ds;
    }
    if (doc.is_object()) {
        for (const auto& [key, value] : doc.items()) {
            if (!value.is_array())
                throw SchemaError("suite '" + key + "' is not an array of records");
            std::vector<TestCaseRecord> records;
            for (const auto& obj : value) records.push_back(record_from_json(obj, names));
            ds.suites.push_back(suite_from_records(key, std::move(records)));
        }
        return ds;
    }
    throw SchemaError("json input must be an array of records or a suite map");
}

Dataset load_dataset(const std::string& path, FileFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string suite_id = basename_no_ext(path);
    return format == FileFormat::csv ? dataset_from_csv_text(buf.str(), suite_id)
                                     : dataset_from_json_text(buf.str(), suite_id);
}

std::string dataset_to_csv_text(const Dataset& dataset) {
    const auto header = expected_csv_header();
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out.push_back(',');
        out += header[i];
    }
    out.push_back('\n');
    for (const auto& suite : dataset.suites) {
        for (const auto& rec : suite.records) {
            out += rec.id;
            for (double v : rec.features.values()) {
                out.push_back(',');
                if (!is_missing(v)) out += detail::format_double(v);
            }
            out.push_back(',');
            out += join(rec.coverage);
            out.push_back(',');
            out += join(rec.detects);
            out.push_back('\n');
        }
    }
    return out;
}

namespace {

nlohmann::json record_to_json(const TestCaseRecord& rec) {
    nlohmann::json obj;
    obj["id"] = rec.id;
    const auto& names = rec.features.names();
    for (std::size_t f = 0; f < names.size(); ++f) {
        const double v = rec.features[f];
        if (is_missing(v))
            obj[names[f]] = nullptr;
        else
            obj[names[f]] = v;
    }
    obj["coverage"] = rec.coverage;
    obj["detects"] = rec.detects;
    return obj;
}

}  // namespace

std::string dataset_to_json_text(const Dataset& dataset) {
    if (dataset.suites.size() == 1) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& rec : dataset.suites.front().records)
            arr.push_back(record_to_json(rec));
        return arr.dump(2) + "\n";
    }
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& suite : dataset.suites) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& rec : suite.records) arr.push_back(record_to_json(rec));
        doc[suite.id] = std::move(arr);
    }
    return doc.dump(2) + "\n";
}

void save_dataset(const Dataset& dataset, const std::string& path, FileFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << (format == FileFormat::csv ? dataset_to_csv_text(dataset)
                                      : dataset_to_json_text(dataset));
}

Dataset impute_missing(const Dataset& dataset) {
    const std::size_t n_features =
        dataset.feature_names ? dataset.feature_names->size() : canonical_feature_names().size();
    std::vector<double> sums(n_features, 0.0);
    std::vector<std::size_t> counts(n_features, 0);
    for (const auto* rec : dataset.all_records()) {
        for (std::size_t f = 0; f < n_features; ++f) {
            const double v = rec->features[f];
            if (!is_missing(v)) {
                sums[f] += v;
                ++counts[f];
            }
        }
    }

    Dataset out = dataset;
    const std::size_t exec_idx = [&] {
        const auto& names = canonical_feature_names();
        return static_cast<std::size_t>(
            std::find(names.begin(), names.end(), "exec_time") - names.begin());
    }();
    for (auto& suite : out.suites) {
        for (auto& rec : suite.records) {
            auto& values = rec.features.mutable_values();
            for (std::size_t f = 0; f < n_features; ++f) {
                if (!is_missing(values[f])) continue;
                if (counts[f] == 0)
                    throw AllMissingColumn("feature '" + rec.features.names()[f] +
                                           "' has no observed values to impute from");
                values[f] = sums[f] / static_cast<double>(counts[f]);
                if (f == exec_idx && is_missing(rec.exec_time))
                    rec.exec_time = values[f];
            }
        }
    }
    return out;
}

std::pair<Dataset, std::size_t> drop_low_coverage(const Dataset& dataset,
                                                  std::size_t min_elements) {
    Dataset out;
    out.feature_names = dataset.feature_names;
    out.normalization_params = dataset.normalization_params;
    std::size_t dropped = 0;
    for (const auto& suite : dataset.suites) {
        std::vector<TestCaseRecord> kept;
        for (const auto& rec : suite.records) {
            if (rec.coverage.size() >= min_elements)
                kept.push_back(rec);
            else
                ++dropped;
        }
        Suite s;
        s.id = suite.id;
        std::vector<std::string> kept_ids;
        for (const auto& r : kept) kept_ids.push_back(r.id);
        s.faults = suite.faults.restricted_to(kept_ids);
        s.records = std::move(kept);
        out.suites.push_back(std::move(s));
    }
    return {std::move(out), dropped};
}

Dataset fit_normalize(const Dataset& dataset) {
    const std::size_t n_features =
        dataset.feature_names ? dataset.feature_names->size() : canonical_feature_names().size();
    std::vector<MinMax> params(n_features);
    bool seen = false;
    for (const auto* rec : dataset.all_records()) {
        for (std::size_t f = 0; f < n_features; ++f) {
            const double v = rec->features[f];
            if (is_missing(v))
                throw std::invalid_argument(
                    "fit_normalize requires an imputed dataset (missing value in '" +
                    rec->id + "')");
            if (!seen) {
                params[f].min = params[f].max = v;
            } else {
                params[f].min = std::min(params[f].min, v);
                params[f].max = std::max(params[f].max, v);
            }
        }
        seen = true;
    }
    Dataset out = apply_normalization(dataset, params);
    out.normalization_params = std::move(params);
    return out;
}

Dataset apply_normalization(const Dataset& dataset, const std::vector<MinMax>& params) {
    Dataset out = dataset;
    for (auto& suite : out.suites) {
        for (auto& rec : suite.records) {
            auto& values = rec.features.mutable_values();
            if (values.size() != params.size())
                throw std::invalid_argument("normalization params width mismatch");
            for (std::size_t f = 0; f < values.size(); ++f) {
                const double span = params[f].max - params[f].min;
                values[f] = span == 0.0 ? 0.0 : (values[f] - params[f].min) / span;
            }
        }
    }
    out.normalization_params = params;
    return out;
}

namespace {

// Flat view of a dataset: (suite index, record index) pairs in dataset order.
struct RecordRef {
    std::size_t suite;
    std::size_t record;
};

std::vector<RecordRef> flat_refs(const Dataset& dataset) {
    std::vector<RecordRef> refs;
    for (std::size_t s = 0; s < dataset.suites.size(); ++s)
        for (std::size_t r = 0; r < dataset.suites[s].records.size(); ++r)
            refs.push_back({s, r});
    return refs;
}

Dataset dataset_from_refs(const Dataset& source, const std::vector<RecordRef>& refs) {
    Dataset out;
    out.feature_names = source.feature_names;
    out.normalization_params = source.normalization_params;
    // Group by suite, preserving the source's record order within each suite.
    std::vector<std::vector<std::size_t>> by_suite(source.suites.size());
    for (const auto& ref : refs) by_suite[ref.suite].push_back(ref.record);
    for (std::size_t s = 0; s < source.suites.size(); ++s) {
        if (by_suite[s].empty()) continue;
        std::sort(by_suite[s].begin(), by_suite[s].end());
        Suite suite;
        suite.id = source.suites[s].id;
        std::vector<std::string> ids;
        for (std::size_t r : by_suite[s]) {
            suite.records.push_back(source.suites[s].records[r]);
            ids.push_back(suite.records.back().id);
        }
        suite.faults = source.suites[s].faults.restricted_to(ids);
        out.suites.push_back(std::move(suite));
    }
    return out;
}

}  // namespace

std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset,
                                             const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must lie in (0,1)");
    const auto refs = flat_refs(dataset);
    std::vector<std::size_t> positives, negatives;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const auto& rec = dataset.suites[refs[i].suite].records[refs[i].record];
        (rec.label ? positives : negatives).push_back(i);
    }
    const double test_fraction = 1.0 - spec.train_fraction;
    std::vector<RecordRef> train_refs, test_refs;
    auto deal = [&](std::vector<std::size_t>& members, std::uint64_t stream) {
        Rng rng(derive_seed(spec.seed, stream));
        rng.shuffle(members);
        // Nudge before the floor so e.g. 0.2 * 70 lands on 14, not 13.999... -> 13.
        const std::size_t n_test = static_cast<std::size_t>(
            std::floor(static_cast<double>(members.size()) * test_fraction + 1e-9));
        for (std::size_t i = 0; i < members.size(); ++i)
            (i < n_test ? test_refs : train_refs).push_back(refs[members[i]]);
    };
    deal(negatives, 0);
    deal(positives, 1);
    return {dataset_from_refs(dataset, train_refs),
            dataset_from_refs(dataset, test_refs)};
}

std::vector<Dataset> kfold_partition(const Dataset& dataset, std::size_t k,
                                     std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("kfold_partition needs k >= 2");
    if (k > dataset.record_count())
        throw KTooLarge("k = " + std::to_string(k) + " exceeds the " +
                        std::to_string(dataset.record_count()) + " available records");
    const auto refs = flat_refs(dataset);
    std::vector<std::size_t> positives, negatives;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const auto& rec = dataset.suites[refs[i].suite].records[refs[i].record];
        (rec.label ? positives : negatives).push_back(i);
    }
    // Deal each class's shuffled members one at a time into the currently
    // smallest fold so overall fold sizes never differ by more than one.
    std::vector<std::vector<RecordRef>> fold_refs(k);
    auto deal = [&](std::vector<std::size_t>& members, std::uint64_t stream) {
        Rng rng(derive_seed(seed, stream));
        rng.shuffle(members);
        for (std::size_t m : members) {
            std::size_t target = 0;
            for (std::size_t f = 1; f < k; ++f)
                if (fold_refs[f].size() < fold_refs[target].size()) target = f;
            fold_refs[target].push_back(refs[m]);
        }
    };
    deal(negatives, 0);
    deal(positives, 1);
    std::vector<Dataset> folds;
    folds.reserve(k);
    for (auto& fr : fold_refs) folds.push_back(dataset_from_refs(dataset, fr));
    return folds;
}

Dataset merge_folds(const std::vector<Dataset>& folds, std::size_t hold_out) {
    if (hold_out >= folds.size())
        throw std::out_of_range("hold_out fold index out of range");
    Dataset out;
    std::map<std::string, std::size_t> suite_index;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        if (f == hold_out) continue;
        if (!out.feature_names) {
            out.feature_names = folds[f].feature_names;
            out.normalization_params = folds[f].normalization_params;
        }
        for (const auto& suite : folds[f].suites) {
            auto [it, fresh] = suite_index.emplace(suite.id, out.suites.size());
            if (fresh) {
                Suite s;
                s.id = suite.id;
                out.suites.push_back(std::move(s));
            }
            auto& dst = out.suites[it->second];
            dst.records.insert(dst.records.end(), suite.records.begin(),
                               suite.records.end());
        }
    }
    for (auto& suite : out.suites)
        suite.faults = FaultMatrix::from_records(suite.records);
    return out;
}

std::string module_of(const std::string& element_or_fault_id) {
    const std::size_t dot = element_or_fault_id.find('.');
    return dot == std::string::npos ? std::string() : element_or_fault_id.substr(0, dot);
}

namespace {

std::string padded(const char* prefix, std::size_t index, std::size_t total) {
    std::size_t width = 1;
    for (std::size_t v = total > 0 ? total - 1 : 0; v >= 10; v /= 10) ++width;
    std::string digits = std::to_string(index);
    while (digits.size() < width) digits.insert(digits.begin(), '0');
    return prefix + digits;
}

}  // namespace

Suite generate_synthetic_suite(const SyntheticConfig& config,
                               const std::string& suite_id) {
    if (config.n_tests == 0) throw std::invalid_argument("n_tests must be positive");
    if (config.n_code_elements == 0)
        throw std::invalid_argument("n_code_elements must be positive");
    if (!(config.redundancy >= 0.0 && config.redundancy < 1.0))
        throw std::invalid_argument("redundancy must lie in [0,1)");

    Rng rng(config.seed);
    const std::size_t n_modules =
        std::clamp<std::size_t>(config.n_tests / 8, 2, 12);
    const std::size_t n_elems = config.n_code_elements;

    // Element e lives in a contiguous module block; hot modules carry more
    // churn, which is where faults will concentrate.
    std::vector<std::size_t> elem_module(n_elems);
    for (std::size_t e = 0; e < n_elems; ++e)
        elem_module[e] = e * n_modules / n_elems;
    // Zipf-profile module heat (ranks shuffled per seed): a consistent hot
    // head concentrates churn the way a few busy subsystems do in practice.
    std::vector<std::size_t> heat_rank(n_modules);
    std::iota(heat_rank.begin(), heat_rank.end(), std::size_t{0});
    rng.shuffle(heat_rank);
    std::vector<double> module_heat(n_modules);
    for (std::size_t m = 0; m < n_modules; ++m)
        module_heat[m] = 3.0 / std::pow(1.0 + static_cast<double>(heat_rank[m]), 1.3);
    std::vector<double> elem_churn(n_elems), elem_complexity(n_elems);
    for (std::size_t e = 0; e < n_elems; ++e) {
        elem_churn[e] = module_heat[elem_module[e]] * rng.pareto(config.churn_alpha, 1.0);
        elem_complexity[e] = 1.0 + rng.pareto(2.5, 1.0);
    }
    std::vector<std::vector<std::size_t>> module_elems(n_modules);
    for (std::size_t e = 0; e < n_elems; ++e) module_elems[elem_module[e]].push_back(e);

    // Tests gravitate to hot modules: churny code accumulates regression tests,
    // and that surplus is exactly the redundancy a prioritizer must handle.
    std::vector<double> module_test_weight(n_modules);
    for (std::size_t m = 0; m < n_modules; ++m)
        module_test_weight[m] = 1.0 + module_heat[m];
    std::vector<std::size_t> test_home(config.n_tests);
    // One guaranteed test per module, the rest dealt by weight.
    for (std::size_t m = 0; m < n_modules && m < config.n_tests; ++m) test_home[m] = m;
    const double total_weight =
        std::accumulate(module_test_weight.begin(), module_test_weight.end(), 0.0);
    for (std::size_t t = std::min(n_modules, config.n_tests); t < config.n_tests; ++t) {
        double pick = rng.uniform01() * total_weight;
        std::size_t m = 0;
        while (m + 1 < n_modules && pick > module_test_weight[m]) {
            pick -= module_test_weight[m];
            ++m;
        }
        test_home[t] = m;
    }

    // Within-module element inclusion rate q chosen so two same-module tests
    // have expected Jaccard overlap ~= redundancy: J = q/(2-q) => q = 2J/(1+J).
    const double q_in = 2.0 * config.redundancy / (1.0 + config.redundancy);
    const double q_out = 0.02;

    std::vector<std::set<std::string>> coverage(config.n_tests);
    std::vector<std::vector<std::size_t>> covered_elems(config.n_tests);
    std::vector<std::vector<std::size_t>> elem_coverers(n_elems);
    std::vector<std::string> elem_id(n_elems);
    for (std::size_t e = 0; e < n_elems; ++e) {
        std::size_t local = e - module_elems[elem_module[e]].front();
        elem_id[e] = "mod" + std::to_string(elem_module[e]) + "." +
                     padded("e", local, module_elems[elem_module[e]].size());
    }
    for (std::size_t t = 0; t < config.n_tests; ++t) {
        const std::size_t home = test_home[t];
        for (std::size_t e = 0; e < n_elems; ++e) {
            const double q = elem_module[e] == home ? q_in : q_out;
            if (rng.bernoulli(q)) covered_elems[t].push_back(e);
        }
        if (covered_elems[t].empty()) {
            const auto& home_elems = module_elems[home];
            covered_elems[t].push_back(home_elems[rng.uniform_index(home_elems.size())]);
        }
        for (std::size_t e : covered_elems[t]) {
            coverage[t].insert(elem_id[e]);
            elem_coverers[e].push_back(t);
        }
    }

    // Per-test mutation kill scores, drawn before fault placement so detection
    // is reproducible regardless of fault count.
    std::vector<double> kill(config.n_tests);
    for (auto& ks : kill) ks = rng.uniform(0.35, 0.95);

    // Faults land on covered elements with probability ~ churn^fault_skew.
    std::vector<std::size_t> candidates;
    std::vector<double> weights;
    for (std::size_t e = 0; e < n_elems; ++e) {
        if (elem_coverers[e].empty()) continue;
        candidates.push_back(e);
        weights.push_back(std::pow(elem_churn[e], config.fault_skew));
    }
    if (candidates.size() < config.n_faults)
        throw std::invalid_argument("not enough covered code elements to host " +
                                    std::to_string(config.n_faults) + " faults");
    std::vector<std::size_t> fault_host;
    {
        std::vector<std::size_t> pool = candidates;
        std::vector<double> pool_w = weights;
        for (std::size_t f = 0; f < config.n_faults; ++f) {
            const double total = std::accumulate(pool_w.begin(), pool_w.end(), 0.0);
            double pick = rng.uniform01() * total;
            std::size_t idx = 0;
            while (idx + 1 < pool.size() && pick > pool_w[idx]) {
                pick -= pool_w[idx];
                ++idx;
            }
            fault_host.push_back(pool[idx]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
            pool_w.erase(pool_w.begin() + static_cast<std::ptrdiff_t>(idx));
        }
    }

    // Name faults per module ("mod3.f0", ...) so downstream reports can group
    // them; detection requires covering the host element and a kill-score roll.
    std::vector<std::size_t> per_module_count(n_modules, 0);
    std::vector<std::set<std::string>> detects(config.n_tests);
    for (std::size_t f = 0; f < config.n_faults; ++f) {
        const std::size_t host = fault_host[f];
        const std::size_t m = elem_module[host];
        const std::string fid =
            "mod" + std::to_string(m) + ".f" + std::to_string(per_module_count[m]++);
        bool detected = false;
        for (std::size_t t : elem_coverers[host]) {
            if (rng.bernoulli(kill[t])) {
                detects[t].insert(fid);
                detected = true;
            }
        }
        if (!detected) {
            // Force the strongest covering test so every fault stays reachable.
            std::size_t best = elem_coverers[host].front();
            for (std::size_t t : elem_coverers[host])
                if (kill[t] > kill[best]) best = t;
            detects[best].insert(fid);
        }
    }

    const FeatureNames names = shared_canonical_names();
    std::vector<TestCaseRecord> records;
    records.reserve(config.n_tests);
    auto jitter = [&](double v) {
        return std::max(0.0, v * (1.0 + config.noise * rng.normal(0.0, 1.0)));
    };
    for (std::size_t t = 0; t < config.n_tests; ++t) {
        TestCaseRecord rec;
        rec.id = padded("t", t, config.n_tests);
        double churn_sum = 0.0, complexity_sum = 0.0;
        std::set<std::size_t> modules_touched;
        for (std::size_t e : covered_elems[t]) {
            churn_sum += elem_churn[e];
            complexity_sum += elem_complexity[e];
            modules_touched.insert(elem_module[e]);
        }
        const double n_cov = static_cast<double>(covered_elems[t].size());
        const double line_cov = n_cov / static_cast<double>(n_elems);
        const double exec = 0.05 + 0.02 * n_cov * (1.0 + 0.3 * rng.uniform01());
        std::vector<double> values(names->size());
        for (std::size_t fi = 0; fi < names->size(); ++fi) {
            const std::string& f = (*names)[fi];
            if (f == "cyclomatic_complexity")
                values[fi] = jitter(complexity_sum / n_cov);
            else if (f == "code_churn")
                values[fi] = jitter(churn_sum);
            else if (f == "dependency_degree")
                values[fi] = jitter(static_cast<double>(modules_touched.size()));
            else if (f == "exec_time")
                values[fi] = exec;
            else if (f == "line_coverage")
                values[fi] = line_cov;
            else if (f == "branch_coverage")
                values[fi] = line_cov * rng.uniform(0.6, 0.9);
            else if (f == "mutation_kill_score")
                values[fi] = kill[t];
            else
                values[fi] = 0.0;
        }
        rec.features = FeatureVector(names, std::move(values));
        rec.coverage = std::move(coverage[t]);
        rec.detects = std::move(detects[t]);
        rec.exec_time = exec;
        rec.label = !rec.detects.empty();
        records.push_back(std::move(rec));
    }

    return suite_from_records(suite_id, std::move(records));
}

Dataset dataset_from_suite(Suite suite) {
    Dataset ds;
    ds.feature_names = suite.records.empty()
                           ? shared_canonical_names()
                           : suite.records.front().features.names_ptr();
    ds.suites.push_back(std::move(suite));
    return ds;
}

}  // namespace qprior

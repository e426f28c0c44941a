#include "exionet/pipeline.hpp"

#include "exionet/csv.hpp"
#include "exionet/errors.hpp"
#include "exionet/export_io.hpp"
#include "exionet/footprint_engine.hpp"
#include "exionet/hashing.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace exionet::pipeline {

namespace {

std::mutex log_mutex;

void log(const std::string& stage, const std::string& message)
{
    std::lock_guard lock(log_mutex);
    std::cerr << "exionet " << stage << ": " << message << '\n';
}

/// Writes only when the bytes differ, so untouched outputs keep their timestamps.
bool write_if_changed(const fs::path& path, const std::string& content)
{
    if (fs::is_regular_file(path)) {
        if (csv::read_text(path) == content) {
            return false;
        }
    }
    csv::write_text(path, content);
    return true;
}

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn)
{
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> threads;
        const auto extra = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1))) - (count > 0 ? 1 : 0);
        for (std::size_t t = 0; t < extra; ++t) {
            threads.emplace_back(worker);
        }
        worker();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

template <typename Body>
int run_stage(const std::string& stage, Body&& body)
{
    try {
        body();
        return 0;
    } catch (const Error& e) {
        log(stage, std::string("error: ") + e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        log(stage, std::string("error: ") + e.what());
        return 1;
    }
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Content-hash cache: entry name -> {key, outputs: {path: sha256}, extra}.

class Cache {
public:
    explicit Cache(fs::path dir) : path_(std::move(dir) / "manifest.json")
    {
        if (fs::is_regular_file(path_)) {
            try {
                entries_ = json::parse(csv::read_text(path_));
            } catch (const json::exception&) {
                entries_ = json::object();
            }
        }
        if (!entries_.is_object()) {
            entries_ = json::object();
        }
    }

    /// True when the key matches and every recorded output still has its recorded hash.
    bool valid(const std::string& name, const std::string& key) const
    {
        std::lock_guard lock(mutex_);
        if (!entries_.contains(name) || entries_[name].value("key", "") != key) {
            return false;
        }
        for (const auto& [file, hash] : entries_[name]["outputs"].items()) {
            if (!fs::is_regular_file(file) || sha256_file(file) != hash.get<std::string>()) {
                return false;
            }
        }
        return true;
    }

    json extra(const std::string& name) const
    {
        std::lock_guard lock(mutex_);
        return entries_.contains(name) ? entries_[name].value("extra", json::object()) : json::object();
    }

    void record(const std::string& name, const std::string& key, const std::vector<fs::path>& outputs, json extra = json::object())
    {
        json files = json::object();
        for (const auto& out : outputs) {
            files[out.string()] = sha256_file(out);
        }
        std::lock_guard lock(mutex_);
        entries_[name] = json{{"key", key}, {"outputs", files}, {"extra", std::move(extra)}};
    }

    void save() const
    {
        std::lock_guard lock(mutex_);
        csv::write_text(path_, entries_.dump(2) + "\n");
    }

private:
    fs::path path_;
    json entries_ = json::object();
    mutable std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Config helpers

double to_double(const std::string& key, const std::string& text)
{
    try {
        return csv::parse_number(text, key, 0, 0);
    } catch (const DataError&) {
        throw UsageError("config key '" + key + "' expects a number, got '" + text + "'");
    }
}

int to_int(const std::string& key, const std::string& text)
{
    const double v = to_double(key, text);
    if (v != static_cast<double>(static_cast<int>(v))) {
        throw UsageError("config key '" + key + "' expects an integer, got '" + text + "'");
    }
    return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    for (auto& item : csv::split_line(text, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first != std::string::npos) {
            out.push_back(item.substr(first, last - first + 1));
        }
    }
    return out;
}

std::string aggregation_fingerprint(const ingest::AggregationMap& map)
{
    std::string text;
    for (const auto& label : map.aggregated_order) {
        text += label + "\n";
    }
    text += "--\n";
    for (const auto& [native, aggregated] : map.mapping) {
        text += native + "=" + aggregated + "\n";
    }
    return text;
}

std::optional<ingest::AggregationMap> load_aggregation(const RunConfig& config)
{
    if (config.aggregation_map.empty()) {
        return std::nullopt;
    }
    if (config.aggregation_map == "table_a2") {
        return ingest::AggregationMap::table_a2();
    }
    return ingest::AggregationMap::load(config.aggregation_map);
}

/// Timeframes touched by one invocation: the selected period alone, or every year
/// followed by every period.
std::vector<Timeframe> selected_timeframes(const RunConfig& config, const Selection& selection)
{
    if (selection.period) {
        return {Timeframe::period(config.period(*selection.period))};
    }
    return config.timeframes();
}

void write_report(const Layout& layout, const std::string& stage, const json& report)
{
    csv::write_text(layout.reports() / (stage + ".json"), report.dump(2) + "\n");
}

} // namespace

// ---------------------------------------------------------------------------
// RunConfig

std::vector<int> RunConfig::years() const
{
    std::vector<int> out;
    for (int y = first_year; y <= last_year; ++y) {
        out.push_back(y);
    }
    return out;
}

std::vector<Timeframe> RunConfig::timeframes() const
{
    std::vector<Timeframe> out;
    for (int y : years()) {
        out.push_back(Timeframe::year(y));
    }
    for (const auto& p : periods) {
        out.push_back(Timeframe::period(p));
    }
    return out;
}

const Period& RunConfig::period(const std::string& label) const
{
    for (const auto& p : periods) {
        if (p.label == label) {
            return p;
        }
    }
    throw UsageError("unknown period '" + label + "'");
}

void RunConfig::validate() const
{
    if (first_year > last_year) {
        throw UsageError("years: range " + std::to_string(first_year) + ".." + std::to_string(last_year) + " is empty");
    }
    if (first_year < ingest::first_supported_year || last_year > ingest::last_supported_year) {
        throw UsageError("years: " + std::to_string(first_year) + ".." + std::to_string(last_year) + " outside the data availability " +
                         std::to_string(ingest::first_supported_year) + ".." + std::to_string(ingest::last_supported_year));
    }
    for (const auto& p : periods) {
        if (p.start_year > p.end_year || p.start_year < first_year || p.end_year > last_year) {
            throw UsageError("period " + p.label + " (" + std::to_string(p.start_year) + ".." + std::to_string(p.end_year) +
                             ") is not contained in the configured years");
        }
        for (const auto& q : periods) {
            if (&p != &q && p.label == q.label) {
                throw UsageError("duplicate period label " + p.label);
            }
        }
        if (!p.label.empty() && std::all_of(p.label.begin(), p.label.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            throw UsageError("period label '" + p.label + "' must not look like a year");
        }
    }
    if (workspace.empty()) {
        throw UsageError("workspace is not set");
    }
    if (!fs::is_directory(workspace)) {
        throw DataError("workspace does not exist: " + workspace.string());
    }
    if (!aggregation_map.empty() && aggregation_map != "table_a2" && !fs::is_regular_file(aggregation_map)) {
        throw DataError("aggregation map not found: " + aggregation_map);
    }
    if (!(pagerank.damping > 0.0 && pagerank.damping < 1.0)) {
        throw UsageError("pagerank.damping must lie in (0, 1)");
    }
    if (!(pagerank.tol > 0.0) || pagerank.max_iter < 1) {
        throw UsageError("pagerank.tol must be positive and pagerank.max_iter at least 1");
    }
    if (!(tau >= -1.0 && tau <= 1.0)) {
        throw UsageError("inequality.tau must lie in [-1, 1]");
    }
    if (!(balance_epsilon >= 0.0) || !(epsilon_x >= 0.0) || min_weight < 0.0) {
        throw UsageError("balance.epsilon, footprint.epsilon_x and network.min_weight must be nonnegative");
    }
    if (jobs < 1) {
        throw UsageError("jobs must be at least 1");
    }
}

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys{
        "workspace",         "format",          "years",           "out",
        "aggregation_map",   "emission_accounts", "value_accounts", "emission_scale",
        "jobs",              "periods.mode",    "periods.list",    "balance.epsilon",
        "footprint.epsilon_x", "eeei.orientation", "inequality.rule", "inequality.tau",
        "network.min_weight", "pagerank.damping", "pagerank.tol",   "pagerank.max_iter",
    };
    return keys;
}

std::pair<int, int> parse_year_range(const std::string& text)
{
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const int y = std::stoi(text);
            return {y, y};
        }
        std::size_t used = 0;
        const int a = std::stoi(text.substr(0, dots), &used);
        const int b = std::stoi(text.substr(dots + 2));
        return {a, b};
    } catch (const std::exception&) {
        throw UsageError("bad year range '" + text + "' (expected A..B)");
    }
}

Period parse_period(const std::string& text, PeriodMode mode)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0) {
        throw UsageError("bad period '" + text + "' (expected LABEL:A..B)");
    }
    const auto [a, b] = parse_year_range(text.substr(colon + 1));
    return {text.substr(0, colon), a, b, mode};
}

RunConfig make_config(const config::Table& file_values, const fs::path& config_dir, const std::map<std::string, std::string>& overrides)
{
    const auto& keys = config_keys();
    struct Raw {
        std::vector<std::string> items;
        bool from_file = false;
    };
    std::map<std::string, Raw> values;
    for (const auto& [key, value] : file_values) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw UsageError("unknown config key '" + key + "'");
        }
        values[key] = {value.items, true};
    }
    for (const auto& [key, text] : overrides) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw UsageError("unknown config key '" + key + "'");
        }
        const bool list = key == "emission_accounts" || key == "value_accounts" || key == "periods.list";
        values[key] = {list ? split_list(text) : std::vector<std::string>{text}, false};
    }
    auto scalar = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = values.find(key);
        if (it == values.end() || it->second.items.empty()) {
            return std::nullopt;
        }
        if (it->second.items.size() != 1) {
            throw UsageError("config key '" + key + "' expects a single value");
        }
        return it->second.items.front();
    };
    auto path_value = [&](const std::string& key) -> std::optional<fs::path> {
        const auto text = scalar(key);
        if (!text) {
            return std::nullopt;
        }
        fs::path p(*text);
        if (values[key].from_file && p.is_relative()) {
            p = config_dir / p;
        }
        return p.lexically_normal();
    };

    RunConfig cfg;
    if (auto p = path_value("workspace")) cfg.workspace = *p;
    if (auto p = path_value("out")) cfg.out = *p;
    if (auto v = scalar("format")) cfg.format = ingest::parse_input_format(*v);
    if (auto v = scalar("years")) std::tie(cfg.first_year, cfg.last_year) = parse_year_range(*v);
    if (auto v = scalar("aggregation_map")) {
        cfg.aggregation_map = (*v == "table_a2" || v->empty()) ? *v : path_value("aggregation_map")->string();
    }
    if (values.count("emission_accounts")) cfg.emission_accounts = values["emission_accounts"].items;
    if (values.count("value_accounts")) cfg.value_accounts = values["value_accounts"].items;
    if (auto v = scalar("emission_scale")) cfg.emission_scale = to_double("emission_scale", *v);
    if (auto v = scalar("jobs")) cfg.jobs = to_int("jobs", *v);
    if (auto v = scalar("periods.mode")) cfg.period_mode = parse_period_mode(*v);
    if (auto v = scalar("balance.epsilon")) cfg.balance_epsilon = to_double("balance.epsilon", *v);
    if (auto v = scalar("footprint.epsilon_x")) cfg.epsilon_x = to_double("footprint.epsilon_x", *v);
    if (auto v = scalar("eeei.orientation")) cfg.orientation = equality::parse_orientation(*v);
    if (auto v = scalar("inequality.rule")) cfg.inequality_rule = network::parse_inequality_rule(*v);
    if (auto v = scalar("inequality.tau")) cfg.tau = to_double("inequality.tau", *v);
    if (auto v = scalar("network.min_weight")) cfg.min_weight = to_double("network.min_weight", *v);
    if (auto v = scalar("pagerank.damping")) cfg.pagerank.damping = to_double("pagerank.damping", *v);
    if (auto v = scalar("pagerank.tol")) cfg.pagerank.tol = to_double("pagerank.tol", *v);
    if (auto v = scalar("pagerank.max_iter")) cfg.pagerank.max_iter = to_int("pagerank.max_iter", *v);

    if (values.count("periods.list")) {
        cfg.periods_explicit = true;
        for (const auto& item : values["periods.list"].items) {
            cfg.periods.push_back(parse_period(item, cfg.period_mode));
        }
    } else {
        for (const auto& p : default_periods(cfg.period_mode)) {
            if (p.start_year >= cfg.first_year && p.end_year <= cfg.last_year) {
                cfg.periods.push_back(p);
            }
        }
    }
    return cfg;
}

fs::path Layout::cache() const
{
    if (const char* dir = std::getenv(cache_dir_env); dir != nullptr && *dir != '\0') {
        return fs::path(dir);
    }
    return root / ".cache";
}

// ---------------------------------------------------------------------------
// ingest

int cmd_ingest(const RunConfig& config)
{
    return run_stage("ingest", [&] {
        config.validate();
        const auto start = std::chrono::steady_clock::now();
        const Layout layout{config.out};
        Cache cache(layout.cache());
        const ingest::ParseOptions options{config.emission_accounts, config.value_accounts, config.emission_scale};

        json years = json::array();
        std::optional<ingest::RegionSchema> schema;
        std::size_t total_violations = 0;
        for (int year : config.years()) {
            const auto inputs = ingest::input_files(config.workspace, year, config.format);
            for (const auto& f : inputs) {
                if (!fs::is_regular_file(f)) {
                    throw DataError("missing file: " + f.string());
                }
            }
            Sha256 hasher;
            hasher.update("ingest-v1\n").update(ingest::to_string(config.format)).update("\n");
            for (const auto& a : options.emission_accounts) hasher.update("e:" + a + "\n");
            for (const auto& a : options.value_accounts) hasher.update("v:" + a + "\n");
            hasher.update(csv::format_number(config.emission_scale) + "\n" + csv::format_number(config.balance_epsilon) + "\n" +
                          csv::format_number(config.epsilon_x) + "\n");
            for (const auto& f : inputs) {
                hasher.update_file(f);
            }
            const auto key = hasher.hex_digest();
            const auto name = "ingest/" + std::to_string(year);
            const std::string y = std::to_string(year);
            const std::vector<fs::path> outputs{layout.canonical() / "index.csv", layout.canonical() / ("Z_" + y + ".csv"),
                                                layout.canonical() / ("Y_" + y + ".csv"), layout.canonical() / ("ext_" + y + ".csv"),
                                                layout.canonical() / ("x_" + y + ".csv")};
            json entry;
            if (cache.valid(name, key)) {
                log("ingest", y + ": cache hit");
                entry = cache.extra(name);
            } else {
                const auto snap = ingest::parse_mrio(config.workspace, year, config.format, options);
                if (schema && !(*schema == snap.schema)) {
                    throw DataError("year " + y + ": region/sector index differs from earlier years");
                }
                schema = snap.schema;
                ingest::write_canonical(snap, layout.canonical());
                const auto violations = ingest::validate_balance(snap, config.balance_epsilon);
                json list = json::array();
                for (const auto& v : violations) {
                    list.push_back(json{{"index", v.index},
                                        {"region", snap.schema.regions()[snap.schema.region_of(v.index)]},
                                        {"sector", snap.schema.sectors()[snap.schema.sector_of(v.index)]},
                                        {"x", v.x},
                                        {"row_sum", v.row_sum},
                                        {"relative_gap", v.relative_gap}});
                }
                std::size_t zero_output = 0;
                for (Eigen::Index i = 0; i < snap.x.size(); ++i) {
                    if (!(snap.x[i] > config.epsilon_x)) {
                        ++zero_output;
                    }
                }
                entry = json{{"year", year}, {"sectors", snap.schema.flat_size()}, {"zero_output_sectors", zero_output}, {"balance_violations", list}};
                cache.record(name, key, outputs, entry);
                log("ingest", y + ": parsed " + std::to_string(snap.schema.region_count()) + " regions x " +
                                  std::to_string(snap.schema.sector_count()) + " sectors");
            }
            const auto count = entry["balance_violations"].size();
            total_violations += count;
            if (count > 0) {
                log("ingest", y + ": warning: " + std::to_string(count) + " balance violation(s) above relative tolerance " +
                                  csv::format_number(config.balance_epsilon));
            }
            if (entry["zero_output_sectors"].get<std::size_t>() > 0) {
                log("ingest", y + ": warning: " + std::to_string(entry["zero_output_sectors"].get<std::size_t>()) + " zero-output sector(s)");
            }
            years.push_back(entry);
        }
        cache.save();
        write_report(layout, "ingest",
                     json{{"stage", "ingest"},
                          {"format", ingest::to_string(config.format)},
                          {"balance_epsilon", config.balance_epsilon},
                          {"balance_violation_count", total_violations},
                          {"years", years},
                          {"wall_time_s", seconds_since(start)}});
    });
}

// ---------------------------------------------------------------------------
// footprint

int cmd_footprint(const RunConfig& config, const Selection& selection)
{
    return run_stage("footprint", [&] {
        config.validate();
        const auto start = std::chrono::steady_clock::now();
        const Layout layout{config.out};
        Cache cache(layout.cache());
        const auto aggregation = load_aggregation(config);
        const auto fingerprint = aggregation ? aggregation_fingerprint(*aggregation) : std::string("identity");

        std::vector<int> years = config.years();
        std::vector<Period> periods = config.periods;
        if (selection.period) {
            const auto& p = config.period(*selection.period);
            years.clear();
            for (int y = p.start_year; y <= p.end_year; ++y) {
                years.push_back(y);
            }
            periods = {p};
        }

        std::vector<json> year_reports(years.size());
        parallel_for(years.size(), config.jobs, [&](std::size_t idx) {
            const int year = years[idx];
            const std::string y = std::to_string(year);
            const auto inputs = ingest::input_files(layout.canonical(), year, ingest::InputFormat::canonical_csv);
            for (const auto& f : inputs) {
                if (!fs::is_regular_file(f)) {
                    throw DataError("year " + y + ": missing upstream file " + f.string() + " (run ingest first)");
                }
            }
            Sha256 hasher;
            hasher.update("footprint-v1\n").update(csv::format_number(config.epsilon_x) + "\n").update(fingerprint);
            for (const auto& f : inputs) {
                hasher.update_file(f);
            }
            const auto key = hasher.hex_digest();
            const auto name = "footprint/" + y;
            const std::vector<fs::path> outputs{layout.flows() / io::flow_file_name(QuantityKind::emission, y),
                                                layout.flows() / io::flow_file_name(QuantityKind::value, y)};
            if (cache.valid(name, key)) {
                log("footprint", y + ": cache hit");
                auto extra = cache.extra(name);
                extra["cache_hit"] = true;
                year_reports[idx] = extra;
                return;
            }
            const auto year_start = std::chrono::steady_clock::now();
            const auto snap = ingest::parse_mrio(layout.canonical(), year, ingest::InputFormat::canonical_csv);
            footprint::YearFootprints result;
            try {
                result = footprint::compute_year(snap, config.epsilon_x);
            } catch (const NumericalError& e) {
                throw NumericalError("year " + y + ": " + e.what());
            }
            auto emission = aggregation ? ingest::aggregate_flows(result.emission, *aggregation) : result.emission;
            auto value = aggregation ? ingest::aggregate_flows(result.value, *aggregation) : result.value;
            write_if_changed(outputs[0], io::format_results(emission, io::ResultFormat::csv));
            write_if_changed(outputs[1], io::format_results(value, io::ResultFormat::csv));
            const auto violations = ingest::validate_balance(snap, config.balance_epsilon);
            const auto& d = result.diagnostics;
            json report{{"year", year},
                        {"zero_output_sectors", d.zero_output_sectors},
                        {"emission_intensity_warnings", d.emission_intensity_warnings},
                        {"value_intensity_warnings", d.value_intensity_warnings},
                        {"balance_violations", violations.size()},
                        {"condition_estimate", d.condition_estimate}};
            cache.record(name, key, outputs, report);
            report["cache_hit"] = false;
            report["wall_time_s"] = seconds_since(year_start);
            year_reports[idx] = report;
            log("footprint", y + ": solved (condition estimate " + csv::format_number(d.condition_estimate) + ")");
        });

        json period_reports = json::array();
        for (const auto& p : periods) {
            for (const auto kind : {QuantityKind::emission, QuantityKind::value}) {
                std::vector<RegionFlowMatrix> yearly;
                Sha256 hasher;
                hasher.update("period-v1\n" + p.label + "\n" + to_string(p.mode) + "\n");
                for (int y = p.start_year; y <= p.end_year; ++y) {
                    const auto file = layout.flows() / io::flow_file_name(kind, std::to_string(y));
                    yearly.push_back(io::read_flow_matrix(file, kind, Timeframe::year(y)));
                    hasher.update_file(file);
                }
                const auto out = layout.flows() / io::flow_file_name(kind, p.label);
                const auto name = "period/" + to_string(kind) + "/" + p.label;
                const auto key = hasher.hex_digest();
                bool hit = cache.valid(name, key);
                if (!hit) {
                    const auto combined = footprint::period_aggregate(yearly, p);
                    write_if_changed(out, io::format_results(combined, io::ResultFormat::csv));
                    cache.record(name, key, {out});
                }
                period_reports.push_back(json{{"period", p.label}, {"kind", to_string(kind)}, {"mode", to_string(p.mode)}, {"cache_hit", hit}});
            }
        }
        if (!periods.empty()) {
            log("footprint", "periods combined by " + to_string(config.period_mode) +
                                 " of yearly flows (annual-scale magnitudes; set periods.mode = \"sum\" for period totals)");
        }
        cache.save();
        json years_json = json::array();
        for (auto& r : year_reports) {
            years_json.push_back(std::move(r));
        }
        write_report(layout, "footprint",
                     json{{"stage", "footprint"},
                          {"aggregation", config.aggregation_map.empty() ? std::string("identity") : config.aggregation_map},
                          {"epsilon_x", config.epsilon_x},
                          {"period_mode", to_string(config.period_mode)},
                          {"period_mode_note", "period flows are the entrywise mean or sum of yearly flows; the published per-period "
                                               "magnitudes read as annual-scale values, which corresponds to mean"},
                          {"years", years_json},
                          {"periods", period_reports},
                          {"wall_time_s", seconds_since(start)}});
    });
}

// ---------------------------------------------------------------------------
// eeei

int cmd_eeei(const RunConfig& config, const Selection& selection)
{
    return run_stage("eeei", [&] {
        config.validate();
        const auto start = std::chrono::steady_clock::now();
        const Layout layout{config.out};
        std::vector<equality::EeeiRecord> all;
        json tf_reports = json::array();
        for (const auto& tf : selected_timeframes(config, selection)) {
            const auto e = io::read_flow_matrix(layout.flows() / io::flow_file_name(QuantityKind::emission, tf.label), QuantityKind::emission, tf);
            const auto v = io::read_flow_matrix(layout.flows() / io::flow_file_name(QuantityKind::value, tf.label), QuantityKind::value, tf);
            const auto nets = equality::make_net_flows(e, v);
            const auto records = equality::eeei_records(nets, config.orientation);
            Eigen::VectorXd values(static_cast<Eigen::Index>(records.size()));
            for (std::size_t i = 0; i < records.size(); ++i) {
                values[static_cast<Eigen::Index>(i)] = records[i].eeei;
            }
            write_if_changed(layout.eeei() / ("distance_" + tf.label + ".csv"),
                             io::format_labeled_matrix(nets.labels, equality::distance_matrix(values)));
            all.insert(all.end(), records.begin(), records.end());
            const double scale = nets.e_net.cwiseAbs().sum() + 1e-300;
            tf_reports.push_back(json{{"timeframe", tf.label},
                                      {"e_net_sum_relative", nets.e_net.sum() / scale},
                                      {"v_net_sum_relative", nets.v_net.sum() / (nets.v_net.cwiseAbs().sum() + 1e-300)}});
        }
        if (all.empty()) {
            throw UsageError("no timeframes selected");
        }
        write_if_changed(layout.eeei() / "eeei.csv", io::format_results(std::span<const equality::EeeiRecord>(all), io::ResultFormat::csv));
        log("eeei", std::to_string(all.size()) + " records (" + equality::to_string(config.orientation) + ")");
        write_report(layout, "eeei",
                     json{{"stage", "eeei"},
                          {"orientation", equality::to_string(config.orientation)},
                          {"timeframes", tf_reports},
                          {"wall_time_s", seconds_since(start)}});
    });
}

// ---------------------------------------------------------------------------
// network

int cmd_network(const RunConfig& config, const Selection& selection)
{
    return run_stage("network", [&] {
        config.validate();
        const auto start = std::chrono::steady_clock::now();
        const Layout layout{config.out};
        std::vector<network::GraphKind> kinds{network::GraphKind::emission_net, network::GraphKind::value_net, network::GraphKind::inequality};
        if (selection.kind) {
            kinds = {*selection.kind};
        }
        std::vector<equality::EeeiRecord> eeei_rows;
        if (std::find(kinds.begin(), kinds.end(), network::GraphKind::inequality) != kinds.end()) {
            const auto path = layout.eeei() / "eeei.csv";
            if (!fs::is_regular_file(path)) {
                throw DataError("missing upstream file " + path.string() + " (run eeei first)");
            }
            eeei_rows = io::read_eeei_csv(path);
        }

        json graphs = json::array();
        for (const auto& tf : selected_timeframes(config, selection)) {
            const auto needs = [&](network::GraphKind k) {
                return std::find(kinds.begin(), kinds.end(), k) != kinds.end() || std::find(kinds.begin(), kinds.end(), network::GraphKind::inequality) != kinds.end();
            };
            RegionFlowMatrix e, v;
            if (needs(network::GraphKind::emission_net)) {
                e = io::read_flow_matrix(layout.flows() / io::flow_file_name(QuantityKind::emission, tf.label), QuantityKind::emission, tf);
            }
            if (needs(network::GraphKind::value_net)) {
                v = io::read_flow_matrix(layout.flows() / io::flow_file_name(QuantityKind::value, tf.label), QuantityKind::value, tf);
            }
            for (const auto kind : kinds) {
                network::TradeGraph g;
                if (kind == network::GraphKind::inequality) {
                    Eigen::VectorXd values(e.size());
                    for (std::size_t r = 0; r < e.labels.size(); ++r) {
                        const auto it = std::find_if(eeei_rows.begin(), eeei_rows.end(), [&](const auto& rec) {
                            return rec.timeframe == tf.label && rec.region == e.labels[r];
                        });
                        if (it == eeei_rows.end()) {
                            throw DataError("no EEEI value for " + e.labels[r] + " in " + tf.label + " (run eeei for this timeframe)");
                        }
                        values[static_cast<Eigen::Index>(r)] = it->eeei;
                    }
                    g = network::build_inequality_graph(e, v, values, config.inequality_rule, config.tau);
                    g.metadata["orientation"] = equality::to_string(config.orientation);
                } else {
                    g = network::build_net_flow_graph(kind == network::GraphKind::emission_net ? e : v, config.min_weight);
                }
                const auto pr = network::pagerank(g, config.pagerank);
                const auto cc = network::clustering_coefficients(g);
                g.metadata["pagerank_damping"] = csv::format_number(config.pagerank.damping);

                const auto stem = network::to_string(kind) + "_" + tf.label;
                g.validate();
                write_if_changed(layout.networks() / (stem + ".gexf"), io::to_gexf(g));
                std::vector<io::MetricRow> rows;
                for (const auto& node : g.nodes) {
                    rows.push_back({node.id, tf.label, network::to_string(kind), pr.scores.at(node.id), cc.per_node.at(node.id)});
                }
                rows.push_back({io::network_row_key, tf.label, network::to_string(kind), std::nullopt, cc.network_average});
                write_if_changed(layout.networks() / ("metrics_" + stem + ".csv"), io::format_results(std::span<const io::MetricRow>(rows), io::ResultFormat::csv));
                if (!pr.converged) {
                    log("network", stem + ": warning: PageRank did not converge within " + std::to_string(config.pagerank.max_iter) +
                                       " iterations (residual " + csv::format_number(pr.residual) + ")");
                }
                graphs.push_back(json{{"graph", stem},
                                      {"nodes", g.nodes.size()},
                                      {"edges", g.edges.size()},
                                      {"pagerank_iterations", pr.iterations},
                                      {"pagerank_residual", pr.residual},
                                      {"pagerank_converged", pr.converged},
                                      {"clustering_average", cc.network_average}});
            }
        }
        log("network", std::to_string(graphs.size()) + " graph(s) written");
        write_report(layout, "network", json{{"stage", "network"}, {"graphs", graphs}, {"wall_time_s", seconds_since(start)}});
    });
}

// ---------------------------------------------------------------------------
// export

int cmd_export(const RunConfig& config, const Selection& selection)
{
    return run_stage("export", [&] {
        config.validate();
        const Layout layout{config.out};
        const auto timeframes = selected_timeframes(config, selection);
        std::size_t written = 0;
        if (fs::is_regular_file(layout.eeei() / "eeei.csv")) {
            const auto records = io::read_eeei_csv(layout.eeei() / "eeei.csv");
            write_if_changed(layout.exports() / "eeei.json", io::format_results(std::span<const equality::EeeiRecord>(records), io::ResultFormat::json));
            ++written;
        }
        for (const auto& tf : timeframes) {
            for (const auto kind : {QuantityKind::emission, QuantityKind::value}) {
                const auto file = layout.flows() / io::flow_file_name(kind, tf.label);
                if (fs::is_regular_file(file)) {
                    const auto flow = io::read_flow_matrix(file, kind, tf);
                    write_if_changed(layout.exports() / ("flows_" + to_string(kind) + "_" + tf.label + ".json"),
                                     io::format_results(flow, io::ResultFormat::json));
                    ++written;
                }
            }
            for (const auto kind : {network::GraphKind::emission_net, network::GraphKind::value_net, network::GraphKind::inequality}) {
                if (selection.kind && *selection.kind != kind) {
                    continue;
                }
                const auto stem = "metrics_" + network::to_string(kind) + "_" + tf.label;
                const auto file = layout.networks() / (stem + ".csv");
                if (fs::is_regular_file(file)) {
                    const auto rows = io::read_metrics_csv(file);
                    write_if_changed(layout.exports() / (stem + ".json"), io::format_results(std::span<const io::MetricRow>(rows), io::ResultFormat::json));
                    ++written;
                }
            }
        }
        if (written == 0) {
            throw DataError("nothing to export under " + layout.root.string() + " (run the earlier stages first)");
        }
        log("export", std::to_string(written) + " JSON file(s)");
    });
}

// ---------------------------------------------------------------------------
// pipeline

int cmd_pipeline(const RunConfig& config)
{
    const std::vector<std::pair<std::string, std::function<int()>>> stages{
        {"ingest", [&] { return cmd_ingest(config); }},
        {"footprint", [&] { return cmd_footprint(config); }},
        {"eeei", [&] { return cmd_eeei(config); }},
        {"network", [&] { return cmd_network(config); }},
        {"export", [&] { return cmd_export(config); }},
    };
    for (const auto& [name, stage] : stages) {
        if (const int status = stage(); status != 0) {
            log("pipeline", "stage '" + name + "' failed with exit status " + std::to_string(status));
            return status;
        }
    }
    return run_stage("pipeline", [&] {
        const Layout layout{config.out};
        const auto root = fs::weakly_canonical(layout.root);
        const auto cache = fs::weakly_canonical(layout.cache());
        std::vector<std::string> files;
        for (const auto& entry : fs::recursive_directory_iterator(root)) {
            if (!entry.is_regular_file()) {
                continue;
            }
            const auto full = fs::weakly_canonical(entry.path());
            const auto rel = full.lexically_relative(root).generic_string();
            const auto in_cache = !full.lexically_relative(cache).empty() && full.lexically_relative(cache).native().rfind("..", 0) != 0;
            if (rel == "manifest.json" || rel.rfind("reports/", 0) == 0 || in_cache) {
                continue;
            }
            files.push_back(rel);
        }
        std::sort(files.begin(), files.end());
        json list = json::array();
        for (const auto& rel : files) {
            list.push_back(json{{"path", rel}, {"sha256", sha256_file(root / rel)}});
        }
        json manifest{{"tool", "exionet"},
                      {"orientation", equality::to_string(config.orientation)},
                      {"period_mode", to_string(config.period_mode)},
                      {"files", list}};
        write_if_changed(layout.manifest(), manifest.dump(2) + "\n");
        log("pipeline", "manifest lists " + std::to_string(files.size()) + " file(s)");
    });
}

} // namespace exionet::pipeline

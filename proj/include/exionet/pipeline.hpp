#pragma once

#include "exionet/config.hpp"
#include "exionet/equality_index.hpp"
#include "exionet/mrio_ingest.hpp"
#include "exionet/timeframe.hpp"
#include "exionet/trade_network.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace exionet::pipeline {

/// Run-level parameters. Built from defaults, then a config file, then command-line
/// overrides keyed by the same dotted names (`pagerank.damping`, `periods.list`, ...).
struct RunConfig {
    std::filesystem::path workspace;
    ingest::InputFormat format = ingest::InputFormat::canonical_csv;
    int first_year = ingest::first_supported_year;
    int last_year = ingest::last_supported_year;
    std::vector<Period> periods;
    bool periods_explicit = false;
    PeriodMode period_mode = PeriodMode::mean;
    /// Empty: identity. "table_a2": built-in 13-region map. Anything else: CSV path.
    std::string aggregation_map;
    std::vector<std::string> emission_accounts;
    std::vector<std::string> value_accounts;
    double emission_scale = 0.0;
    double balance_epsilon = ingest::default_balance_epsilon;
    double epsilon_x = 1e-9;
    equality::Orientation orientation = equality::Orientation::advantage_high;
    network::InequalityRule inequality_rule = network::InequalityRule::strict_mismatch;
    double tau = 0.0;
    double min_weight = 0.0;
    network::PageRankOptions pagerank;
    std::filesystem::path out = "out";
    int jobs = 1;

    std::vector<int> years() const;
    /// Year timeframes followed by period timeframes.
    std::vector<Timeframe> timeframes() const;
    const Period& period(const std::string& label) const;
    /// Throws UsageError/DataError when ranges or referenced files are invalid.
    void validate() const;
};

/// Every key accepted in config files and as `--<key>` flags.
const std::vector<std::string>& config_keys();

/// `config_dir` anchors relative paths found in the config file.
RunConfig make_config(const config::Table& file_values, const std::filesystem::path& config_dir,
                      const std::map<std::string, std::string>& overrides);

/// Parses "1995..2001" or a single year.
std::pair<int, int> parse_year_range(const std::string& text);
/// Parses "P1:1995..2001".
Period parse_period(const std::string& text, PeriodMode mode);

/// Output layout below RunConfig::out.
struct Layout {
    std::filesystem::path root;

    std::filesystem::path canonical() const { return root / "canonical"; }
    std::filesystem::path flows() const { return root / "flows"; }
    std::filesystem::path eeei() const { return root / "eeei"; }
    std::filesystem::path networks() const { return root / "networks"; }
    std::filesystem::path exports() const { return root / "export"; }
    std::filesystem::path reports() const { return root / "reports"; }
    std::filesystem::path manifest() const { return root / "manifest.json"; }
    /// $EXIONET_CACHE_DIR when set, else <out>/.cache.
    std::filesystem::path cache() const;
};

/// Timeframe selection for a single command invocation.
struct Selection {
    std::optional<std::string> period;        ///< --period
    std::optional<network::GraphKind> kind;   ///< --kind
};

/// Each command returns the process exit status (0 ok, 1 data, 2 numerical, 3 usage)
/// and reports progress on standard error.
int cmd_ingest(const RunConfig& config);
int cmd_footprint(const RunConfig& config, const Selection& selection = {});
int cmd_eeei(const RunConfig& config, const Selection& selection = {});
int cmd_network(const RunConfig& config, const Selection& selection = {});
int cmd_export(const RunConfig& config, const Selection& selection = {});
/// ingest -> footprint -> eeei -> network -> export, then manifest.json with content
/// hashes of every deterministic output (run reports and the cache are excluded).
int cmd_pipeline(const RunConfig& config);

/// Name of the environment variable overriding the cache directory.
inline constexpr const char* cache_dir_env = "EXIONET_CACHE_DIR";

} // namespace exionet::pipeline

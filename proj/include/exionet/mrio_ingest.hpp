#pragma once

#include "exionet/flow_matrix.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace exionet::ingest {

/// Ordered region and sector labels of a table. Flat index i = r * |sectors| + k.
class RegionSchema {
public:
    RegionSchema() = default;
    RegionSchema(std::vector<std::string> regions, std::vector<std::string> sectors);

    /// Builds the schema from (region, sector) index rows; rows must enumerate the
    /// full region x sector product in region-major order.
    static RegionSchema from_index(const std::vector<std::pair<std::string, std::string>>& rows);

    const std::vector<std::string>& regions() const { return regions_; }
    const std::vector<std::string>& sectors() const { return sectors_; }
    Eigen::Index region_count() const { return static_cast<Eigen::Index>(regions_.size()); }
    Eigen::Index sector_count() const { return static_cast<Eigen::Index>(sectors_.size()); }
    Eigen::Index flat_size() const { return region_count() * sector_count(); }

    Eigen::Index flat_index(Eigen::Index region, Eigen::Index sector) const { return region * sector_count() + sector; }
    Eigen::Index region_of(Eigen::Index flat) const { return flat / sector_count(); }
    Eigen::Index sector_of(Eigen::Index flat) const { return flat % sector_count(); }

    friend bool operator==(const RegionSchema&, const RegionSchema&) = default;

private:
    std::vector<std::string> regions_;
    std::vector<std::string> sectors_;
};

/// Many-to-one mapping of native region codes onto an aggregated region scheme.
struct AggregationMap {
    std::map<std::string, std::string> mapping;
    std::vector<std::string> aggregated_order;

    /// The 13-region scheme (AU, BR, CA, CN, EU27/UK, ID, IN, JP, KR, MX, RoW, RU, US)
    /// over the 49 native ExioBase region codes.
    static AggregationMap table_a2();
    static AggregationMap identity(const std::vector<std::string>& labels);
    /// CSV with header native_code,aggregated_code. Aggregated order is first appearance.
    static AggregationMap load(const std::filesystem::path& path);

    /// Throws DataError if a mapped value is missing from aggregated_order.
    void validate() const;
};

/// One year of an environmentally extended multi-regional table. Treated as
/// immutable once parsed.
struct MrioSnapshot {
    int year = 0;
    RegionSchema schema;
    Eigen::MatrixXd Z;            ///< n x n, M.EUR
    Eigen::MatrixXd Y;            ///< n x m, M.EUR, one column per destination region
    Eigen::VectorXd x;            ///< n, M.EUR
    Eigen::VectorXd ext_emission; ///< n, Mt CO2e
    Eigen::VectorXd ext_value;    ///< n, M.EUR

    /// Dimensions, nonnegativity and year range. Balance is checked by validate_balance.
    void check_invariants() const;
};

enum class InputFormat { canonical_csv, exiobase_ixi };

std::string to_string(InputFormat format);
InputFormat parse_input_format(const std::string& text);

struct ParseOptions {
    /// Extension rows summed into ext_emission. Empty selects the format default.
    std::vector<std::string> emission_accounts;
    /// Extension rows summed into ext_value. Empty selects the format default.
    std::vector<std::string> value_accounts;
    /// Multiplier applied to the summed emission rows; 0 selects the format default
    /// (1 for canonical CSV, 1e-9 kg -> Mt for ExioBase).
    double emission_scale = 0.0;
};

std::vector<std::string> default_emission_accounts(InputFormat format);
std::vector<std::string> default_value_accounts(InputFormat format);

inline constexpr int first_supported_year = 1995;
inline constexpr int last_supported_year = 2022;

/// Files read by parse_mrio for the given year, in a stable order. Used for cache keys.
std::vector<std::filesystem::path> input_files(const std::filesystem::path& workspace, int year, InputFormat format);

MrioSnapshot parse_mrio(const std::filesystem::path& workspace, int year, InputFormat format,
                        const ParseOptions& options = {});

/// Writes index.csv, Z_<year>.csv, Y_<year>.csv, ext_<year>.csv and x_<year>.csv.
/// The extension file carries the rows "emission" and "value_added".
void write_canonical(const MrioSnapshot& snapshot, const std::filesystem::path& directory);

struct BalanceViolation {
    Eigen::Index index = 0;
    double x = 0.0;
    double row_sum = 0.0;
    double relative_gap = 0.0;
};

using ValidationReport = std::vector<BalanceViolation>;

inline constexpr double default_balance_epsilon = 1e-6;

/// Violations of |x_i - row_sum_i| <= epsilon_rel * max(1, x_i), sorted by descending gap.
/// Row sums are accumulated left to right over Z then Y.
ValidationReport validate_balance(const MrioSnapshot& snapshot, double epsilon_rel = default_balance_epsilon);

RegionFlowMatrix aggregate_flows(const RegionFlowMatrix& flow, const AggregationMap& map);

} // namespace exionet::ingest

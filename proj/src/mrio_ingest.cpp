#include "exionet/mrio_ingest.hpp"

#include "exionet/csv.hpp"
#include "exionet/errors.hpp"
#include "exionet/footprint_engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

namespace fs = std::filesystem;

namespace exionet::ingest {

RegionSchema::RegionSchema(std::vector<std::string> regions, std::vector<std::string> sectors)
    : regions_(std::move(regions)), sectors_(std::move(sectors))
{
    if (regions_.empty() || sectors_.empty()) {
        throw DataError("region schema needs at least one region and one sector");
    }
    if (std::set<std::string>(regions_.begin(), regions_.end()).size() != regions_.size()) {
        throw DataError("duplicate region code in schema");
    }
    if (std::set<std::string>(sectors_.begin(), sectors_.end()).size() != sectors_.size()) {
        throw DataError("duplicate sector name in schema");
    }
}

RegionSchema RegionSchema::from_index(const std::vector<std::pair<std::string, std::string>>& rows)
{
    std::vector<std::string> regions;
    std::vector<std::string> sectors;
    for (const auto& [region, sector] : rows) {
        if (regions.empty() || regions.back() != region) {
            if (std::find(regions.begin(), regions.end(), region) != regions.end()) {
                throw DataError("index rows of region '" + region + "' are not contiguous");
            }
            regions.push_back(region);
        }
        if (regions.size() == 1) {
            sectors.push_back(sector);
        }
    }
    RegionSchema schema(regions, sectors);
    if (static_cast<std::size_t>(schema.flat_size()) != rows.size()) {
        throw DataError("index has " + std::to_string(rows.size()) + " rows but " + std::to_string(regions.size()) +
                        " regions x " + std::to_string(sectors.size()) + " sectors");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto flat = static_cast<Eigen::Index>(i);
        if (rows[i].first != schema.regions()[schema.region_of(flat)] || rows[i].second != schema.sectors()[schema.sector_of(flat)]) {
            throw DataError("index row " + std::to_string(i + 1) + ": sector '" + rows[i].second + "' breaks the sector order of region '" +
                            schema.regions().front() + "'");
        }
    }
    return schema;
}

// ---------------------------------------------------------------------------
// Aggregation map

AggregationMap AggregationMap::table_a2()
{
    AggregationMap map;
    map.aggregated_order = {"AU", "BR", "CA", "CN", "EU27/UK", "ID", "IN", "JP", "KR", "MX", "RoW", "RU", "US"};
    for (const char* code : {"AU", "BR", "CA", "CN", "ID", "IN", "JP", "KR", "MX", "RU", "US"}) {
        map.mapping[code] = code;
    }
    for (const char* code : {"AT", "BE", "BG", "CY", "CZ", "DE", "DK", "EE", "ES", "FI", "FR", "GR", "HR", "HU",
                             "IE", "IT", "LT", "LU", "LV", "MT", "NL", "PL", "PT", "RO", "SE", "SI", "SK", "GB"}) {
        map.mapping[code] = "EU27/UK";
    }
    // RoW Asia and Pacific, America, Europe, Africa, Middle East; Taiwan, Turkey, South Africa, Norway, Switzerland
    for (const char* code : {"WA", "WL", "WE", "WF", "WM", "TW", "TR", "ZA", "NO", "CH"}) {
        map.mapping[code] = "RoW";
    }
    return map;
}

AggregationMap AggregationMap::identity(const std::vector<std::string>& labels)
{
    AggregationMap map;
    map.aggregated_order = labels;
    for (const auto& label : labels) {
        map.mapping[label] = label;
    }
    return map;
}

AggregationMap AggregationMap::load(const fs::path& path)
{
    if (!fs::exists(path)) {
        throw DataError("missing file: " + path.string());
    }
    const auto rows = csv::read_file(path);
    if (rows.empty() || rows.front().size() < 2 || rows.front()[0] != "native_code" || rows.front()[1] != "aggregated_code") {
        throw DataError(path.string() + ": expected header native_code,aggregated_code");
    }
    AggregationMap map;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != 2 || row[0].empty() || row[1].empty()) {
            throw DataError(path.string() + ": row " + std::to_string(i + 1) + " must have two non-empty columns");
        }
        if (!map.mapping.emplace(row[0], row[1]).second) {
            throw DataError(path.string() + ": native region '" + row[0] + "' mapped twice");
        }
        if (std::find(map.aggregated_order.begin(), map.aggregated_order.end(), row[1]) == map.aggregated_order.end()) {
            map.aggregated_order.push_back(row[1]);
        }
    }
    return map;
}

void AggregationMap::validate() const
{
    for (const auto& [native, aggregated] : mapping) {
        if (std::find(aggregated_order.begin(), aggregated_order.end(), aggregated) == aggregated_order.end()) {
            throw DataError("aggregation target '" + aggregated + "' of '" + native + "' is not in the aggregated order");
        }
    }
}

RegionFlowMatrix aggregate_flows(const RegionFlowMatrix& flow, const AggregationMap& map)
{
    flow.check_shape();
    map.validate();
    std::unordered_map<std::string, Eigen::Index> target_index;
    for (std::size_t k = 0; k < map.aggregated_order.size(); ++k) {
        target_index[map.aggregated_order[k]] = static_cast<Eigen::Index>(k);
    }
    std::vector<Eigen::Index> target(flow.labels.size());
    for (std::size_t r = 0; r < flow.labels.size(); ++r) {
        const auto it = map.mapping.find(flow.labels[r]);
        if (it == map.mapping.end()) {
            throw DataError("region '" + flow.labels[r] + "' has no aggregation mapping");
        }
        target[r] = target_index.at(it->second);
    }
    const auto m = static_cast<Eigen::Index>(map.aggregated_order.size());
    RegionFlowMatrix out{flow.kind, flow.timeframe, map.aggregated_order, Eigen::MatrixXd::Zero(m, m)};
    for (Eigen::Index s = 0; s < flow.size(); ++s) {
        for (Eigen::Index r = 0; r < flow.size(); ++r) {
            out.F(target[r], target[s]) += flow.F(r, s);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Snapshot invariants and balance

void MrioSnapshot::check_invariants() const
{
    if (year < first_supported_year || year > last_supported_year) {
        throw DataError("unknown year " + std::to_string(year) + " (supported " + std::to_string(first_supported_year) + "-" +
                        std::to_string(last_supported_year) + ")");
    }
    const auto n = schema.flat_size();
    const auto m = schema.region_count();
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) {
            throw DataError("snapshot " + std::to_string(year) + ": " + what);
        }
    };
    require(n > 0, "empty schema");
    require(Z.rows() == n && Z.cols() == n, "Z is " + std::to_string(Z.rows()) + "x" + std::to_string(Z.cols()) + ", expected " +
                                                std::to_string(n) + "x" + std::to_string(n));
    require(Y.rows() == n && Y.cols() == m, "Y is " + std::to_string(Y.rows()) + "x" + std::to_string(Y.cols()) + ", expected " +
                                                std::to_string(n) + "x" + std::to_string(m));
    require(x.size() == n, "x has " + std::to_string(x.size()) + " entries, expected " + std::to_string(n));
    require(ext_emission.size() == n, "emission extension has " + std::to_string(ext_emission.size()) + " entries, expected " + std::to_string(n));
    require(ext_value.size() == n, "value extension has " + std::to_string(ext_value.size()) + " entries, expected " + std::to_string(n));
    require((Z.array() >= 0.0).all(), "Z has negative entries");
    require((Y.array() >= 0.0).all(), "Y has negative entries");
    require((x.array() >= 0.0).all(), "x has negative entries");
    require((ext_emission.array() >= 0.0).all(), "emission extension has negative entries");
}

ValidationReport validate_balance(const MrioSnapshot& snapshot, double epsilon_rel)
{
    const auto row_sums = footprint::compute_output(snapshot.Z, snapshot.Y);
    ValidationReport report;
    for (Eigen::Index i = 0; i < row_sums.size(); ++i) {
        const double gap = std::abs(snapshot.x[i] - row_sums[i]);
        const double scale = std::max(1.0, snapshot.x[i]);
        if (gap > epsilon_rel * scale) {
            report.push_back({i, snapshot.x[i], row_sums[i], gap / scale});
        }
    }
    std::stable_sort(report.begin(), report.end(),
                     [](const BalanceViolation& a, const BalanceViolation& b) { return a.relative_gap > b.relative_gap; });
    return report;
}

// ---------------------------------------------------------------------------
// Formats

std::string to_string(InputFormat format)
{
    return format == InputFormat::canonical_csv ? "canonical_csv" : "exiobase_ixi";
}

InputFormat parse_input_format(const std::string& text)
{
    if (text == "canonical_csv" || text == "canonical") {
        return InputFormat::canonical_csv;
    }
    if (text == "exiobase_ixi" || text == "exiobase") {
        return InputFormat::exiobase_ixi;
    }
    throw UsageError("unknown input format '" + text + "' (expected canonical_csv|exiobase_ixi)");
}

std::vector<std::string> default_emission_accounts(InputFormat format)
{
    if (format == InputFormat::canonical_csv) {
        return {"emission"};
    }
    return {"CO2 - combustion - air"};
}

std::vector<std::string> default_value_accounts(InputFormat format)
{
    if (format == InputFormat::canonical_csv) {
        return {"value_added"};
    }
    return {
        "Taxes less subsidies on products purchased: Total",
        "Other net taxes on production",
        "Compensation of employees; wages, salaries, & employers' social contributions: Low-skilled",
        "Compensation of employees; wages, salaries, & employers' social contributions: Medium-skilled",
        "Compensation of employees; wages, salaries, & employers' social contributions: High-skilled",
        "Operating surplus: Consumption of fixed capital",
        "Operating surplus: Rents on land",
        "Operating surplus: Royalties on resources",
        "Operating surplus: Remaining net operating surplus",
    };
}

namespace {

void check_year(int year)
{
    if (year < first_supported_year || year > last_supported_year) {
        throw DataError("unknown year " + std::to_string(year) + " (supported " + std::to_string(first_supported_year) + "-" +
                        std::to_string(last_supported_year) + ")");
    }
}

void require_file(const fs::path& path)
{
    if (!fs::is_regular_file(path)) {
        throw DataError("missing file: " + path.string());
    }
}

std::string year_file(const std::string& stem, int year)
{
    return stem + "_" + std::to_string(year) + ".csv";
}

/// Sums the rows named in `accounts` out of a name -> values table.
Eigen::VectorXd sum_accounts(const std::vector<std::pair<std::string, Eigen::VectorXd>>& rows, const std::vector<std::string>& accounts,
                             Eigen::Index n, const fs::path& file)
{
    Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
    for (const auto& account : accounts) {
        const auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& row) { return row.first == account; });
        if (it == rows.end()) {
            throw DataError(file.string() + ": extension account '" + account + "' not found");
        }
        total += it->second;
    }
    return total;
}

// Canonical CSV -------------------------------------------------------------

RegionSchema read_canonical_index(const fs::path& path)
{
    require_file(path);
    const auto rows = csv::read_file(path);
    if (rows.empty() || rows.front().size() != 2 || rows.front()[0] != "region" || rows.front()[1] != "sector") {
        throw DataError(path.string() + ": expected header region,sector");
    }
    std::vector<std::pair<std::string, std::string>> entries;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 2) {
            throw DataError(path.string() + ": row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                            " columns, expected 2");
        }
        entries.emplace_back(rows[i][0], rows[i][1]);
    }
    return RegionSchema::from_index(entries);
}

Eigen::MatrixXd read_numeric_block(const std::vector<csv::Row>& rows, std::size_t first_row, std::size_t first_col, Eigen::Index expect_rows,
                                   Eigen::Index expect_cols, const fs::path& path, const std::string& what)
{
    const auto body_rows = static_cast<Eigen::Index>(rows.size() - std::min(rows.size(), first_row));
    if (body_rows != expect_rows) {
        throw DataError(path.string() + ": dimension mismatch: " + what + " has " + std::to_string(body_rows) + " rows but the index has " +
                        std::to_string(expect_rows) + " entries");
    }
    Eigen::MatrixXd out(expect_rows, expect_cols);
    for (Eigen::Index i = 0; i < expect_rows; ++i) {
        const auto& row = rows[first_row + static_cast<std::size_t>(i)];
        const auto cols = static_cast<Eigen::Index>(row.size() - std::min(row.size(), first_col));
        if (cols != expect_cols) {
            throw DataError(path.string() + ": dimension mismatch: " + what + " row " + std::to_string(first_row + i + 1) + " has " +
                            std::to_string(cols) + " columns but " + std::to_string(expect_cols) + " are expected from the index");
        }
        for (Eigen::Index j = 0; j < expect_cols; ++j) {
            out(i, j) = csv::parse_number(row[first_col + static_cast<std::size_t>(j)], path, first_row + static_cast<std::size_t>(i) + 1,
                                          first_col + static_cast<std::size_t>(j) + 1);
        }
    }
    return out;
}

MrioSnapshot parse_canonical(const fs::path& workspace, int year, const ParseOptions& options)
{
    MrioSnapshot snap;
    snap.year = year;
    snap.schema = read_canonical_index(workspace / "index.csv");
    const auto n = snap.schema.flat_size();
    const auto m = snap.schema.region_count();

    const auto z_path = workspace / year_file("Z", year);
    const auto y_path = workspace / year_file("Y", year);
    const auto ext_path = workspace / year_file("ext", year);
    const auto x_path = workspace / year_file("x", year);
    require_file(z_path);
    require_file(y_path);
    require_file(ext_path);

    snap.Z = read_numeric_block(csv::read_file(z_path), 0, 0, n, n, z_path, "Z");

    const auto y_rows = csv::read_file(y_path);
    if (y_rows.empty()) {
        throw DataError(y_path.string() + ": empty file");
    }
    if (y_rows.front() != snap.schema.regions()) {
        throw DataError(y_path.string() + ": header must list the " + std::to_string(m) + " regions of index.csv in order, found " +
                        std::to_string(y_rows.front().size()) + " columns");
    }
    snap.Y = read_numeric_block(y_rows, 1, 0, n, m, y_path, "Y");

    const auto ext_rows = csv::read_file(ext_path);
    std::vector<std::pair<std::string, Eigen::VectorXd>> accounts;
    for (std::size_t i = 0; i < ext_rows.size(); ++i) {
        const auto& row = ext_rows[i];
        if (static_cast<Eigen::Index>(row.size()) != n + 1) {
            throw DataError(ext_path.string() + ": dimension mismatch: row " + std::to_string(i + 1) + " has " +
                            std::to_string(row.size() - 1) + " values but the index has " + std::to_string(n) + " entries");
        }
        Eigen::VectorXd values(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            values[j] = csv::parse_number(row[static_cast<std::size_t>(j) + 1], ext_path, i + 1, static_cast<std::size_t>(j) + 2);
        }
        accounts.emplace_back(row[0], std::move(values));
    }
    const auto emission_accounts = options.emission_accounts.empty() ? default_emission_accounts(InputFormat::canonical_csv) : options.emission_accounts;
    const auto value_accounts = options.value_accounts.empty() ? default_value_accounts(InputFormat::canonical_csv) : options.value_accounts;
    const double scale = options.emission_scale > 0.0 ? options.emission_scale : 1.0;
    snap.ext_emission = sum_accounts(accounts, emission_accounts, n, ext_path) * scale;
    snap.ext_value = sum_accounts(accounts, value_accounts, n, ext_path);

    if (fs::is_regular_file(x_path)) {
        snap.x = read_numeric_block(csv::read_file(x_path), 0, 0, n, 1, x_path, "x").col(0);
    } else {
        snap.x = footprint::compute_output(snap.Z, snap.Y);
    }
    return snap;
}

// ExioBase ixi ------------------------------------------------------------------

fs::path exiobase_dir(const fs::path& workspace, int year)
{
    const auto nested = workspace / ("IOT_" + std::to_string(year) + "_ixi");
    if (fs::is_directory(nested)) {
        return nested;
    }
    if (fs::is_regular_file(workspace / "Z.txt")) {
        return workspace;
    }
    throw DataError("unknown year " + std::to_string(year) + ": neither " + nested.string() + " nor " + (workspace / "Z.txt").string() +
                    " exists");
}

struct LabeledTable {
    std::vector<std::vector<std::string>> row_keys;
    std::vector<std::vector<std::string>> col_keys; // one entry per header row
    std::vector<const csv::Row*> body;
};

/// Splits a multi-index text table into header rows, row keys and numeric body rows.
/// Rows whose value cells are all empty (index-name rows) are skipped.
LabeledTable split_labeled(const std::vector<csv::Row>& rows, std::size_t header_rows, std::size_t index_cols, const fs::path& path)
{
    if (rows.size() < header_rows) {
        throw DataError(path.string() + ": expected " + std::to_string(header_rows) + " header rows");
    }
    LabeledTable table;
    for (std::size_t h = 0; h < header_rows; ++h) {
        const auto& row = rows[h];
        table.col_keys.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(std::min(index_cols, row.size())), row.end());
    }
    for (std::size_t i = header_rows; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const bool blank = std::all_of(row.begin() + static_cast<std::ptrdiff_t>(std::min(index_cols, row.size())), row.end(),
                                       [](const std::string& cell) { return cell.empty(); });
        if (blank) {
            continue;
        }
        if (row.size() < index_cols) {
            throw DataError(path.string() + ": row " + std::to_string(i + 1) + " lacks index columns");
        }
        table.row_keys.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(index_cols));
        table.body.push_back(&row);
    }
    return table;
}

Eigen::MatrixXd body_matrix(const LabeledTable& table, const std::vector<csv::Row>& rows, std::size_t index_cols, Eigen::Index cols,
                            const fs::path& path)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(table.body.size()), cols);
    for (std::size_t i = 0; i < table.body.size(); ++i) {
        const auto& row = *table.body[i];
        const std::size_t line = static_cast<std::size_t>(&row - rows.data()) + 1;
        if (static_cast<Eigen::Index>(row.size() - index_cols) != cols) {
            throw DataError(path.string() + ": dimension mismatch: row " + std::to_string(line) + " has " +
                            std::to_string(row.size() - index_cols) + " values but the header declares " + std::to_string(cols));
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            out(static_cast<Eigen::Index>(i), j) = csv::parse_number(row[index_cols + static_cast<std::size_t>(j)], path, line, index_cols + j + 1);
        }
    }
    return out;
}

MrioSnapshot parse_exiobase(const fs::path& workspace, int year, const ParseOptions& options)
{
    const auto dir = exiobase_dir(workspace, year);
    const auto z_path = dir / "Z.txt";
    const auto y_path = dir / "Y.txt";
    const auto f_path = dir / "satellite" / "F.txt";
    require_file(z_path);
    require_file(y_path);
    require_file(f_path);

    MrioSnapshot snap;
    snap.year = year;

    const auto z_rows = csv::read_file(z_path, '\t');
    const auto z_table = split_labeled(z_rows, 2, 2, z_path);
    std::vector<std::pair<std::string, std::string>> index;
    for (const auto& key : z_table.row_keys) {
        index.emplace_back(key[0], key[1]);
    }
    snap.schema = RegionSchema::from_index(index);
    const auto n = snap.schema.flat_size();
    const auto m = snap.schema.region_count();
    const auto header_cols = static_cast<Eigen::Index>(z_table.col_keys[0].size());
    if (header_cols != n) {
        throw DataError(z_path.string() + ": dimension mismatch: header has " + std::to_string(header_cols) + " columns but the row index has " +
                        std::to_string(n) + " entries");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto r = snap.schema.region_of(j);
        const auto k = snap.schema.sector_of(j);
        if (z_table.col_keys[0][static_cast<std::size_t>(j)] != snap.schema.regions()[r] ||
            z_table.col_keys[1][static_cast<std::size_t>(j)] != snap.schema.sectors()[k]) {
            throw DataError(z_path.string() + ": column " + std::to_string(j + 3) + " label does not match row index order");
        }
    }
    snap.Z = body_matrix(z_table, z_rows, 2, n, z_path);

    const auto y_rows = csv::read_file(y_path, '\t');
    const auto y_table = split_labeled(y_rows, 2, 2, y_path);
    if (static_cast<Eigen::Index>(y_table.body.size()) != n) {
        throw DataError(y_path.string() + ": dimension mismatch: " + std::to_string(y_table.body.size()) + " rows but the index has " +
                        std::to_string(n) + " entries");
    }
    for (std::size_t i = 0; i < y_table.row_keys.size(); ++i) {
        if (y_table.row_keys[i][0] != index[i].first || y_table.row_keys[i][1] != index[i].second) {
            throw DataError(y_path.string() + ": row " + std::to_string(i + 1) + " label does not match the Z index");
        }
    }
    const auto y_cols = static_cast<Eigen::Index>(y_table.col_keys[0].size());
    const Eigen::MatrixXd y_full = body_matrix(y_table, y_rows, 2, y_cols, y_path);
    snap.Y = Eigen::MatrixXd::Zero(n, m);
    for (Eigen::Index c = 0; c < y_cols; ++c) {
        const auto& region = y_table.col_keys[0][static_cast<std::size_t>(c)];
        const auto it = std::find(snap.schema.regions().begin(), snap.schema.regions().end(), region);
        if (it == snap.schema.regions().end()) {
            throw DataError(y_path.string() + ": final demand column " + std::to_string(c + 3) + " names unknown region '" + region + "'");
        }
        snap.Y.col(it - snap.schema.regions().begin()) += y_full.col(c);
    }

    const auto f_rows = csv::read_file(f_path, '\t');
    const auto f_table = split_labeled(f_rows, 2, 1, f_path);
    if (static_cast<Eigen::Index>(f_table.col_keys[0].size()) != n) {
        throw DataError(f_path.string() + ": dimension mismatch: " + std::to_string(f_table.col_keys[0].size()) +
                        " columns but the index has " + std::to_string(n) + " entries");
    }
    const Eigen::MatrixXd f_body = body_matrix(f_table, f_rows, 1, n, f_path);
    std::vector<std::pair<std::string, Eigen::VectorXd>> accounts;
    for (std::size_t i = 0; i < f_table.row_keys.size(); ++i) {
        accounts.emplace_back(f_table.row_keys[i][0], f_body.row(static_cast<Eigen::Index>(i)).transpose());
    }
    const auto emission_accounts = options.emission_accounts.empty() ? default_emission_accounts(InputFormat::exiobase_ixi) : options.emission_accounts;
    const auto value_accounts = options.value_accounts.empty() ? default_value_accounts(InputFormat::exiobase_ixi) : options.value_accounts;
    const double scale = options.emission_scale > 0.0 ? options.emission_scale : 1e-9;
    snap.ext_emission = sum_accounts(accounts, emission_accounts, n, f_path) * scale;
    snap.ext_value = sum_accounts(accounts, value_accounts, n, f_path);

    const auto x_path = dir / "x.txt";
    if (fs::is_regular_file(x_path)) {
        const auto x_rows = csv::read_file(x_path, '\t');
        const auto x_table = split_labeled(x_rows, 1, 2, x_path);
        if (static_cast<Eigen::Index>(x_table.body.size()) != n) {
            throw DataError(x_path.string() + ": dimension mismatch: " + std::to_string(x_table.body.size()) + " rows but the index has " +
                            std::to_string(n) + " entries");
        }
        snap.x = body_matrix(x_table, x_rows, 2, 1, x_path).col(0);
    } else {
        snap.x = footprint::compute_output(snap.Z, snap.Y);
    }
    return snap;
}

std::string matrix_csv(const Eigen::MatrixXd& matrix)
{
    std::string out;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j > 0) {
                out.push_back(',');
            }
            out += csv::format_number(matrix(i, j));
        }
        out.push_back('\n');
    }
    return out;
}

} // namespace

std::vector<fs::path> input_files(const fs::path& workspace, int year, InputFormat format)
{
    if (format == InputFormat::canonical_csv) {
        std::vector<fs::path> files{workspace / "index.csv", workspace / year_file("Z", year), workspace / year_file("Y", year),
                                    workspace / year_file("ext", year)};
        if (fs::is_regular_file(workspace / year_file("x", year))) {
            files.push_back(workspace / year_file("x", year));
        }
        return files;
    }
    const auto dir = exiobase_dir(workspace, year);
    std::vector<fs::path> files{dir / "Z.txt", dir / "Y.txt", dir / "satellite" / "F.txt"};
    if (fs::is_regular_file(dir / "x.txt")) {
        files.push_back(dir / "x.txt");
    }
    return files;
}

MrioSnapshot parse_mrio(const fs::path& workspace, int year, InputFormat format, const ParseOptions& options)
{
    check_year(year);
    if (!fs::is_directory(workspace)) {
        throw DataError("workspace is not a directory: " + workspace.string());
    }
    MrioSnapshot snap = format == InputFormat::canonical_csv ? parse_canonical(workspace, year, options) : parse_exiobase(workspace, year, options);
    snap.check_invariants();
    return snap;
}

void write_canonical(const MrioSnapshot& snapshot, const fs::path& directory)
{
    std::string index = "region,sector\n";
    for (Eigen::Index i = 0; i < snapshot.schema.flat_size(); ++i) {
        index += csv::join({snapshot.schema.regions()[snapshot.schema.region_of(i)], snapshot.schema.sectors()[snapshot.schema.sector_of(i)]});
        index.push_back('\n');
    }
    csv::write_text(directory / "index.csv", index);
    csv::write_text(directory / year_file("Z", snapshot.year), matrix_csv(snapshot.Z));
    csv::write_text(directory / year_file("Y", snapshot.year), csv::join(snapshot.schema.regions()) + "\n" + matrix_csv(snapshot.Y));
    std::string ext;
    for (const auto& [name, values] : {std::pair<const char*, const Eigen::VectorXd*>{"emission", &snapshot.ext_emission},
                                       std::pair<const char*, const Eigen::VectorXd*>{"value_added", &snapshot.ext_value}}) {
        ext += name;
        for (Eigen::Index i = 0; i < values->size(); ++i) {
            ext.push_back(',');
            ext += csv::format_number((*values)[i]);
        }
        ext.push_back('\n');
    }
    csv::write_text(directory / year_file("ext", snapshot.year), ext);
    csv::write_text(directory / year_file("x", snapshot.year), matrix_csv(snapshot.x));
}

} // namespace exionet::ingest

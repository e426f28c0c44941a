#pragma once

#include "exionet/equality_index.hpp"
#include "exionet/flow_matrix.hpp"
#include "exionet/trade_network.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace exionet::io {

inline constexpr const char* gexf_namespace = "http://gexf.net/1.3";

/// GEXF 1.3 static directed graph. Nodes are sorted by id and edges by (source, target);
/// numbers use the shortest round-trip decimal form. Graph kind, timeframe and metadata
/// travel in <meta><description> as key=value lines.
std::string to_gexf(const network::TradeGraph& g);
void write_gexf(const network::TradeGraph& g, const std::filesystem::path& path);

/// Inverse of to_gexf. Unknown attributes are reported through `warnings`; malformed
/// XML and dangling edge endpoints throw DataError.
network::TradeGraph parse_gexf(const std::string& document, std::vector<std::string>* warnings = nullptr);
network::TradeGraph read_gexf(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

enum class ResultFormat { csv, json };

ResultFormat parse_result_format(const std::string& text);
const char* extension_of(ResultFormat format);

struct MetricRow {
    std::string region; ///< "__network__" for the network-average row
    std::string timeframe;
    std::string kind;
    std::optional<double> pagerank;
    std::optional<double> clustering;
};

inline constexpr const char* network_row_key = "__network__";

/// Column order: region,year_or_period,e_net_Mt,v_net_MEUR,scaled_e,scaled_v,eeei,quadrant.
std::string format_results(std::span<const equality::EeeiRecord> records, ResultFormat format);
/// Header row/column of region codes around the m x m body.
std::string format_results(const RegionFlowMatrix& flow, ResultFormat format);
/// Column order: region,timeframe,kind,pagerank,clustering.
std::string format_results(std::span<const MetricRow> rows, ResultFormat format);

void write_results(std::span<const equality::EeeiRecord> records, const std::filesystem::path& path, ResultFormat format);
void write_results(const RegionFlowMatrix& flow, const std::filesystem::path& path, ResultFormat format);
void write_results(std::span<const MetricRow> rows, const std::filesystem::path& path, ResultFormat format);

/// Labeled square matrix (distance matrices) in the flow-matrix CSV layout.
std::string format_labeled_matrix(const std::vector<std::string>& labels, const Eigen::MatrixXd& matrix);

/// `flows_<kind>_<timeframe>.csv`
std::string flow_file_name(QuantityKind kind, const std::string& timeframe);

RegionFlowMatrix read_flow_matrix(const std::filesystem::path& path, QuantityKind kind, const Timeframe& timeframe);
std::vector<equality::EeeiRecord> read_eeei_csv(const std::filesystem::path& path);
std::vector<MetricRow> read_metrics_csv(const std::filesystem::path& path);

} // namespace exionet::io

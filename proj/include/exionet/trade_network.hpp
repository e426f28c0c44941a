#pragma once

#include "exionet/flow_matrix.hpp"
#include "exionet/timeframe.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace exionet::network {

enum class GraphKind { emission_net, value_net, inequality };

std::string to_string(GraphKind kind);
GraphKind parse_graph_kind(const std::string& text);

struct Node {
    std::string id;
    double domestic = 0.0;
    std::optional<double> eeei;

    friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
    std::string source;
    std::string target;
    double weight = 0.0;
    std::optional<double> raw_delta_e; ///< Mt
    std::optional<double> raw_delta_v; ///< M.EUR

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed weighted trade graph for one kind and timeframe. `metadata` carries the
/// build rule, thresholds and direction semantics into exports.
struct TradeGraph {
    GraphKind kind = GraphKind::emission_net;
    Timeframe timeframe;
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::map<std::string, std::string> metadata;

    /// Throws DataError on duplicate nodes, dangling endpoints, self-loops, reciprocal
    /// net-flow edges, non-positive net-flow weights or inequality weights outside [-1, 1].
    void validate() const;
    std::optional<std::size_t> node_index(const std::string& id) const;
};

/// Direction semantics recorded in graph metadata.
inline constexpr const char* net_flow_direction =
    "source hosts the net excess footprint embodied in trade with target (F(source,target) - F(target,source) > 0)";
inline constexpr const char* inequality_direction =
    "source net-exports emission burden to target and net-loses value added to it; target benefits";

/// Nodes carry domestic = F(r, r). For each unordered pair, an edge r -> s with weight
/// F(r, s) - F(s, r) when that difference exceeds min_weight.
TradeGraph build_net_flow_graph(const RegionFlowMatrix& F, double min_weight = 0.0);

enum class InequalityRule { strict_mismatch, score_threshold };

std::string to_string(InequalityRule rule);
InequalityRule parse_inequality_rule(const std::string& text);

/// Edges mark pairs where emission burden and value gain move in opposite directions.
///
/// For an ordered pair (r, s): de = E(r,s) - E(s,r), dv = V(r,s) - V(s,r) and the raw
/// score is g_E(de) - g_V(dv), where g_E and g_V min-max scale over all ordered-pair
/// deltas of the timeframe.
///  - strict_mismatch: emit r -> s iff de > 0 and dv < 0; weights are the raw scores of
///    the emitted set rescaled to [-1, 1].
///  - score_threshold: raw scores of all ordered pairs are rescaled to [-1, 1]; emit every
///    pair whose score exceeds tau, weighted by that score.
/// Node domestic values are E(r, r); node eeei values come from `eeei_values`.
TradeGraph build_inequality_graph(const RegionFlowMatrix& E_flow, const RegionFlowMatrix& V_flow, const Eigen::VectorXd& eeei_values,
                                  InequalityRule rule = InequalityRule::strict_mismatch, double tau = 0.0);

struct PageRankOptions {
    double damping = 0.85;
    double tol = 1e-10;
    int max_iter = 200;
};

struct PageRankResult {
    std::map<std::string, double> scores;
    int iterations = 0;
    double residual = 0.0; ///< L1 change of the last iteration
    bool converged = false;
};

/// Weighted PageRank by power iteration. Out-weights are normalised per node (absolute
/// weights for inequality graphs); dangling mass is spread uniformly. Non-convergence
/// is reported through the result, never thrown.
PageRankResult pagerank(const TradeGraph& g, const PageRankOptions& options = {});

struct ClusteringResult {
    std::map<std::string, double> per_node;
    /// Mean over nodes with degree >= 2; 0 when there are none.
    double network_average = 0.0;
};

/// Intensity-based weighted clustering on the undirected projection (reciprocal weights
/// summed, absolute values, normalised by the maximum weight):
/// C_i = 1 / (k_i (k_i - 1)) * sum_{j != h} (w_ij w_ih w_jh)^(1/3).
ClusteringResult clustering_coefficients(const TradeGraph& g);

} // namespace exionet::network

#include "exionet/trade_network.hpp"

#include "exionet/csv.hpp"
#include "exionet/equality_index.hpp"
#include "exionet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace exionet::network {

std::string to_string(GraphKind kind)
{
    switch (kind) {
    case GraphKind::emission_net: return "emission_net";
    case GraphKind::value_net: return "value_net";
    case GraphKind::inequality: return "inequality";
    }
    return "emission_net";
}

GraphKind parse_graph_kind(const std::string& text)
{
    if (text == "emission_net" || text == "emission") return GraphKind::emission_net;
    if (text == "value_net" || text == "value") return GraphKind::value_net;
    if (text == "inequality") return GraphKind::inequality;
    throw UsageError("unknown graph kind '" + text + "' (expected emission|value|inequality)");
}

std::string to_string(InequalityRule rule)
{
    return rule == InequalityRule::strict_mismatch ? "strict_mismatch" : "score_threshold";
}

InequalityRule parse_inequality_rule(const std::string& text)
{
    if (text == "strict_mismatch") return InequalityRule::strict_mismatch;
    if (text == "score_threshold") return InequalityRule::score_threshold;
    throw UsageError("unknown inequality rule '" + text + "' (expected strict_mismatch|score_threshold)");
}

std::optional<std::size_t> TradeGraph::node_index(const std::string& id) const
{
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

void TradeGraph::validate() const
{
    std::set<std::string> ids;
    for (const auto& node : nodes) {
        if (!ids.insert(node.id).second) {
            throw DataError("graph " + timeframe.label + ": duplicate node id '" + node.id + "'");
        }
        if (node.eeei && (*node.eeei < -1.0 || *node.eeei > 1.0)) {
            throw DataError("graph " + timeframe.label + ": node '" + node.id + "' has EEEI outside [-1, 1]");
        }
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& edge : edges) {
        if (!ids.contains(edge.source) || !ids.contains(edge.target)) {
            throw DataError("graph " + timeframe.label + ": edge " + edge.source + " -> " + edge.target + " references a missing node");
        }
        if (edge.source == edge.target) {
            throw DataError("graph " + timeframe.label + ": self-loop on '" + edge.source + "'");
        }
        if (!seen.emplace(edge.source, edge.target).second) {
            throw DataError("graph " + timeframe.label + ": duplicate edge " + edge.source + " -> " + edge.target);
        }
        if (kind == GraphKind::inequality) {
            if (!(edge.weight >= -1.0 && edge.weight <= 1.0)) {
                throw DataError("graph " + timeframe.label + ": inequality weight " + csv::format_number(edge.weight) + " outside [-1, 1]");
            }
        } else {
            if (!(edge.weight > 0.0)) {
                throw DataError("graph " + timeframe.label + ": net-flow weight must be positive on " + edge.source + " -> " + edge.target);
            }
            if (seen.contains({edge.target, edge.source})) {
                throw DataError("graph " + timeframe.label + ": reciprocal net-flow edges between " + edge.source + " and " + edge.target);
            }
        }
    }
}

TradeGraph build_net_flow_graph(const RegionFlowMatrix& F, double min_weight)
{
    F.check_shape();
    TradeGraph g;
    g.kind = F.kind == QuantityKind::emission ? GraphKind::emission_net : GraphKind::value_net;
    g.timeframe = F.timeframe;
    g.metadata = {
        {"kind", to_string(g.kind)},
        {"timeframe", F.timeframe.label},
        {"unit", unit_of(F.kind)},
        {"rule", "net_flow"},
        {"min_weight", csv::format_number(min_weight)},
        {"direction", net_flow_direction},
    };
    const auto m = F.size();
    for (Eigen::Index r = 0; r < m; ++r) {
        g.nodes.push_back({F.labels[static_cast<std::size_t>(r)], F.F(r, r), std::nullopt});
    }
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index s = r + 1; s < m; ++s) {
            const double delta = F.F(r, s) - F.F(s, r);
            const auto& a = F.labels[static_cast<std::size_t>(r)];
            const auto& b = F.labels[static_cast<std::size_t>(s)];
            Edge edge;
            if (delta > min_weight) {
                edge = {a, b, delta, std::nullopt, std::nullopt};
            } else if (-delta > min_weight) {
                edge = {b, a, -delta, std::nullopt, std::nullopt};
            } else {
                continue;
            }
            (F.kind == QuantityKind::emission ? edge.raw_delta_e : edge.raw_delta_v) = edge.weight;
            g.edges.push_back(std::move(edge));
        }
    }
    return g;
}

TradeGraph build_inequality_graph(const RegionFlowMatrix& E_flow, const RegionFlowMatrix& V_flow, const Eigen::VectorXd& eeei_values,
                                  InequalityRule rule, double tau)
{
    E_flow.check_shape();
    V_flow.check_shape();
    if (E_flow.labels != V_flow.labels) {
        throw DataError("inequality graph: emission and value flows carry different region labels");
    }
    if (eeei_values.size() != E_flow.size()) {
        throw DataError("inequality graph: " + std::to_string(eeei_values.size()) + " EEEI values for " + std::to_string(E_flow.size()) +
                        " regions");
    }
    if (rule == InequalityRule::score_threshold && !(tau >= -1.0 && tau <= 1.0)) {
        throw UsageError("inequality graph: tau " + csv::format_number(tau) + " outside [-1, 1]");
    }

    TradeGraph g;
    g.kind = GraphKind::inequality;
    g.timeframe = E_flow.timeframe;
    g.metadata = {
        {"kind", to_string(g.kind)},
        {"timeframe", E_flow.timeframe.label},
        {"rule", to_string(rule)},
        {"direction", inequality_direction},
    };
    if (rule == InequalityRule::score_threshold) {
        g.metadata["tau"] = csv::format_number(tau);
    }

    const auto m = E_flow.size();
    for (Eigen::Index r = 0; r < m; ++r) {
        g.nodes.push_back({E_flow.labels[static_cast<std::size_t>(r)], E_flow.F(r, r), eeei_values[r]});
    }
    if (m < 2) {
        return g;
    }

    // Ordered-pair deltas, row-major over (r, s), r != s.
    struct Pair {
        Eigen::Index r, s;
        double de, dv;
    };
    std::vector<Pair> pairs;
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index s = 0; s < m; ++s) {
            if (r != s) {
                pairs.push_back({r, s, E_flow.F(r, s) - E_flow.F(s, r), V_flow.F(r, s) - V_flow.F(s, r)});
            }
        }
    }
    Eigen::VectorXd de(static_cast<Eigen::Index>(pairs.size()));
    Eigen::VectorXd dv(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        de[static_cast<Eigen::Index>(k)] = pairs[k].de;
        dv[static_cast<Eigen::Index>(k)] = pairs[k].dv;
    }
    const Eigen::VectorXd raw = equality::minmax_scale(de) - equality::minmax_scale(dv);

    std::vector<std::size_t> chosen;
    Eigen::VectorXd weights;
    if (rule == InequalityRule::strict_mismatch) {
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            if (pairs[k].de > 0.0 && pairs[k].dv < 0.0) {
                chosen.push_back(k);
            }
        }
        Eigen::VectorXd subset(static_cast<Eigen::Index>(chosen.size()));
        for (std::size_t c = 0; c < chosen.size(); ++c) {
            subset[static_cast<Eigen::Index>(c)] = raw[static_cast<Eigen::Index>(chosen[c])];
        }
        weights = equality::minmax_scale(subset);
    } else {
        const Eigen::VectorXd score = equality::minmax_scale(raw);
        std::vector<double> kept;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            if (score[static_cast<Eigen::Index>(k)] > tau) {
                chosen.push_back(k);
                kept.push_back(score[static_cast<Eigen::Index>(k)]);
            }
        }
        weights = Eigen::Map<const Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
    }
    for (std::size_t c = 0; c < chosen.size(); ++c) {
        const auto& p = pairs[chosen[c]];
        g.edges.push_back({E_flow.labels[static_cast<std::size_t>(p.r)], E_flow.labels[static_cast<std::size_t>(p.s)],
                           weights[static_cast<Eigen::Index>(c)], p.de, p.dv});
    }
    return g;
}

PageRankResult pagerank(const TradeGraph& g, const PageRankOptions& options)
{
    if (g.nodes.empty()) {
        throw DataError("pagerank: graph has no nodes");
    }
    if (!(options.damping > 0.0 && options.damping < 1.0)) {
        throw UsageError("pagerank: damping must lie in (0, 1)");
    }
    const auto n = g.nodes.size();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) {
        index[g.nodes[i].id] = i;
    }
    struct Link {
        std::size_t target;
        double weight;
    };
    std::vector<std::vector<Link>> out(n);
    std::vector<double> out_weight(n, 0.0);
    for (const auto& e : g.edges) {
        const double w = std::abs(e.weight);
        if (g.kind != GraphKind::inequality && e.weight < 0.0) {
            throw DataError("pagerank: negative edge weight on " + e.source + " -> " + e.target);
        }
        const auto s = index.at(e.source);
        out[s].push_back({index.at(e.target), w});
        out_weight[s] += w;
    }

    const double d = options.damping;
    const double N = static_cast<double>(n);
    std::vector<double> p(n, 1.0 / N);
    std::vector<double> next(n);
    PageRankResult result;
    for (int it = 1; it <= options.max_iter; ++it) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (out_weight[i] <= 0.0) {
                dangling += p[i];
            }
        }
        std::fill(next.begin(), next.end(), (1.0 - d) / N + d * dangling / N);
        for (std::size_t i = 0; i < n; ++i) {
            if (out_weight[i] > 0.0) {
                for (const auto& link : out[i]) {
                    next[link.target] += d * p[i] * link.weight / out_weight[i];
                }
            }
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            change += std::abs(next[i] - p[i]);
        }
        p.swap(next);
        result.iterations = it;
        result.residual = change;
        if (change < options.tol) {
            result.converged = true;
            break;
        }
    }
    double total = 0.0;
    for (double v : p) {
        total += v;
    }
    for (std::size_t i = 0; i < n; ++i) {
        result.scores[g.nodes[i].id] = p[i] / total;
    }
    return result;
}

ClusteringResult clustering_coefficients(const TradeGraph& g)
{
    if (g.nodes.empty()) {
        throw DataError("clustering: graph has no nodes");
    }
    const auto n = static_cast<Eigen::Index>(g.nodes.size());
    std::unordered_map<std::string, Eigen::Index> index;
    for (Eigen::Index i = 0; i < n; ++i) {
        index[g.nodes[static_cast<std::size_t>(i)].id] = i;
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adjacent = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
    for (const auto& e : g.edges) {
        const auto a = index.at(e.source);
        const auto b = index.at(e.target);
        if (a == b) {
            continue;
        }
        w(a, b) += std::abs(e.weight);
        w(b, a) = w(a, b);
        adjacent(a, b) = adjacent(b, a) = true;
    }
    const double max_w = w.maxCoeff();
    if (max_w > 0.0) {
        w /= max_w;
    }

    ClusteringResult result;
    double sum = 0.0;
    int counted = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<Eigen::Index> neighbours;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (adjacent(i, j)) {
                neighbours.push_back(j);
            }
        }
        const auto k = static_cast<double>(neighbours.size());
        double c = 0.0;
        if (neighbours.size() >= 2) {
            double triangles = 0.0;
            for (std::size_t a = 0; a < neighbours.size(); ++a) {
                for (std::size_t b = a + 1; b < neighbours.size(); ++b) {
                    const auto j = neighbours[a];
                    const auto h = neighbours[b];
                    if (adjacent(j, h)) {
                        triangles += std::cbrt(w(i, j) * w(i, h) * w(j, h));
                    }
                }
            }
            c = std::clamp(2.0 * triangles / (k * (k - 1.0)), 0.0, 1.0);
            sum += c;
            ++counted;
        }
        result.per_node[g.nodes[static_cast<std::size_t>(i)].id] = c;
    }
    result.network_average = counted > 0 ? sum / counted : 0.0;
    return result;
}

} // namespace exionet::network

#include "exionet/export_io.hpp"

#include "exionet/csv.hpp"
#include "exionet/errors.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include "json.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace exionet::io {

namespace {

std::string xml_escape(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string attr(const char* name, std::string_view value)
{
    return std::string(" ") + name + "=\"" + xml_escape(value) + "\"";
}

double parse_double(const std::string& text, const std::string& where)
{
    return csv::parse_number(text, fs::path(where), 0, 0);
}

} // namespace

// ---------------------------------------------------------------------------
// GEXF

std::string to_gexf(const network::TradeGraph& g)
{
    std::vector<const network::Node*> nodes;
    for (const auto& n : g.nodes) {
        nodes.push_back(&n);
    }
    std::sort(nodes.begin(), nodes.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
    std::vector<const network::Edge*> edges;
    for (const auto& e : g.edges) {
        edges.push_back(&e);
    }
    std::sort(edges.begin(), edges.end(),
              [](const auto* a, const auto* b) { return std::tie(a->source, a->target) < std::tie(b->source, b->target); });

    auto metadata = g.metadata;
    metadata["kind"] = network::to_string(g.kind);
    metadata["timeframe"] = g.timeframe.label;
    metadata["timeframe_start"] = std::to_string(g.timeframe.start_year);
    metadata["timeframe_end"] = std::to_string(g.timeframe.end_year);
    std::string description;
    for (const auto& [key, value] : metadata) {
        description += key + "=" + value + "\n";
    }

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<gexf xmlns=\"" << gexf_namespace << "\" xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\""
        << " xsi:schemaLocation=\"http://gexf.net/1.3 http://gexf.net/1.3/gexf.xsd\" version=\"1.3\">\n";
    out << "  <meta>\n    <creator>exionet</creator>\n    <description>" << xml_escape(description) << "</description>\n  </meta>\n";
    out << "  <graph mode=\"static\" defaultedgetype=\"directed\">\n";
    out << "    <attributes class=\"node\">\n"
        << "      <attribute id=\"domestic\" title=\"domestic\" type=\"double\"/>\n"
        << "      <attribute id=\"eeei\" title=\"eeei\" type=\"double\"/>\n"
        << "    </attributes>\n";
    out << "    <attributes class=\"edge\">\n"
        << "      <attribute id=\"raw_delta_e\" title=\"raw_delta_e\" type=\"double\"/>\n"
        << "      <attribute id=\"raw_delta_v\" title=\"raw_delta_v\" type=\"double\"/>\n"
        << "    </attributes>\n";
    out << "    <nodes>\n";
    for (const auto* n : nodes) {
        out << "      <node" << attr("id", n->id) << attr("label", n->id) << ">\n        <attvalues>\n";
        out << "          <attvalue for=\"domestic\"" << attr("value", csv::format_number(n->domestic)) << "/>\n";
        if (n->eeei) {
            out << "          <attvalue for=\"eeei\"" << attr("value", csv::format_number(*n->eeei)) << "/>\n";
        }
        out << "        </attvalues>\n      </node>\n";
    }
    out << "    </nodes>\n    <edges>\n";
    std::size_t edge_id = 0;
    for (const auto* e : edges) {
        out << "      <edge" << attr("id", std::to_string(edge_id++)) << attr("source", e->source) << attr("target", e->target)
            << attr("weight", csv::format_number(e->weight));
        if (!e->raw_delta_e && !e->raw_delta_v) {
            out << "/>\n";
            continue;
        }
        out << ">\n        <attvalues>\n";
        if (e->raw_delta_e) {
            out << "          <attvalue for=\"raw_delta_e\"" << attr("value", csv::format_number(*e->raw_delta_e)) << "/>\n";
        }
        if (e->raw_delta_v) {
            out << "          <attvalue for=\"raw_delta_v\"" << attr("value", csv::format_number(*e->raw_delta_v)) << "/>\n";
        }
        out << "        </attvalues>\n      </edge>\n";
    }
    out << "    </edges>\n  </graph>\n</gexf>\n";
    return out.str();
}

void write_gexf(const network::TradeGraph& g, const fs::path& path)
{
    g.validate();
    csv::write_text(path, to_gexf(g));
}

network::TradeGraph parse_gexf(const std::string& document, std::vector<std::string>* warnings)
{
    auto warn = [&](const std::string& message) {
        if (warnings != nullptr) {
            warnings->push_back(message);
        }
    };

    pt::ptree tree;
    try {
        std::istringstream in(document);
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw DataError(std::string("malformed GEXF: ") + e.what());
    }
    const auto root = tree.get_child_optional("gexf");
    if (!root) {
        throw DataError("malformed GEXF: missing <gexf> root element");
    }
    const auto graph = root->get_child_optional("graph");
    if (!graph) {
        throw DataError("malformed GEXF: missing <graph> element");
    }

    network::TradeGraph g;
    if (const auto description = root->get_optional<std::string>("meta.description")) {
        std::istringstream lines(*description);
        std::string line;
        while (std::getline(lines, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                continue;
            }
            g.metadata[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    if (const auto it = g.metadata.find("kind"); it != g.metadata.end()) {
        g.kind = network::parse_graph_kind(it->second);
    }
    g.timeframe.label = g.metadata.count("timeframe") ? g.metadata["timeframe"] : "";
    try {
        if (g.metadata.count("timeframe_start")) {
            g.timeframe.start_year = std::stoi(g.metadata["timeframe_start"]);
        }
        if (g.metadata.count("timeframe_end")) {
            g.timeframe.end_year = std::stoi(g.metadata["timeframe_end"]);
        }
    } catch (const std::exception&) {
        throw DataError("malformed GEXF: bad timeframe bounds in metadata");
    }
    g.metadata.erase("timeframe_start");
    g.metadata.erase("timeframe_end");

    // Attribute id -> title per class.
    std::map<std::string, std::map<std::string, std::string>> declared;
    for (const auto& [name, child] : *graph) {
        if (name != "attributes") {
            continue;
        }
        const auto cls = child.get<std::string>("<xmlattr>.class", "node");
        for (const auto& [attr_name, attribute] : child) {
            if (attr_name == "attribute") {
                declared[cls][attribute.get<std::string>("<xmlattr>.id", "")] = attribute.get<std::string>("<xmlattr>.title", "");
            }
        }
    }

    std::set<std::string> ids;
    if (const auto nodes = graph->get_child_optional("nodes")) {
        for (const auto& [name, node] : *nodes) {
            if (name != "node") {
                continue;
            }
            network::Node n;
            n.id = node.get<std::string>("<xmlattr>.id", "");
            if (n.id.empty()) {
                throw DataError("malformed GEXF: node without id");
            }
            if (const auto values = node.get_child_optional("attvalues")) {
                for (const auto& [vname, value] : *values) {
                    if (vname != "attvalue") {
                        continue;
                    }
                    const auto key = value.get<std::string>("<xmlattr>.for", "");
                    const auto title = declared["node"].count(key) ? declared["node"][key] : key;
                    const auto text = value.get<std::string>("<xmlattr>.value", "");
                    if (title == "domestic") {
                        n.domestic = parse_double(text, "node " + n.id + " domestic");
                    } else if (title == "eeei") {
                        n.eeei = parse_double(text, "node " + n.id + " eeei");
                    } else {
                        warn("node " + n.id + ": ignoring unknown attribute '" + key + "'");
                    }
                }
            }
            ids.insert(n.id);
            g.nodes.push_back(std::move(n));
        }
    }
    if (const auto edges = graph->get_child_optional("edges")) {
        for (const auto& [name, edge] : *edges) {
            if (name != "edge") {
                continue;
            }
            network::Edge e;
            e.source = edge.get<std::string>("<xmlattr>.source", "");
            e.target = edge.get<std::string>("<xmlattr>.target", "");
            if (!ids.contains(e.source) || !ids.contains(e.target)) {
                throw DataError("GEXF edge " + e.source + " -> " + e.target + " has a dangling endpoint");
            }
            e.weight = parse_double(edge.get<std::string>("<xmlattr>.weight", "1"), "edge weight");
            if (const auto values = edge.get_child_optional("attvalues")) {
                for (const auto& [vname, value] : *values) {
                    if (vname != "attvalue") {
                        continue;
                    }
                    const auto key = value.get<std::string>("<xmlattr>.for", "");
                    const auto title = declared["edge"].count(key) ? declared["edge"][key] : key;
                    const auto text = value.get<std::string>("<xmlattr>.value", "");
                    if (title == "raw_delta_e") {
                        e.raw_delta_e = parse_double(text, "edge raw_delta_e");
                    } else if (title == "raw_delta_v") {
                        e.raw_delta_v = parse_double(text, "edge raw_delta_v");
                    } else {
                        warn("edge " + e.source + " -> " + e.target + ": ignoring unknown attribute '" + key + "'");
                    }
                }
            }
            g.edges.push_back(std::move(e));
        }
    }
    return g;
}

network::TradeGraph read_gexf(const fs::path& path, std::vector<std::string>* warnings)
{
    if (!fs::is_regular_file(path)) {
        throw DataError("missing file: " + path.string());
    }
    return parse_gexf(csv::read_text(path), warnings);
}

// ---------------------------------------------------------------------------
// Tabular results

ResultFormat parse_result_format(const std::string& text)
{
    if (text == "csv") return ResultFormat::csv;
    if (text == "json") return ResultFormat::json;
    throw UsageError("unknown result format '" + text + "' (expected csv|json)");
}

const char* extension_of(ResultFormat format)
{
    return format == ResultFormat::csv ? ".csv" : ".json";
}

namespace {

using Table = std::pair<csv::Row, std::vector<std::vector<nlohmann::ordered_json>>>;

std::string render(const Table& table, ResultFormat format)
{
    const auto& [header, rows] = table;
    if (format == ResultFormat::json) {
        auto array = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json object = nlohmann::ordered_json::object();
            for (std::size_t c = 0; c < header.size(); ++c) {
                object[header[c]] = row[c];
            }
            array.push_back(std::move(object));
        }
        return array.dump(2) + "\n";
    }
    std::string out = csv::join(header) + "\n";
    for (const auto& row : rows) {
        csv::Row fields;
        for (const auto& cell : row) {
            if (cell.is_string()) {
                fields.push_back(cell.get<std::string>());
            } else if (cell.is_null()) {
                fields.emplace_back();
            } else {
                fields.push_back(csv::format_number(cell.get<double>()));
            }
        }
        out += csv::join(fields) + "\n";
    }
    return out;
}

nlohmann::ordered_json optional_number(const std::optional<double>& value)
{
    return value ? nlohmann::ordered_json(*value) : nlohmann::ordered_json(nullptr);
}

} // namespace

std::string format_results(std::span<const equality::EeeiRecord> records, ResultFormat format)
{
    Table table{{"region", "year_or_period", "e_net_Mt", "v_net_MEUR", "scaled_e", "scaled_v", "eeei", "quadrant"}, {}};
    for (const auto& r : records) {
        table.second.push_back({r.region, r.timeframe, r.e_net, r.v_net, r.scaled_e, r.scaled_v, r.eeei, equality::to_string(r.quadrant)});
    }
    return render(table, format);
}

std::string format_results(const RegionFlowMatrix& flow, ResultFormat format)
{
    flow.check_shape();
    Table table;
    table.first.push_back("region");
    table.first.insert(table.first.end(), flow.labels.begin(), flow.labels.end());
    for (Eigen::Index r = 0; r < flow.size(); ++r) {
        std::vector<nlohmann::ordered_json> row{flow.labels[static_cast<std::size_t>(r)]};
        for (Eigen::Index s = 0; s < flow.size(); ++s) {
            row.emplace_back(flow.F(r, s));
        }
        table.second.push_back(std::move(row));
    }
    return render(table, format);
}

std::string format_results(std::span<const MetricRow> rows, ResultFormat format)
{
    Table table{{"region", "timeframe", "kind", "pagerank", "clustering"}, {}};
    for (const auto& r : rows) {
        table.second.push_back({r.region, r.timeframe, r.kind, optional_number(r.pagerank), optional_number(r.clustering)});
    }
    return render(table, format);
}

namespace {

template <typename T>
void write_nonempty(const T& records, const fs::path& path, ResultFormat format)
{
    if (records.empty()) {
        throw DataError("refusing to write empty result set to " + path.string());
    }
    csv::write_text(path, format_results(records, format));
}

} // namespace

void write_results(std::span<const equality::EeeiRecord> records, const fs::path& path, ResultFormat format)
{
    write_nonempty(records, path, format);
}

void write_results(const RegionFlowMatrix& flow, const fs::path& path, ResultFormat format)
{
    if (flow.labels.empty()) {
        throw DataError("refusing to write empty flow matrix to " + path.string());
    }
    csv::write_text(path, format_results(flow, format));
}

void write_results(std::span<const MetricRow> rows, const fs::path& path, ResultFormat format)
{
    write_nonempty(rows, path, format);
}

std::string format_labeled_matrix(const std::vector<std::string>& labels, const Eigen::MatrixXd& matrix)
{
    RegionFlowMatrix carrier{QuantityKind::emission, {}, labels, matrix};
    return format_results(carrier, ResultFormat::csv);
}

std::string flow_file_name(QuantityKind kind, const std::string& timeframe)
{
    return "flows_" + to_string(kind) + "_" + timeframe + ".csv";
}

RegionFlowMatrix read_flow_matrix(const fs::path& path, QuantityKind kind, const Timeframe& timeframe)
{
    if (!fs::is_regular_file(path)) {
        throw DataError("missing file: " + path.string());
    }
    const auto rows = csv::read_file(path);
    if (rows.empty() || rows.front().empty()) {
        throw DataError(path.string() + ": empty flow matrix file");
    }
    RegionFlowMatrix flow;
    flow.kind = kind;
    flow.timeframe = timeframe;
    flow.labels.assign(rows.front().begin() + 1, rows.front().end());
    const auto m = static_cast<Eigen::Index>(flow.labels.size());
    if (static_cast<Eigen::Index>(rows.size()) != m + 1) {
        throw DataError(path.string() + ": dimension mismatch: " + std::to_string(rows.size() - 1) + " body rows for " + std::to_string(m) +
                        " labels");
    }
    flow.F.resize(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r) + 1];
        if (static_cast<Eigen::Index>(row.size()) != m + 1 || row[0] != flow.labels[static_cast<std::size_t>(r)]) {
            throw DataError(path.string() + ": row " + std::to_string(r + 2) + " does not match the header labels");
        }
        for (Eigen::Index s = 0; s < m; ++s) {
            flow.F(r, s) = csv::parse_number(row[static_cast<std::size_t>(s) + 1], path, static_cast<std::size_t>(r) + 2,
                                             static_cast<std::size_t>(s) + 2);
        }
    }
    return flow;
}

std::vector<equality::EeeiRecord> read_eeei_csv(const fs::path& path)
{
    if (!fs::is_regular_file(path)) {
        throw DataError("missing file: " + path.string());
    }
    const auto rows = csv::read_file(path);
    const csv::Row header{"region", "year_or_period", "e_net_Mt", "v_net_MEUR", "scaled_e", "scaled_v", "eeei", "quadrant"};
    if (rows.empty() || rows.front() != header) {
        throw DataError(path.string() + ": unexpected EEEI header");
    }
    std::vector<equality::EeeiRecord> records;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != header.size()) {
            throw DataError(path.string() + ": row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) + " columns");
        }
        equality::EeeiRecord r;
        r.region = row[0];
        r.timeframe = row[1];
        r.e_net = csv::parse_number(row[2], path, i + 1, 3);
        r.v_net = csv::parse_number(row[3], path, i + 1, 4);
        r.scaled_e = csv::parse_number(row[4], path, i + 1, 5);
        r.scaled_v = csv::parse_number(row[5], path, i + 1, 6);
        r.eeei = csv::parse_number(row[6], path, i + 1, 7);
        r.quadrant = equality::parse_quadrant(row[7]);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<MetricRow> read_metrics_csv(const fs::path& path)
{
    if (!fs::is_regular_file(path)) {
        throw DataError("missing file: " + path.string());
    }
    const auto rows = csv::read_file(path);
    const csv::Row header{"region", "timeframe", "kind", "pagerank", "clustering"};
    if (rows.empty() || rows.front() != header) {
        throw DataError(path.string() + ": unexpected metrics header");
    }
    std::vector<MetricRow> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != header.size()) {
            throw DataError(path.string() + ": row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) + " columns");
        }
        MetricRow m{row[0], row[1], row[2], std::nullopt, std::nullopt};
        if (!row[3].empty()) {
            m.pagerank = csv::parse_number(row[3], path, i + 1, 4);
        }
        if (!row[4].empty()) {
            m.clustering = csv::parse_number(row[4], path, i + 1, 5);
        }
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace exionet::io

#pragma once

// Checks a document against the GEXF 1.3 content model for the static subset: element
// nesting and order, required attributes, enumerated values, attribute typing and id
// references. Returns an empty list when the document conforms.

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace gexf_schema {

namespace pt = boost::property_tree;

inline bool is_double(const std::string& text)
{
    if (text == "INF" || text == "-INF" || text == "NaN") return true;
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    return ec == std::errc() && ptr == last && first != last;
}

inline bool is_integer(const std::string& text)
{
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

class Validator {
public:
    std::vector<std::string> errors;

    void run(const std::string& document)
    {
        pt::ptree tree;
        try {
            std::istringstream in(document);
            pt::read_xml(in, tree);
        } catch (const pt::xml_parser_error& e) {
            errors.push_back(std::string("not well-formed: ") + e.what());
            return;
        }
        std::vector<std::string> roots;
        for (const auto& [name, child] : tree)
            if (name != "<xmlcomment>") roots.push_back(name);
        if (roots.size() != 1 || roots[0] != "gexf") {
            errors.push_back("root element must be <gexf>");
            return;
        }
        gexf(tree.get_child("gexf"));
    }

private:
    std::set<std::string> node_ids_;
    std::set<std::string> edge_ids_;
    std::map<std::string, std::map<std::string, std::string>> declared_; // class -> id -> type

    static const pt::ptree* attrs(const pt::ptree& t)
    {
        const auto it = t.find("<xmlattr>");
        return it == t.not_found() ? nullptr : &it->second;
    }

    std::string attr(const pt::ptree& t, const std::string& key) const
    {
        const auto* a = attrs(t);
        return a ? a->get<std::string>(key, "") : "";
    }

    bool has(const pt::ptree& t, const std::string& key) const
    {
        const auto* a = attrs(t);
        return a && a->find(key) != a->not_found();
    }

    void allowed_attributes(const pt::ptree& t, const std::string& where, const std::set<std::string>& allowed)
    {
        if (const auto* a = attrs(t))
            for (const auto& [k, v] : *a)
                if (!allowed.count(k) && k.rfind("xmlns", 0) != 0 && k.rfind("xsi:", 0) != 0)
                    errors.push_back(where + ": attribute '" + k + "' is not allowed");
    }

    void required(const pt::ptree& t, const std::string& where, const std::vector<std::string>& keys)
    {
        for (const auto& k : keys)
            if (!has(t, k)) errors.push_back(where + ": missing required attribute '" + k + "'");
    }

    void enumerated(const pt::ptree& t, const std::string& where, const std::string& key, const std::set<std::string>& values)
    {
        if (has(t, key) && !values.count(attr(t, key)))
            errors.push_back(where + ": " + key + "='" + attr(t, key) + "' is not an allowed value");
    }

    static std::vector<std::pair<std::string, const pt::ptree*>> elements(const pt::ptree& t)
    {
        std::vector<std::pair<std::string, const pt::ptree*>> out;
        for (const auto& [name, child] : t)
            if (name != "<xmlattr>" && name != "<xmlcomment>") out.emplace_back(name, &child);
        return out;
    }

    void gexf(const pt::ptree& t)
    {
        required(t, "gexf", {"version"});
        allowed_attributes(t, "gexf", {"version", "variant"});
        if (attr(t, "version") != "1.3") errors.push_back("gexf: version must be 1.3");
        if (attr(t, "xmlns") != "http://gexf.net/1.3") errors.push_back("gexf: default namespace must be http://gexf.net/1.3");
        const auto kids = elements(t);
        std::size_t i = 0;
        if (i < kids.size() && kids[i].first == "meta") meta(*kids[i++].second);
        if (i < kids.size() && kids[i].first == "graph") graph(*kids[i++].second);
        else errors.push_back("gexf: exactly one <graph> is required after optional <meta>");
        if (i != kids.size()) errors.push_back("gexf: unexpected element <" + kids[i].first + ">");
    }

    void meta(const pt::ptree& t)
    {
        allowed_attributes(t, "meta", {"lastmodifieddate"});
        for (const auto& [name, child] : elements(t)) {
            if (name != "creator" && name != "keywords" && name != "description")
                errors.push_back("meta: unexpected element <" + name + ">");
            else if (!elements(*child).empty())
                errors.push_back("meta/" + name + ": must contain text only");
        }
    }

    void graph(const pt::ptree& t)
    {
        allowed_attributes(t, "graph", {"timeformat", "start", "startopen", "end", "endopen", "defaultedgetype", "idtype", "mode",
                                        "timerepresentation", "timezone"});
        enumerated(t, "graph", "defaultedgetype", {"directed", "undirected", "mutual"});
        enumerated(t, "graph", "mode", {"static", "dynamic"});
        enumerated(t, "graph", "idtype", {"integer", "string"});
        const auto kids = elements(t);
        std::size_t i = 0;
        while (i < kids.size() && kids[i].first == "attributes") attributes(*kids[i++].second);
        bool seen_nodes = false, seen_edges = false;
        for (; i < kids.size(); ++i) {
            if (kids[i].first == "nodes" && !seen_nodes && !seen_edges) {
                seen_nodes = true;
                nodes(*kids[i].second);
            } else if (kids[i].first == "edges" && !seen_edges) {
                seen_edges = true;
                edges(*kids[i].second);
            } else {
                errors.push_back("graph: unexpected or misplaced element <" + kids[i].first + ">");
            }
        }
    }

    void attributes(const pt::ptree& t)
    {
        required(t, "attributes", {"class"});
        allowed_attributes(t, "attributes", {"class", "mode", "start", "end", "startopen", "endopen"});
        enumerated(t, "attributes", "class", {"node", "edge"});
        enumerated(t, "attributes", "mode", {"static", "dynamic"});
        const auto cls = attr(t, "class");
        static const std::set<std::string> types{"integer", "long", "double", "float", "boolean", "liststring", "listinteger", "listlong",
                                                 "listfloat", "listdouble", "listboolean", "string", "anyURI", "date", "listbyte",
                                                 "listshort", "listchar", "short", "byte", "char", "bigdecimal", "biginteger",
                                                 "listbigdecimal", "listbiginteger"};
        for (const auto& [name, child] : elements(t)) {
            if (name != "attribute") {
                errors.push_back("attributes: unexpected element <" + name + ">");
                continue;
            }
            required(*child, "attribute", {"id", "title", "type"});
            allowed_attributes(*child, "attribute", {"id", "title", "type"});
            enumerated(*child, "attribute", "type", types);
            const auto id = attr(*child, "id");
            if (declared_[cls].count(id)) errors.push_back("attribute: duplicate id '" + id + "' in class " + cls);
            declared_[cls][id] = attr(*child, "type");
            for (const auto& [sub, subchild] : elements(*child))
                if (sub != "default" && sub != "options") errors.push_back("attribute: unexpected element <" + sub + ">");
        }
    }

    void attvalues(const pt::ptree& t, const std::string& cls)
    {
        const auto kids = elements(t);
        if (kids.empty()) errors.push_back("attvalues: at least one <attvalue> is required");
        for (const auto& [name, child] : kids) {
            if (name != "attvalue") {
                errors.push_back("attvalues: unexpected element <" + name + ">");
                continue;
            }
            required(*child, "attvalue", {"for", "value"});
            allowed_attributes(*child, "attvalue", {"for", "value", "start", "end", "startopen", "endopen"});
            const auto key = attr(*child, "for");
            const auto it = declared_[cls].find(key);
            if (it == declared_[cls].end()) {
                errors.push_back("attvalue: for='" + key + "' does not reference a declared " + cls + " attribute");
                continue;
            }
            const auto value = attr(*child, "value");
            if ((it->second == "double" || it->second == "float") && !is_double(value))
                errors.push_back("attvalue: '" + value + "' is not a valid " + it->second);
            if ((it->second == "integer" || it->second == "long") && !is_integer(value))
                errors.push_back("attvalue: '" + value + "' is not a valid " + it->second);
        }
    }

    void nodes(const pt::ptree& t)
    {
        allowed_attributes(t, "nodes", {"count"});
        for (const auto& [name, child] : elements(t)) {
            if (name != "node") {
                errors.push_back("nodes: unexpected element <" + name + ">");
                continue;
            }
            required(*child, "node", {"id"});
            allowed_attributes(*child, "node", {"id", "label", "pid", "start", "end", "startopen", "endopen"});
            const auto id = attr(*child, "id");
            if (!node_ids_.insert(id).second) errors.push_back("node: duplicate id '" + id + "'");
            for (const auto& [sub, subchild] : elements(*child)) {
                if (sub == "attvalues") attvalues(*subchild, "node");
                else if (sub != "spells" && sub != "nodes" && sub != "edges" && sub != "parents")
                    errors.push_back("node: unexpected element <" + sub + ">");
            }
        }
    }

    void edges(const pt::ptree& t)
    {
        allowed_attributes(t, "edges", {"count"});
        for (const auto& [name, child] : elements(t)) {
            if (name != "edge") {
                errors.push_back("edges: unexpected element <" + name + ">");
                continue;
            }
            required(*child, "edge", {"id", "source", "target"});
            allowed_attributes(*child, "edge", {"id", "source", "target", "label", "weight", "type", "kind", "start", "end",
                                                "startopen", "endopen"});
            enumerated(*child, "edge", "type", {"directed", "undirected", "mutual"});
            const auto id = attr(*child, "id");
            if (!edge_ids_.insert(id).second) errors.push_back("edge: duplicate id '" + id + "'");
            for (const auto* end : {"source", "target"})
                if (!node_ids_.count(attr(*child, end)))
                    errors.push_back("edge " + id + ": " + end + " '" + attr(*child, end) + "' is not a declared node");
            if (has(*child, "weight") && !is_double(attr(*child, "weight")))
                errors.push_back("edge " + id + ": weight is not a valid number");
            for (const auto& [sub, subchild] : elements(*child)) {
                if (sub == "attvalues") attvalues(*subchild, "edge");
                else if (sub != "spells") errors.push_back("edge: unexpected element <" + sub + ">");
            }
        }
    }
};

inline std::vector<std::string> validate(const std::string& document)
{
    Validator v;
    v.run(document);
    return v.errors;
}

} // namespace gexf_schema

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace exionet::config {

/// One configuration value: a scalar (strings unquoted, numbers and booleans as text)
/// or a single-line array of scalars.
struct Value {
    std::vector<std::string> items;
    bool is_array = false;

    const std::string& scalar() const;
};

/// Flat dotted-key view of a TOML-style document: `[section]` headers prefix the keys
/// that follow, so `damping = 0.9` under `[pagerank]` becomes `pagerank.damping`.
/// Supported: comments, basic double-quoted strings, literal single-quoted strings,
/// bare numbers/booleans and single-line arrays.
using Table = std::map<std::string, Value>;

Table parse(std::string_view text, const std::string& source = "<config>");
Table load(const std::filesystem::path& path);

} // namespace exionet::config

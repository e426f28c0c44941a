#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace exionet::csv {

using Row = std::vector<std::string>;

/// Splits one record on `delimiter`, honoring RFC-4180 double quotes.
Row split_line(std::string_view line, char delimiter = ',');

/// Reads every record of a text file. Blank trailing lines are dropped, CR before LF is stripped.
std::vector<Row> read_file(const std::filesystem::path& path, char delimiter = ',');

/// Parses a full cell as a double. Throws DataError naming the file and 1-based coordinates.
double parse_number(std::string_view cell, const std::filesystem::path& file, std::size_t row, std::size_t column);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// Quotes a field if it contains a delimiter, quote or line break.
std::string quote(std::string_view field);

std::string join(const Row& fields);

/// Writes `content` to `path`, creating parent directories. Throws DataError when unwritable.
void write_text(const std::filesystem::path& path, std::string_view content);

std::string read_text(const std::filesystem::path& path);

} // namespace exionet::csv

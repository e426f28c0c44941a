#include "exionet/config.hpp"

#include "exionet/csv.hpp"
#include "exionet/errors.hpp"

#include <cctype>

namespace exionet::config {

const std::string& Value::scalar() const
{
    static const std::string empty;
    if (is_array || items.empty()) {
        return empty;
    }
    return items.front();
}

namespace {

class Cursor {
public:
    Cursor(std::string_view line, const std::string& where) : line_(line), where_(where) {}

    void skip_space()
    {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) {
            ++pos_;
        }
    }
    bool at_end()
    {
        skip_space();
        return pos_ >= line_.size() || line_[pos_] == '#';
    }
    char peek()
    {
        skip_space();
        return pos_ < line_.size() ? line_[pos_] : '\0';
    }
    void expect(char c)
    {
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }
    std::string key()
    {
        skip_space();
        if (peek() == '"') {
            return quoted();
        }
        const auto start = pos_;
        while (pos_ < line_.size() && (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '_' || line_[pos_] == '-' ||
                                       line_[pos_] == '.')) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected a key");
        }
        return std::string(line_.substr(start, pos_ - start));
    }
    std::string scalar()
    {
        const char c = peek();
        if (c == '"' || c == '\'') {
            return quoted();
        }
        const auto start = pos_;
        while (pos_ < line_.size() && line_[pos_] != ',' && line_[pos_] != ']' && line_[pos_] != '#') {
            ++pos_;
        }
        auto text = line_.substr(start, pos_ - start);
        while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
            text.remove_suffix(1);
        }
        if (text.empty()) {
            fail("expected a value");
        }
        return std::string(text);
    }
    Value value()
    {
        Value v;
        if (peek() == '[') {
            ++pos_;
            v.is_array = true;
            if (peek() == ']') {
                ++pos_;
                return v;
            }
            while (true) {
                v.items.push_back(scalar());
                if (peek() == ',') {
                    ++pos_;
                    if (peek() == ']') {
                        ++pos_;
                        break;
                    }
                    continue;
                }
                expect(']');
                break;
            }
            return v;
        }
        v.items.push_back(scalar());
        return v;
    }
    [[noreturn]] void fail(const std::string& what) const { throw UsageError(where_ + ": " + what); }

private:
    std::string quoted()
    {
        const char q = line_[pos_++];
        std::string out;
        while (pos_ < line_.size() && line_[pos_] != q) {
            char c = line_[pos_++];
            if (q == '"' && c == '\\' && pos_ < line_.size()) {
                const char e = line_[pos_++];
                switch (e) {
                case 'n': c = '\n'; break;
                case 't': c = '\t'; break;
                case '"': c = '"'; break;
                case '\\': c = '\\'; break;
                default: fail(std::string("unsupported escape \\") + e);
                }
            }
            out.push_back(c);
        }
        if (pos_ >= line_.size()) {
            fail("unterminated string");
        }
        ++pos_;
        return out;
    }

    std::string_view line_;
    std::string where_;
    std::size_t pos_ = 0;
};

} // namespace

Table parse(std::string_view text, const std::string& source)
{
    Table table;
    std::string section;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        auto line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        Cursor cur(line, source + ":" + std::to_string(line_no));
        if (cur.at_end()) {
            continue;
        }
        if (cur.peek() == '[') {
            cur.expect('[');
            section = cur.key();
            cur.expect(']');
            if (!cur.at_end()) {
                cur.fail("trailing characters after section header");
            }
            continue;
        }
        const auto key = cur.key();
        cur.expect('=');
        auto value = cur.value();
        if (!cur.at_end()) {
            cur.fail("trailing characters after value");
        }
        const auto full = section.empty() ? key : section + "." + key;
        if (!table.emplace(full, std::move(value)).second) {
            cur.fail("duplicate key '" + full + "'");
        }
    }
    return table;
}

Table load(const std::filesystem::path& path)
{
    if (!std::filesystem::is_regular_file(path)) {
        throw UsageError("config file not found: " + path.string());
    }
    return parse(csv::read_text(path), path.string());
}

} // namespace exionet::config

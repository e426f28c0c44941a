#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace exionet {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Incremental hasher for composite cache keys.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(std::string_view bytes);
    /// Hashes the file contents followed by a separator.
    Sha256& update_file(const std::filesystem::path& path);
    std::string hex_digest();

private:
    struct State;
    State* state_;
};

} // namespace exionet

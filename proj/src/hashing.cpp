#include "exionet/hashing.hpp"

#include "exionet/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>

namespace exionet {

struct Sha256::State {
    EVP_MD_CTX* ctx = nullptr;
};

Sha256::Sha256() : state_(new State)
{
    state_->ctx = EVP_MD_CTX_new();
    if (state_->ctx == nullptr || EVP_DigestInit_ex(state_->ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(state_->ctx);
        delete state_;
        throw Error("SHA-256 initialisation failed");
    }
}

Sha256::~Sha256()
{
    EVP_MD_CTX_free(state_->ctx);
    delete state_;
}

Sha256& Sha256::update(std::string_view bytes)
{
    EVP_DigestUpdate(state_->ctx, bytes.data(), bytes.size());
    return *this;
}

Sha256& Sha256::update_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file for hashing: " + path.string());
    }
    std::array<char, 1 << 16> buffer{};
    while (in) {
        in.read(buffer.data(), buffer.size());
        update(std::string_view(buffer.data(), static_cast<std::size_t>(in.gcount())));
    }
    return update(std::string_view("\0", 1));
}

std::string Sha256::hex_digest()
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    EVP_DigestFinal_ex(state_->ctx, digest.data(), &length);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string sha256_hex(std::string_view bytes)
{
    Sha256 h;
    return h.update(bytes).hex_digest();
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file for hashing: " + path.string());
    }
    Sha256 h;
    std::array<char, 1 << 16> buffer{};
    while (in) {
        in.read(buffer.data(), buffer.size());
        h.update(std::string_view(buffer.data(), static_cast<std::size_t>(in.gcount())));
    }
    return h.hex_digest();
}

} // namespace exionet

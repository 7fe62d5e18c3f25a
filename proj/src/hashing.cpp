#include "gdist/hashing.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include "gdist/errors.hpp"
#include "gdist/group.hpp"

namespace gdist {

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 digest failed");
    return to_hex(std::string(reinterpret_cast<const char*>(md), len));
}

std::uint32_t crc32_of(std::string_view data) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
    return static_cast<std::uint32_t>(crc);
}

}  // namespace gdist

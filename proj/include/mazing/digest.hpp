#pragma once
// SHA-256 digests for artifact manifests (OpenSSL EVP).

#include <filesystem>
#include <string>

namespace mazing {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace mazing

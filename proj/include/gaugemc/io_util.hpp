// Small file/serialization helpers shared by the persistence paths.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gaugemc::io {

// FNV-1a 64-bit content hash; used in manifests and checkpoint fingerprints.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64(const std::string& s);
std::string hash_hex(std::uint64_t h);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

// Pack a +/-1 sign sequence into bytes, LSB first (bit set <=> sign is -1).
std::vector<std::uint8_t> pack_signs(const std::vector<std::int8_t>& signs);
std::vector<std::int8_t> unpack_signs(const std::vector<std::uint8_t>& bytes,
                                      std::size_t count);

std::string read_file(const std::string& path);
// Write via a temporary file in the same directory followed by a rename, so a
// crash can never leave a half-written file at `path`.
void atomic_write_file(const std::string& path, const std::string& contents);

std::uint64_t file_hash(const std::string& path);

}  // namespace gaugemc::io

#pragma once
// VMV1 volume files: a JSON header (`name.vmv`) next to a raw payload
// (`name.raw`) holding one byte per voxel, x fastest, channels last.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "lvoaug/volume.hpp"

namespace lvoaug {

std::filesystem::path raw_path_for(const std::filesystem::path& header);

void write_vmv(const std::filesystem::path& header, const BinaryVolume& v);
BinaryVolume read_vmv(const std::filesystem::path& header);

// FNV-1a over a byte range; used for determinism checks and file hashes.
std::uint64_t fnv1a(std::span<const std::uint8_t> bytes, std::uint64_t seed = 14695981039346656037ull);
std::uint64_t hash_file(const std::filesystem::path& p);
std::string hex64(std::uint64_t h);

}  // namespace lvoaug

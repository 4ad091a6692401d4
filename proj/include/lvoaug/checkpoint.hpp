#pragma once
// Checkpoints: `<dir>/model.json` (network config and tensor table) and
// `<dir>/params.bin` (little-endian float32 tensors, column-major, in table
// order).

#include <filesystem>

#include "lvoaug/network.hpp"

namespace lvoaug {

void save_checkpoint(const std::filesystem::path& dir, Network<float>& net);
Network<float> load_checkpoint(const std::filesystem::path& dir);

}  // namespace lvoaug

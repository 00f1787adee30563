#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fieldforge/core/tensor.hpp"

namespace fieldforge {

// Versioned binary tensor container. Layout, all little-endian:
//   "FFCK" | u32 version | repeated { u32 name_len | name bytes |
//   u32 rank | u64 extents[rank] | f32 values[] } until EOF.
// Version 1 carries float32 payloads. Loaders reject unknown versions.
inline constexpr std::uint32_t kCheckpointVersion = 1;

using NamedTensors = std::vector<std::pair<std::string, Tensor<float>>>;

// Atomic: writes to a temp file in the same directory, then renames.
void save_checkpoint(const std::string& path, const NamedTensors& tensors);

NamedTensors load_checkpoint(const std::string& path);

}  // namespace fieldforge

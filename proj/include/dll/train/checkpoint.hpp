#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dll/tensor.hpp"
#include "dll/train/adam.hpp"

namespace dll {

/// Versioned binary snapshot of a training run: every parameter tensor by
/// name, the matching optimizer moments, the experiment RNG cursor, and the
/// epoch counter. Values are 64-bit little-endian; save -> load -> save is
/// byte-identical, and loading never mutates partial state (it either
/// returns a whole checkpoint or throws).
struct Checkpoint {
    std::uint32_t version = 1;
    std::vector<std::pair<std::string, Tensor>> params;
    std::vector<std::pair<std::string, AdamState>> optimizer;
    std::array<std::uint64_t, 4> rng_cursor{};
    std::uint64_t epoch = 0;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes);

}  // namespace dll

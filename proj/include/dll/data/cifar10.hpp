#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dll/data/dataset.hpp"

namespace dll {

// A CIFAR-10 binary batch is a sequence of 3073-byte records: one label byte
// then 3072 pixel bytes in channel-major R,G,B order, each channel a 32x32
// row-major plane.
constexpr std::size_t kCifarRecordBytes = 3073;

LabeledImageSet parse_cifar10(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_cifar10(const LabeledImageSet& set);

/// Loads and concatenates one or more batch files (train: data_batch_1..5,
/// test: test_batch).
LabeledImageSet load_cifar10(const std::vector<std::string>& paths);

}  // namespace dll

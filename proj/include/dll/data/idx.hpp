#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dll/data/dataset.hpp"
#include "dll/tensor.hpp"

namespace dll {

// Raw file loading. Gzip-compressed payloads (1f 8b magic) are decompressed
// transparently before parsing.
std::vector<std::uint8_t> read_file_bytes(const std::string& path);
std::vector<std::uint8_t> gunzip_if_needed(std::vector<std::uint8_t> bytes);

/// Parses an IDX container: two zero bytes, a dtype code (only 0x08 =
/// unsigned 8-bit is supported), a dimension count, that many big-endian
/// 32-bit sizes, then the row-major payload. Returns the raw values (no
/// scaling) in a Tensor of the declared shape.
Tensor parse_idx(const std::vector<std::uint8_t>& bytes);

/// Inverse of parse_idx for 8-bit payloads; entries must round to [0,255].
std::vector<std::uint8_t> write_idx_u8(const Tensor& t);

/// Builds a classification set from an image IDX (N x H x W, pixels 0..255)
/// and a label IDX (N). Pixels are divided by 255; images get a single
/// channel axis.
LabeledImageSet load_idx_image_set(const std::string& images_path, const std::string& labels_path,
                                   std::size_t class_count);

// Round-trip serializers for a set parsed from IDX files.
std::vector<std::uint8_t> write_idx_images(const LabeledImageSet& set);
std::vector<std::uint8_t> write_idx_labels(const LabeledImageSet& set);

}  // namespace dll

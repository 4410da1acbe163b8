#include "dll/data/idx.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dll/errors.hpp"

namespace dll {

void LabeledImageSet::validate() const {
    if (images.rank() != 4) throw ShapeError("image set must be N x C x H x W");
    if (images.dim(0) != labels.size()) {
        throw FormatError("image count " + std::to_string(images.dim(0)) + " does not match label count " +
                          std::to_string(labels.size()));
    }
    for (int l : labels) {
        if (l < 0 || static_cast<std::size_t>(l) >= class_count) {
            throw FormatError("label " + std::to_string(l) + " outside [0," + std::to_string(class_count) + ")");
        }
    }
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

std::vector<std::uint8_t> gunzip_if_needed(std::vector<std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 0x1f || bytes[1] != 0x8b) return bytes;

    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw FormatError("gzip: inflateInit failed");
    std::vector<std::uint8_t> out;
    out.resize(bytes.size() * 4 + 1024);
    zs.next_in = bytes.data();
    zs.avail_in = static_cast<uInt>(bytes.size());
    std::size_t written = 0;
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        if (written == out.size()) out.resize(out.size() * 2);
        zs.next_out = out.data() + written;
        zs.avail_out = static_cast<uInt>(out.size() - written);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw FormatError("gzip: corrupt stream (zlib rc " + std::to_string(rc) + ")");
        }
        written = out.size() - zs.avail_out;
    }
    inflateEnd(&zs);
    out.resize(written);
    return out;
}

namespace {

std::uint32_t read_be32(const std::vector<std::uint8_t>& b, std::size_t offset) {
    return (std::uint32_t(b[offset]) << 24) | (std::uint32_t(b[offset + 1]) << 16) |
           (std::uint32_t(b[offset + 2]) << 8) | std::uint32_t(b[offset + 3]);
}

[[noreturn]] void idx_error(const std::string& what, std::size_t offset) {
    throw FormatError("IDX: " + what + " at byte offset " + std::to_string(offset));
}

}  // namespace

Tensor parse_idx(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4) idx_error("truncated header", bytes.size());
    if (bytes[0] != 0 || bytes[1] != 0) idx_error("bad magic", 0);
    const std::uint8_t dtype = bytes[2];
    if (dtype != 0x08) idx_error("unsupported dtype code " + std::to_string(int(dtype)), 2);
    const std::size_t ndims = bytes[3];
    if (ndims == 0) idx_error("zero dimensions", 3);
    const std::size_t header = 4 + 4 * ndims;
    if (bytes.size() < header) idx_error("truncated dimension table", bytes.size());

    Shape shape(ndims);
    std::size_t total = 1;
    for (std::size_t d = 0; d < ndims; ++d) {
        shape[d] = read_be32(bytes, 4 + 4 * d);
        if (shape[d] == 0) idx_error("zero-sized dimension", 4 + 4 * d);
        total *= shape[d];
    }
    if (bytes.size() < header + total) idx_error("truncated payload", bytes.size());
    if (bytes.size() > header + total) idx_error("trailing bytes", header + total);

    std::vector<scalar> data(total);
    for (std::size_t i = 0; i < total; ++i) data[i] = static_cast<scalar>(bytes[header + i]);
    return Tensor(std::move(shape), std::move(data));
}

std::vector<std::uint8_t> write_idx_u8(const Tensor& t) {
    std::vector<std::uint8_t> out;
    out.reserve(4 + 4 * t.rank() + t.size());
    out.push_back(0);
    out.push_back(0);
    out.push_back(0x08);
    out.push_back(static_cast<std::uint8_t>(t.rank()));
    for (std::size_t d = 0; d < t.rank(); ++d) {
        const std::uint32_t v = static_cast<std::uint32_t>(t.dim(d));
        out.push_back(static_cast<std::uint8_t>(v >> 24));
        out.push_back(static_cast<std::uint8_t>(v >> 16));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v));
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        const long v = std::lround(static_cast<double>(t[i]));
        if (v < 0 || v > 255) throw FormatError("write_idx_u8: value out of byte range");
        out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

LabeledImageSet load_idx_image_set(const std::string& images_path, const std::string& labels_path,
                                   std::size_t class_count) {
    const Tensor raw_images = parse_idx(gunzip_if_needed(read_file_bytes(images_path)));
    const Tensor raw_labels = parse_idx(gunzip_if_needed(read_file_bytes(labels_path)));
    if (raw_images.rank() != 3) {
        throw FormatError("expected N x H x W image container in " + images_path + ", got " +
                          shape_to_string(raw_images.shape()));
    }
    if (raw_labels.rank() != 1 || raw_labels.dim(0) != raw_images.dim(0)) {
        throw FormatError("label container " + labels_path + " does not match image count");
    }

    const std::size_t n = raw_images.dim(0);
    LabeledImageSet set;
    set.class_count = class_count;
    set.images = scaled(raw_images, scalar{1} / scalar{255})
                     .reshaped({n, 1, raw_images.dim(1), raw_images.dim(2)});
    set.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) set.labels[i] = static_cast<int>(raw_labels[i]);
    set.validate();
    return set;
}

std::vector<std::uint8_t> write_idx_images(const LabeledImageSet& set) {
    const std::size_t n = set.images.dim(0);
    if (set.images.dim(1) != 1) throw FormatError("IDX image serialization expects single-channel sets");
    return write_idx_u8(scaled(set.images, scalar{255}).reshaped({n, set.images.dim(2), set.images.dim(3)}));
}

std::vector<std::uint8_t> write_idx_labels(const LabeledImageSet& set) {
    std::vector<scalar> vals(set.labels.begin(), set.labels.end());
    return write_idx_u8(Tensor({set.labels.size()}, std::move(vals)));
}

}  // namespace dll

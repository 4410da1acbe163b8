#include "dll/data/cifar10.hpp"

#include <cmath>

#include "dll/data/idx.hpp"
#include "dll/errors.hpp"

namespace dll {

LabeledImageSet parse_cifar10(const std::vector<std::uint8_t>& bytes) {
    if (bytes.empty() || bytes.size() % kCifarRecordBytes != 0) {
        throw FormatError("CIFAR-10: byte length " + std::to_string(bytes.size()) + " is not a multiple of " +
                          std::to_string(kCifarRecordBytes));
    }
    const std::size_t n = bytes.size() / kCifarRecordBytes;

    LabeledImageSet set;
    set.class_count = 10;
    set.images = Tensor({n, 3, 32, 32});
    set.labels.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::uint8_t* rec = bytes.data() + r * kCifarRecordBytes;
        if (rec[0] >= 10) {
            throw FormatError("CIFAR-10: label byte " + std::to_string(int(rec[0])) + " in record " +
                              std::to_string(r));
        }
        set.labels[r] = rec[0];
        scalar* dst = set.images.data() + r * 3072;
        for (std::size_t i = 0; i < 3072; ++i) dst[i] = static_cast<scalar>(rec[1 + i]) / scalar{255};
    }
    return set;
}

std::vector<std::uint8_t> write_cifar10(const LabeledImageSet& set) {
    if (set.images.rank() != 4 || set.images.dim(1) != 3 || set.images.dim(2) != 32 || set.images.dim(3) != 32) {
        throw FormatError("CIFAR-10 serialization expects N x 3 x 32 x 32 sets");
    }
    const std::size_t n = set.count();
    std::vector<std::uint8_t> out(n * kCifarRecordBytes);
    for (std::size_t r = 0; r < n; ++r) {
        std::uint8_t* rec = out.data() + r * kCifarRecordBytes;
        rec[0] = static_cast<std::uint8_t>(set.labels[r]);
        const scalar* src = set.images.data() + r * 3072;
        for (std::size_t i = 0; i < 3072; ++i) {
            rec[1 + i] = static_cast<std::uint8_t>(std::lround(static_cast<double>(src[i]) * 255.0));
        }
    }
    return out;
}

LabeledImageSet load_cifar10(const std::vector<std::string>& paths) {
    if (paths.empty()) throw InputError("load_cifar10: no batch files given");
    std::vector<LabeledImageSet> parts;
    std::size_t total = 0;
    for (const auto& p : paths) {
        parts.push_back(parse_cifar10(gunzip_if_needed(read_file_bytes(p))));
        total += parts.back().count();
    }
    LabeledImageSet set;
    set.class_count = 10;
    set.images = Tensor({total, 3, 32, 32});
    set.labels.reserve(total);
    std::size_t at = 0;
    for (const auto& part : parts) {
        std::copy(part.images.data(), part.images.data() + part.images.size(),
                  set.images.data() + at * 3072);
        set.labels.insert(set.labels.end(), part.labels.begin(), part.labels.end());
        at += part.count();
    }
    return set;
}

}  // namespace dll

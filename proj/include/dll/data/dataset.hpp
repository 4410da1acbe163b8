#pragma once

#include <cstdint>
#include <vector>

#include "dll/tensor.hpp"

namespace dll {

/// Supervised image classification set. Pixels are scaled to [0,1] at load
/// time; labels stay integer class ids.
struct LabeledImageSet {
    Tensor images;                 // [N x C x H x W]
    std::vector<int> labels;       // each in [0, class_count)
    std::size_t class_count = 0;

    std::size_t count() const { return labels.size(); }
    std::size_t feature_size() const {
        return images.dim(1) * images.dim(2) * images.dim(3);
    }
    void validate() const;
};

}  // namespace dll

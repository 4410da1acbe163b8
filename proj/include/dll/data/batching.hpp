#pragma once

#include <cstdint>
#include <vector>

#include "dll/rng.hpp"

namespace dll {

/// One epoch's visit order: a seeded permutation of [0, N) cut into
/// batch_size pieces, final partial batch kept. Identical (seed, n) give
/// identical permutations.
struct BatchPlan {
    std::vector<std::size_t> indices;
    std::size_t batch_size = 1;
    std::uint64_t seed = 0;

    static BatchPlan make(std::size_t n, std::size_t batch_size, std::uint64_t seed);

    std::size_t batch_count() const;
    // Index slice for batch k.
    std::vector<std::size_t> batch(std::size_t k) const;
};

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

}  // namespace dll

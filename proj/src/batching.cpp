#include "dll/data/batching.hpp"

#include <numeric>

#include "dll/errors.hpp"

namespace dll {

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    SeededRng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(perm[i - 1], perm[rng.below(i)]);
    }
    return perm;
}

BatchPlan BatchPlan::make(std::size_t n, std::size_t batch_size, std::uint64_t seed) {
    if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
    if (n == 0) throw InputError("cannot batch an empty set");
    BatchPlan plan;
    plan.indices = seeded_permutation(n, seed);
    plan.batch_size = batch_size;
    plan.seed = seed;
    return plan;
}

std::size_t BatchPlan::batch_count() const {
    return (indices.size() + batch_size - 1) / batch_size;
}

std::vector<std::size_t> BatchPlan::batch(std::size_t k) const {
    if (k >= batch_count()) throw InputError("batch index out of range");
    const std::size_t lo = k * batch_size;
    const std::size_t hi = std::min(indices.size(), lo + batch_size);
    return {indices.begin() + lo, indices.begin() + hi};
}

}  // namespace dll

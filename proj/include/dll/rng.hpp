#pragma once

#include <array>
#include <cstdint>

namespace dll {

std::uint64_t splitmix64(std::uint64_t& state);

/// The one deterministic generator used everywhere in this repository:
/// xoshiro256** seeded through splitmix64. Identical seeds give identical
/// draw sequences on every platform, which is what makes multi-seed runs
/// and checkpoint resumption reproducible.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();

    // Uniform on [lo, hi) using the top 53 bits, so the mapping itself is
    // platform independent (no std::uniform_real_distribution).
    double uniform(double lo, double hi);

    // Uniform integer in [0, n), rejection sampled (no modulo bias).
    std::uint64_t below(std::uint64_t n);

    // Independent child stream; deterministic in (seed, tag).
    SeededRng derive(std::uint64_t tag) const;

    std::array<std::uint64_t, 4> state() const { return state_; }
    void set_state(const std::array<std::uint64_t, 4>& s) { state_ = s; }

  private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_;
};

}  // namespace dll

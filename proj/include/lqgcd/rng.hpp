#pragma once

#include <cstdint>
#include <limits>

namespace lqgcd {

// SplitMix64 viewed as a counter-based generator: the k-th output is
// mix(seed + k * golden), so streams depend only on (seed, k) and are
// identical on every platform. Distributions come from Boost.Random, whose
// algorithms (unlike <random>'s) are fixed across standard libraries.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

}  // namespace lqgcd

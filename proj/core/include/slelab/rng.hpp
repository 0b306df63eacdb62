#pragma once

// Counter-based random numbers keyed by (seed, stream, step): no state,
// reproducible in parallel regardless of evaluation order or thread count.

#include <cstdint>

namespace slelab {

struct counter_rng {
    std::uint64_t seed = 0;

    // 64-bit keyed word; distinct (stream, step, salt) give independent words.
    std::uint64_t word(std::uint64_t stream, std::uint64_t step,
                       std::uint64_t salt) const;

    // Uniform in the open interval (0, 1).
    double uniform(std::uint64_t stream, std::uint64_t step,
                   std::uint64_t salt) const;

    // Standard normal via Box-Muller on two counter words.
    double normal(std::uint64_t stream, std::uint64_t step) const;
};

} // namespace slelab

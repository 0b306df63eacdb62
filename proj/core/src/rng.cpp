#include "slelab/rng.hpp"

#include <cmath>
#include <numbers>

namespace slelab {

namespace {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t counter_rng::word(std::uint64_t stream, std::uint64_t step,
                                std::uint64_t salt) const
{
    std::uint64_t k = mix64(seed ^ 0x6A09E667F3BCC909ull);
    k = mix64(k ^ stream * 0xD1342543DE82EF95ull);
    k = mix64(k ^ step * 0xA0761D6478BD642Full);
    return mix64(k ^ salt * 0xE7037ED1A0B428DBull);
}

double counter_rng::uniform(std::uint64_t stream, std::uint64_t step,
                            std::uint64_t salt) const
{
    // 53 significant bits, shifted into (0,1).
    const std::uint64_t w = word(stream, step, salt);
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

double counter_rng::normal(std::uint64_t stream, std::uint64_t step) const
{
    const double u1 = uniform(stream, step, 0);
    const double u2 = uniform(stream, step, 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace slelab

#pragma once

// Counter-based random numbers. Draw i of stream s under seed S is a pure
// function of (S, s, i), so generation order and thread layout never change
// the numbers:
//
//   key        = splitmix64(splitmix64(S) + s)
//   bits(i)    = splitmix64(key + i * 0x9E3779B97F4A7C15)
//   uniform(i) = ((bits(i) >> 11) + 0.5) * 2^-53          in (0, 1)
//   normal(i)  = sqrt(-2 ln uniform(2i)) * cos(2 pi uniform(2i + 1))
//
// where splitmix64(x) is the SplitMix64 finalizer applied to x + 0x9E3779B97F4A7C15.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace gwd {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(splitmix64(splitmix64(seed) + stream)) {}

    [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t i) const noexcept {
        return splitmix64(key_ + i * 0x9E3779B97F4A7C15ULL);
    }

    [[nodiscard]] constexpr double uniform(std::uint64_t i) const noexcept {
        return (static_cast<double>(bits(i) >> 11) + 0.5) * 0x1.0p-53;
    }

    [[nodiscard]] double normal(std::uint64_t i) const noexcept {
        const double u1 = uniform(2 * i);
        const double u2 = uniform(2 * i + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, n).
    [[nodiscard]] std::size_t index(std::uint64_t i, std::size_t n) const noexcept {
        const auto k = static_cast<std::size_t>(uniform(i) * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

private:
    std::uint64_t key_;
};

} // namespace gwd

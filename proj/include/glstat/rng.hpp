#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace glstat {

/// Name recorded in experiment configs; the only generator this library implements.
inline constexpr std::string_view kRngAlgorithm = "xoshiro256**";

/// One step of SplitMix64; advances state.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// FNV-1a 64-bit hash, used to turn labels into substream keys.
[[nodiscard]] std::uint64_t hash_label(std::string_view label) noexcept;

/// Substream seed: one SplitMix64 output of the master seed, then for each key
/// the next state is the previous output xor the key, and one more output is drawn.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept;

/**
 * @brief xoshiro256** 1.0 (Blackman & Vigna), seeded through SplitMix64.
 *
 * Variates are produced by code in this library (not <random> distributions)
 * so streams are identical across standard library implementations.
 */
class Xoshiro256StarStar {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256StarStar(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept;
    /// Uniform integer in [0, bound), bound > 0, via Lemire's multiply-and-reject.
    std::uint64_t below(std::uint64_t bound) noexcept;
    /// Standard normal via the Marsaglia polar method (pairs cached).
    double normal() noexcept;

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace glstat

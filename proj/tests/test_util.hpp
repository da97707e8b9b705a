#pragma once

#include "glstat/kernels.hpp"
#include "glstat/rng.hpp"
#include "glstat/ustat.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace testutil {

inline std::vector<double> normal_values(std::size_t n, std::uint64_t seed) {
    glstat::Xoshiro256StarStar rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = rng.normal();
    }
    return v;
}

inline glstat::Sample normal_sample(std::size_t n, std::uint64_t seed) {
    return glstat::Sample(normal_values(n, seed));
}

/// Visits every strictly increasing index tuple of length k from 0..n-1.
inline void each_index_tuple(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
            f(idx);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
}

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

}  // namespace testutil

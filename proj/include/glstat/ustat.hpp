#pragma once

#include "glstat/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

namespace glstat {

/// An ordered, finite, real-valued time series X_1..X_n.
class Sample {
public:
    Sample() = default;
    explicit Sample(std::vector<double> values);
    Sample(std::initializer_list<double> values);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Returns a sorted copy of the values.
    [[nodiscard]] std::vector<double> sorted() const;

private:
    std::vector<double> values_;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

/// C(n, k), saturating at UINT64_MAX.
[[nodiscard]] std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

/// C(n, k) in floating point; exact for the ranges where the integer form fits.
[[nodiscard]] double binomial_real(std::uint64_t n, std::uint64_t k) noexcept;

/// Calls f() once per strictly increasing k-subset of xs, in lexicographic index
/// order, after copying the chosen values into out[offset .. offset + k).
template <class F>
void for_each_subset(std::span<const double> xs, std::size_t k, std::span<double> out, std::size_t offset, F&& f) {
    const std::size_t n = xs.size();
    if (k > n) {
        return;
    }
    if (k == 0) {
        f();
        return;
    }
    if (k == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            out[offset] = xs[i];
            f();
        }
        return;
    }
    if (k == 2) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            out[offset] = xs[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                out[offset + 1] = xs[j];
                f();
            }
        }
        return;
    }
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = i;
        out[offset + i] = xs[i];
    }
    while (true) {
        f();
        // Advance the rightmost index that still has room.
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == n - k + (pos - 1)) {
            --pos;
        }
        if (pos == 0) {
            return;
        }
        --pos;
        ++idx[pos];
        out[offset + pos] = xs[idx[pos]];
        for (std::size_t i = pos + 1; i < k; ++i) {
            idx[i] = idx[i - 1] + 1;
            out[offset + i] = xs[idx[i]];
        }
    }
}

enum class QuantileConvention {
    ceil,           ///< k = ceil(p * N), the left-continuous inverse of H_n
    floor_bracket,  ///< k = max(1, floor(p * N)), the bracket index used by Q_n^alpha
};

/// 1-based rank selected by a quantile level under a convention, clamped to [1, N].
/// Products p * N within 1e-12 (relative) of an integer are snapped to it first.
[[nodiscard]] std::size_t quantile_rank(double p, std::size_t count, QuantileConvention convention);

/**
 * @brief Sorted multiset of all C(n, m) kernel evaluations.
 *
 * This is the step function behind the empirical U-distribution H_n and its
 * generalized inverse.
 */
class KernelValueSet {
public:
    KernelValueSet(std::vector<double> sorted_values, std::size_t n, std::size_t m);

    [[nodiscard]] std::span<const double> sorted_values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t m() const noexcept { return m_; }

    /// H_n(t): fraction of kernel values <= t.
    [[nodiscard]] double cdf(double t) const noexcept;
    /// H_n^{-1}(p) under the given convention. p must lie in (0, 1].
    [[nodiscard]] double quantile(double p, QuantileConvention convention = QuantileConvention::ceil) const;
    /// k-th smallest value, 1-based.
    [[nodiscard]] double order_statistic(std::size_t k) const;

private:
    std::vector<double> values_;
    std::size_t n_;
    std::size_t m_;
};

/// Writes one value per line under a `value` header, 17 significant digits.
void write_csv(const KernelValueSet& values, std::ostream& out);
/// Writes the raw values as little-endian IEEE-754 doubles.
void write_binary(const KernelValueSet& values, std::ostream& out);

struct UStatOptions {
    bool allow_fast_path = true;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

/// Mean of h over all C(n, m) index subsets. gini_abs_diff uses the order-statistic
/// identity unless options.allow_fast_path is false.
[[nodiscard]] double u_statistic(const Sample& sample, const KernelSpec& kernel, const UStatOptions& options = {});

/// Gini's mean difference via 2/(n(n-1)) * sum (2i - n - 1) X_(i:n); O(n log n).
[[nodiscard]] double gini_order_statistic_form(std::span<const double> values);

/// All C(n, m) kernel values, sorted. Throws CapacityExceeded above the cap.
[[nodiscard]] KernelValueSet kernel_values(const Sample& sample, const KernelSpec& kernel,
                                           std::uint64_t enumeration_cap = kDefaultEnumerationCap);

[[nodiscard]] double empirical_u_cdf(const Sample& sample, const KernelSpec& kernel, double t,
                                     std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// H_n^{-1}(p) = inf{t : H_n(t) >= p}, p in (0, 1].
[[nodiscard]] double u_quantile(const Sample& sample, const KernelSpec& kernel, double p,
                                std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// F_n(x) = (1/n) #{i : X_i <= x}.
[[nodiscard]] double empirical_cdf(const Sample& sample, double x);

enum class Normalization {
    combinatorial,  ///< divide by the number of summands, C(n, m-1) and C(n, m)
    paper_literal,  ///< divide by n^(m-1) and n^m
};

struct ProjectionDenominators {
    double partial;  ///< for the sum over (m-1)-subsets with x held fixed
    double full;     ///< for the centering sum over m-subsets
};

[[nodiscard]] ProjectionDenominators projection_denominators(std::size_t n, std::size_t m, Normalization mode);

/// sum over strictly increasing (m-1)-subsets S of the full sample of phi(h(x, X_S)).
/// The index of any sample value equal to x is not excluded.
template <class Phi>
double projection_partial_sum(const Sample& sample, const KernelSpec& kernel, double x, Phi&& phi) {
    const std::size_t m = kernel.m();
    std::vector<double> args(m);
    args[0] = x;
    double total = 0.0;
    for_each_subset(sample.values(), m - 1, args, 1, [&] { total += phi(kernel(args)); });
    return total;
}

/// Empirical first Hoeffding projection g1_hat(x).
[[nodiscard]] double hoeffding_g1_hat(const Sample& sample, const KernelSpec& kernel, double x,
                                      Normalization mode = Normalization::combinatorial,
                                      std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// g1_hat evaluated at every sample point, in sample order. The centering sum is
/// computed once; gini_abs_diff uses sorted prefix sums for the partial sums.
[[nodiscard]] std::vector<double> hoeffding_g1_hat_all(const Sample& sample, const KernelSpec& kernel,
                                                       Normalization mode = Normalization::combinatorial,
                                                       std::uint64_t enumeration_cap = kDefaultEnumerationCap);

struct WeightedAtom {
    double value;
    double probability;
};

/**
 * @brief Exact Hoeffding decomposition of h under a finite-support law.
 *
 * Test oracle. Tables are indexed by atom indices; g(j-tuple) is the j-th
 * degenerate component, h_tilde(j-tuple) the centered conditional mean.
 */
class PopulationHoeffding {
public:
    [[nodiscard]] double theta() const noexcept { return theta_; }
    [[nodiscard]] std::size_t m() const noexcept { return g_.size(); }
    [[nodiscard]] const std::vector<WeightedAtom>& support() const noexcept { return support_; }

    [[nodiscard]] double g(std::span<const std::size_t> atoms) const;
    [[nodiscard]] double h_tilde(std::span<const std::size_t> atoms) const;

private:
    friend PopulationHoeffding hoeffding_decompose_population(std::span<const WeightedAtom>, const KernelSpec&,
                                                              std::uint64_t);
    [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> atoms) const;

    double theta_ = 0.0;
    std::vector<WeightedAtom> support_;
    std::vector<std::vector<double>> h_tilde_;  // [j-1] -> s^j entries
    std::vector<std::vector<double>> g_;        // [j-1] -> s^j entries
};

[[nodiscard]] PopulationHoeffding hoeffding_decompose_population(std::span<const WeightedAtom> support,
                                                                 const KernelSpec& kernel,
                                                                 std::uint64_t enumeration_cap = kDefaultEnumerationCap);

}  // namespace glstat

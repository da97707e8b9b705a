#include "glstat/ustat.hpp"

#include "glstat/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace glstat {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::domain_error("sample value at index " + std::to_string(i) + " is not finite");
        }
    }
}

Sample::Sample(std::initializer_list<double> values) : Sample(std::vector<double>(values)) {}

std::vector<double> Sample::sorted() const {
    std::vector<double> out = values_;
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > kMax) {
            return kMax;
        }
    }
    return static_cast<std::uint64_t>(acc);
}

double binomial_real(std::uint64_t n, std::uint64_t k) noexcept {
    if (k > n) {
        return 0.0;
    }
    const std::uint64_t exact = binomial(n, k);
    if (exact < (std::uint64_t{1} << 53)) {
        return static_cast<double>(exact);
    }
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

std::size_t quantile_rank(double p, std::size_t count, QuantileConvention convention) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("quantile level must lie in (0, 1]");
    }
    if (count == 0) {
        throw std::invalid_argument("quantile of an empty set");
    }
    const double target = p * static_cast<double>(count);
    const double nearest = std::round(target);
    const bool integral = std::abs(target - nearest) <= 1e-12 * std::max(1.0, target);
    double rank = 0.0;
    if (integral) {
        rank = nearest;
    } else {
        rank = convention == QuantileConvention::ceil ? std::ceil(target) : std::floor(target);
    }
    rank = std::clamp(rank, 1.0, static_cast<double>(count));
    return static_cast<std::size_t>(rank);
}

KernelValueSet::KernelValueSet(std::vector<double> sorted_values, std::size_t n, std::size_t m)
    : values_(std::move(sorted_values)), n_(n), m_(m) {
    if (!std::is_sorted(values_.begin(), values_.end())) {
        throw std::invalid_argument("kernel values must be sorted");
    }
}

double KernelValueSet::cdf(double t) const noexcept {
    if (values_.empty()) {
        return 0.0;
    }
    const auto it = std::upper_bound(values_.begin(), values_.end(), t);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double KernelValueSet::quantile(double p, QuantileConvention convention) const {
    return order_statistic(quantile_rank(p, values_.size(), convention));
}

double KernelValueSet::order_statistic(std::size_t k) const {
    if (k < 1 || k > values_.size()) {
        throw std::out_of_range("order statistic rank out of range");
    }
    return values_[k - 1];
}

void write_csv(const KernelValueSet& values, std::ostream& out) {
    out << "value\n";
    char buf[32];
    for (double v : values.sorted_values()) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << '\n';
    }
}

void write_binary(const KernelValueSet& values, std::ostream& out) {
    for (double v : values.sorted_values()) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        unsigned char bytes[8];
        for (int i = 0; i < 8; ++i) {
            bytes[i] = static_cast<unsigned char>(bits & 0xffU);
            bits >>= 8;
        }
        out.write(reinterpret_cast<const char*>(bytes), 8);
    }
}

namespace {

void require_size(const Sample& sample, const KernelSpec& kernel) {
    if (sample.size() < kernel.m()) {
        throw InsufficientData("kernel '" + kernel.name() + "' of dimension " + std::to_string(kernel.m()) +
                               " needs at least that many observations, got " + std::to_string(sample.size()));
    }
}

std::uint64_t checked_count(const Sample& sample, const KernelSpec& kernel, std::uint64_t cap) {
    require_size(sample, kernel);
    const std::uint64_t count = binomial(sample.size(), kernel.m());
    if (count > cap) {
        throw CapacityExceeded("C(" + std::to_string(sample.size()) + ", " + std::to_string(kernel.m()) +
                               ") kernel evaluations exceed the enumeration cap of " + std::to_string(cap) +
                               "; use a fast path or the subsampled estimator");
    }
    return count;
}

double sum_all_kernel_values(const Sample& sample, const KernelSpec& kernel) {
    std::vector<double> args(kernel.m());
    double total = 0.0;
    for_each_subset(sample.values(), kernel.m(), args, 0, [&] { total += kernel(args); });
    return total;
}

}  // namespace

double gini_order_statistic_form(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw InsufficientData("Gini's mean difference needs at least 2 observations");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double nd = static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += (2.0 * static_cast<double>(i + 1) - nd - 1.0) * sorted[i];
    }
    return 2.0 * acc / (nd * (nd - 1.0));
}

double u_statistic(const Sample& sample, const KernelSpec& kernel, const UStatOptions& options) {
    require_size(sample, kernel);
    if (options.allow_fast_path && kernel.kind() == KernelKind::gini_abs_diff) {
        return gini_order_statistic_form(sample.values());
    }
    const std::uint64_t count = checked_count(sample, kernel, options.enumeration_cap);
    return sum_all_kernel_values(sample, kernel) / static_cast<double>(count);
}

KernelValueSet kernel_values(const Sample& sample, const KernelSpec& kernel, std::uint64_t enumeration_cap) {
    const std::uint64_t count = checked_count(sample, kernel, enumeration_cap);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<double> args(kernel.m());
    for_each_subset(sample.values(), kernel.m(), args, 0, [&] { out.push_back(kernel(args)); });
    std::sort(out.begin(), out.end());
    return KernelValueSet(std::move(out), sample.size(), kernel.m());
}

double empirical_u_cdf(const Sample& sample, const KernelSpec& kernel, double t, std::uint64_t enumeration_cap) {
    return kernel_values(sample, kernel, enumeration_cap).cdf(t);
}

double u_quantile(const Sample& sample, const KernelSpec& kernel, double p, std::uint64_t enumeration_cap) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("U-quantile level must lie in (0, 1]");
    }
    return kernel_values(sample, kernel, enumeration_cap).quantile(p, QuantileConvention::ceil);
}

double empirical_cdf(const Sample& sample, double x) {
    if (sample.empty()) {
        throw InsufficientData("empirical distribution of an empty sample");
    }
    const auto values = sample.values();
    const auto below = std::count_if(values.begin(), values.end(), [x](double v) { return v <= x; });
    return static_cast<double>(below) / static_cast<double>(values.size());
}

ProjectionDenominators projection_denominators(std::size_t n, std::size_t m, Normalization mode) {
    if (m < 1 || n < m) {
        throw InsufficientData("projection needs n >= m >= 1");
    }
    if (mode == Normalization::combinatorial) {
        return {binomial_real(n, m - 1), binomial_real(n, m)};
    }
    const double nd = static_cast<double>(n);
    return {std::pow(nd, static_cast<double>(m - 1)), std::pow(nd, static_cast<double>(m))};
}

double hoeffding_g1_hat(const Sample& sample, const KernelSpec& kernel, double x, Normalization mode,
                        std::uint64_t enumeration_cap) {
    if (!std::isfinite(x)) {
        throw std::domain_error("g1_hat evaluation point is not finite");
    }
    checked_count(sample, kernel, enumeration_cap);
    const auto denom = projection_denominators(sample.size(), kernel.m(), mode);
    const double partial = projection_partial_sum(sample, kernel, x, [](double v) { return v; });
    return partial / denom.partial - sum_all_kernel_values(sample, kernel) / denom.full;
}

std::vector<double> hoeffding_g1_hat_all(const Sample& sample, const KernelSpec& kernel, Normalization mode,
                                         std::uint64_t enumeration_cap) {
    require_size(sample, kernel);
    const std::size_t n = sample.size();
    const auto denom = projection_denominators(n, kernel.m(), mode);
    std::vector<double> out(n);

    if (kernel.kind() == KernelKind::gini_abs_diff) {
        // sum_j |x - X_j| from sorted prefix sums; the full sum is half the total.
        std::vector<double> sorted = sample.sorted();
        std::vector<double> prefix(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            prefix[i + 1] = prefix[i] + sorted[i];
        }
        double pair_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            pair_sum += (2.0 * static_cast<double>(i) - static_cast<double>(n) + 1.0) * sorted[i];
        }
        const double centering = pair_sum / denom.full;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = sample[i];
            const auto below = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
            const double lower = x * static_cast<double>(below) - prefix[below];
            const double upper = (prefix[n] - prefix[below]) - x * static_cast<double>(n - below);
            out[i] = (lower + upper) / denom.partial - centering;
        }
        return out;
    }

    checked_count(sample, kernel, enumeration_cap);
    const double centering = sum_all_kernel_values(sample, kernel) / denom.full;
    for (std::size_t i = 0; i < n; ++i) {
        const double partial = projection_partial_sum(sample, kernel, sample[i], [](double v) { return v; });
        out[i] = partial / denom.partial - centering;
    }
    return out;
}

std::size_t PopulationHoeffding::flat_index(std::span<const std::size_t> atoms) const {
    const std::size_t s = support_.size();
    std::size_t idx = 0;
    for (std::size_t a : atoms) {
        if (a >= s) {
            throw std::out_of_range("atom index out of range");
        }
        idx = idx * s + a;
    }
    return idx;
}

double PopulationHoeffding::g(std::span<const std::size_t> atoms) const {
    if (atoms.empty() || atoms.size() > g_.size()) {
        throw std::invalid_argument("g_j requires 1 <= j <= m arguments");
    }
    return g_[atoms.size() - 1][flat_index(atoms)];
}

double PopulationHoeffding::h_tilde(std::span<const std::size_t> atoms) const {
    if (atoms.empty() || atoms.size() > h_tilde_.size()) {
        throw std::invalid_argument("h_tilde_j requires 1 <= j <= m arguments");
    }
    return h_tilde_[atoms.size() - 1][flat_index(atoms)];
}

namespace {

// Decodes a base-s flat index into j atom indices (most significant first).
void decode(std::size_t flat, std::size_t s, std::span<std::size_t> out) {
    for (std::size_t i = out.size(); i > 0; --i) {
        out[i - 1] = flat % s;
        flat /= s;
    }
}

std::size_t int_pow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

}  // namespace

PopulationHoeffding hoeffding_decompose_population(std::span<const WeightedAtom> support, const KernelSpec& kernel,
                                                   std::uint64_t enumeration_cap) {
    if (support.empty()) {
        throw std::invalid_argument("empty support");
    }
    double mass = 0.0;
    for (const auto& atom : support) {
        if (!std::isfinite(atom.value) || !(atom.probability > 0.0)) {
            throw std::invalid_argument("support atoms need finite values and positive probabilities");
        }
        mass += atom.probability;
    }
    if (std::abs(mass - 1.0) > 1e-12) {
        throw std::invalid_argument("support probabilities must sum to 1");
    }
    const std::size_t s = support.size();
    const std::size_t m = kernel.m();
    const double full = std::pow(static_cast<double>(s), static_cast<double>(m));
    if (full > static_cast<double>(enumeration_cap)) {
        throw CapacityExceeded("support size ^ m exceeds the enumeration cap");
    }

    PopulationHoeffding out;
    out.support_.assign(support.begin(), support.end());

    // Conditional means E h(x_1..x_j, Y_{j+1}..Y_m) for every j-tuple of atoms, j = 0..m.
    std::vector<std::vector<double>> cond(m + 1);
    std::vector<double> args(m);
    std::vector<std::size_t> fixed(m);
    std::vector<std::size_t> free(m);
    for (std::size_t j = 0; j <= m; ++j) {
        const std::size_t fixed_count = int_pow(s, j);
        const std::size_t free_count = int_pow(s, m - j);
        cond[j].assign(fixed_count, 0.0);
        for (std::size_t f = 0; f < fixed_count; ++f) {
            decode(f, s, std::span(fixed).first(j));
            for (std::size_t i = 0; i < j; ++i) {
                args[i] = support[fixed[i]].value;
            }
            double acc = 0.0;
            for (std::size_t r = 0; r < free_count; ++r) {
                decode(r, s, std::span(free).first(m - j));
                double weight = 1.0;
                for (std::size_t i = 0; i < m - j; ++i) {
                    args[j + i] = support[free[i]].value;
                    weight *= support[free[i]].probability;
                }
                acc += weight * kernel(args);
            }
            cond[j][f] = acc;
        }
    }
    out.theta_ = cond[0][0];

    out.h_tilde_.resize(m);
    out.g_.resize(m);
    std::vector<std::size_t> tuple(m);
    std::vector<std::size_t> sub(m);
    for (std::size_t j = 1; j <= m; ++j) {
        const std::size_t count = int_pow(s, j);
        auto& ht = out.h_tilde_[j - 1];
        auto& gj = out.g_[j - 1];
        ht.resize(count);
        gj.resize(count);
        for (std::size_t f = 0; f < count; ++f) {
            decode(f, s, std::span(tuple).first(j));
            ht[f] = cond[j][f] - out.theta_;
            // g_j = h_tilde_j minus every lower-order component on proper, non-empty sub-tuples.
            double value = ht[f];
            const std::size_t full_mask = (std::size_t{1} << j) - 1;
            for (std::size_t mask = 1; mask < full_mask; ++mask) {
                std::size_t k = 0;
                for (std::size_t i = 0; i < j; ++i) {
                    if (mask & (std::size_t{1} << i)) {
                        sub[k++] = tuple[i];
                    }
                }
                value -= out.g_[k - 1][out.flat_index(std::span(sub).first(k))];
            }
            gj[f] = value;
        }
    }
    return out;
}

}  // namespace glstat

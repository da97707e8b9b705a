#include "glstat/lrv.hpp"

#include "glstat/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace glstat {

double weight_bartlett(double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("Bartlett weight is defined for t >= 0");
    }
    return t <= 1.0 ? 1.0 - t : 0.0;
}

WeightFunction::WeightFunction(Kind kind, std::string name, std::function<double(double)> kappa, double support)
    : kind_(kind), name_(std::move(name)), kappa_(std::move(kappa)), support_(support) {}

WeightFunction WeightFunction::bartlett() {
    return WeightFunction(Kind::bartlett, "bartlett", {}, 1.0);
}

WeightFunction WeightFunction::custom(std::string name, std::function<double(double)> kappa, double support) {
    if (!kappa) {
        throw std::invalid_argument("custom lag weight needs a function");
    }
    if (!(support > 0.0)) {
        throw std::invalid_argument("custom lag weight support must be positive");
    }
    return WeightFunction(Kind::custom, std::move(name), std::move(kappa), support);
}

double default_bandwidth(std::size_t n) {
    if (n < 2) {
        throw InsufficientData("bandwidth needs n >= 2");
    }
    auto b = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
    while ((b + 1) * (b + 1) * (b + 1) <= n) {
        ++b;
    }
    while (b > 1 && b * b * b > n) {
        --b;
    }
    return static_cast<double>(std::max<std::size_t>(b, 1));
}

double BandwidthPolicy::bandwidth(std::size_t n) const {
    double b = 0.0;
    switch (kind) {
    case Kind::automatic:
        return default_bandwidth(n);
    case Kind::fixed:
        b = value;
        break;
    case Kind::power_law:
        b = coefficient * std::pow(static_cast<double>(n), exponent);
        break;
    }
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw std::invalid_argument("bandwidth must be positive and finite");
    }
    return b;
}

double weighted_autocovariance_sum(std::span<const double> g, const WeightFunction& weight, double bandwidth) {
    if (!(bandwidth > 0.0)) {
        throw std::invalid_argument("bandwidth must be positive");
    }
    const std::size_t n = g.size();
    if (n == 0) {
        return 0.0;
    }
    const double nd = static_cast<double>(n);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double t = static_cast<double>(r) / bandwidth;
        if (t > weight.support()) {
            break;
        }
        const double kappa = weight(t);
        if (kappa == 0.0) {
            continue;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i + r < n; ++i) {
            acc += g[i] * g[i + r];
        }
        // Lags r and -r share the same autocovariance.
        total += (r == 0 ? 1.0 : 2.0) * kappa * (acc / nd);
    }
    return total;
}

double lrv_ustat(const Sample& sample, const KernelSpec& kernel, const LrvConfig& config) {
    const auto g = hoeffding_g1_hat_all(sample, kernel, config.normalization, config.enumeration_cap);
    return weighted_autocovariance_sum(g, config.weight, config.bandwidth.bandwidth(sample.size()));
}

DensityEstimate density_at_uquantile(const KernelValueSet& values, double p, const LrvConfig& config,
                                     QuantileConvention convention) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("density level must lie in (0, 1)");
    }
    const double xi = values.quantile(p, convention);
    const double iqr = values.quantile(0.75) - values.quantile(0.25);
    const double delta =
        config.density_halfwidth_constant * iqr * std::pow(static_cast<double>(values.n()), -0.2);
    if (!(delta > 0.0)) {
        throw DegenerateDensity("kernel values have zero interquartile range; density at the U-quantile is undefined");
    }
    const double density = (values.cdf(xi + delta) - values.cdf(xi - delta)) / (2.0 * delta);
    if (!(density > 0.0) || !std::isfinite(density)) {
        throw DegenerateDensity("H_n is flat around its " + std::to_string(p) +
                                "-quantile; widen delta_n via the density half-width constant");
    }
    return {p, xi, delta, density};
}

double density_at_uquantile(const Sample& sample, const KernelSpec& kernel, double p, const LrvConfig& config) {
    return density_at_uquantile(kernel_values(sample, kernel, config.enumeration_cap), p, config).density;
}

PluginContext::PluginContext(KernelValueSet values, const GLSpec& spec, const LrvConfig& config)
    : values_(std::move(values)), discrete_(spec.discrete) {
    spec.validate();
    for (const auto& term : discrete_) {
        densities_.push_back(density_at_uquantile(values_, term.level, config, spec.convention));
    }

    const auto v = values_.sorted_values();
    const std::size_t count = v.size();
    const double nd = static_cast<double>(count);
    const auto& J = spec.weight;
    j_at_zero_ = J(0.0);
    j_at_one_ = J(1.0);

    const std::size_t gaps = count > 0 ? count - 1 : 0;
    gap_weight_.assign(gaps, 0.0);
    suffix_.assign(count, 0.0);
    level_weighted_ = 0.0;
    if (!J.is_zero()) {
        for (std::size_t g = 0; g < gaps; ++g) {
            const double level = static_cast<double>(g + 1) / nd;
            gap_weight_[g] = J(level);
            level_weighted_ += gap_weight_[g] * level * (v[g + 1] - v[g]);
        }
        for (std::size_t g = gaps; g > 0; --g) {
            suffix_[g - 1] = suffix_[g] + gap_weight_[g - 1] * (v[g] - v[g - 1]);
        }
    }

    centering_sum_ = 0.0;
    std::size_t hint = 0;
    for (double value : v) {
        centering_sum_ += influence(value, hint);
    }
}

PluginContext PluginContext::build(const Sample& sample, const GLSpec& spec, const LrvConfig& config) {
    return PluginContext(kernel_values(sample, spec.kernel, config.enumeration_cap), spec, config);
}

double PluginContext::influence(double value) const {
    const auto v = values_.sorted_values();
    const auto j = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), value) - v.begin());
    return influence_at(value, j);
}

double PluginContext::influence(double value, std::size_t& hint) const {
    const auto v = values_.sorted_values();
    const std::size_t count = v.size();
    std::size_t lo = 0;
    std::size_t hi = count;
    hint = std::min(hint, count);
    if (hint < count && v[hint] < value) {
        lo = hint + 1;
        std::size_t step = 1;
        while (lo + step < count && v[lo + step] < value) {
            lo += step + 1;
            step *= 2;
        }
        hi = std::min(count, lo + step);
    } else {
        hi = hint;
        std::size_t step = 1;
        while (hi > step && !(v[hi - step - 1] < value)) {
            hi -= step + 1;
            step *= 2;
        }
        lo = hi > step ? hi - step : 0;
    }
    hint = static_cast<std::size_t>(std::lower_bound(v.begin() + static_cast<std::ptrdiff_t>(lo),
                                                     v.begin() + static_cast<std::ptrdiff_t>(hi), value) -
                                    v.begin());
    return influence_at(value, hint);
}

double PluginContext::influence_at(double value, std::size_t j) const {
    const auto v = values_.sorted_values();
    const std::size_t count = v.size();
    double result = 0.0;

    if (count > 0 && (j_at_zero_ != 0.0 || j_at_one_ != 0.0 || !gap_weight_.empty())) {
        // integral over y of 1[value <= y] J(H_n(y)), restricted to where the integrand can be non-zero.
        double upper = 0.0;
        if (j == 0) {
            upper = suffix_[0] + j_at_zero_ * (v[0] - value);
        } else if (j == count) {
            upper = -j_at_one_ * (value - v[count - 1]);
        } else {
            upper = suffix_[j] + gap_weight_[j - 1] * (v[j] - value);
        }
        // A's integral part is -(upper - sum_k J(k/N) (k/N) gap_k).
        result = level_weighted_ - upper;
    }

    for (std::size_t i = 0; i < discrete_.size(); ++i) {
        const auto& term = discrete_[i];
        const auto& est = densities_[i];
        const double indicator = value <= est.quantile ? 1.0 : 0.0;
        result += term.weight * (term.level - indicator) / est.density;
    }
    return result;
}

double a_kernel_hat(const GLSpec& spec, std::span<const double> args, const PluginContext& plugin) {
    return plugin.influence(eval_kernel(spec.kernel, args));
}

double a1_hat(const Sample& sample, const GLSpec& spec, double x, const PluginContext& plugin, Normalization mode) {
    if (!std::isfinite(x)) {
        throw std::domain_error("a1_hat evaluation point is not finite");
    }
    const auto denom = projection_denominators(sample.size(), spec.kernel.m(), mode);
    const double partial =
        projection_partial_sum(sample, spec.kernel, x, [&plugin](double v) { return plugin.influence(v); });
    return partial / denom.partial - plugin.centering_sum() / denom.full;
}

std::vector<double> a1_hat_all(const Sample& sample, const GLSpec& spec, const PluginContext& plugin,
                               Normalization mode) {
    const std::size_t n = sample.size();
    const auto denom = projection_denominators(n, spec.kernel.m(), mode);
    const double centering = plugin.centering_sum() / denom.full;
    std::vector<double> out(n);
    if (spec.kernel.m() == 2 && spec.kernel.kind() != KernelKind::custom) {
        // Each unordered pair is visited once; walking the sample in sorted order keeps
        // successive kernel values close so the search hint stays short.
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&sample](std::size_t a, std::size_t b) { return sample[a] < sample[b]; });
        std::vector<double> partial(n, 0.0);
        std::array<double, 2> args{};
        std::size_t hint = 0;
        for (std::size_t a = 0; a < n; ++a) {
            const std::size_t i = order[a];
            args = {sample[i], sample[i]};
            partial[i] += plugin.influence(spec.kernel(args), hint);
            for (std::size_t b = a + 1; b < n; ++b) {
                const std::size_t j = order[b];
                args = {sample[i], sample[j]};
                const double value = plugin.influence(spec.kernel(args), hint);
                partial[i] += value;
                partial[j] += value;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = partial[i] / denom.partial - centering;
        }
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double part = projection_partial_sum(sample, spec.kernel, sample[i],
                                                   [&plugin](double v) { return plugin.influence(v); });
        out[i] = part / denom.partial - centering;
    }
    return out;
}

GLVarianceReport lrv_gl(const Sample& sample, const GLSpec& spec, const LrvConfig& config) {
    spec.validate();
    const PluginContext plugin = PluginContext::build(sample, spec, config);
    const auto a1 = a1_hat_all(sample, spec, plugin, config.normalization);

    GLVarianceReport report;
    report.m = spec.kernel.m();
    report.estimate = gl_statistic(plugin.values(), spec);
    report.bandwidth_used = config.bandwidth.bandwidth(sample.size());
    report.sigma2_raw = weighted_autocovariance_sum(a1, config.weight, report.bandwidth_used);
    report.clamped = report.sigma2_raw < 0.0;
    report.sigma2_gl = std::max(report.sigma2_raw, 0.0);
    const double md = static_cast<double>(report.m);
    report.scaled_sigma2 = md * md * report.sigma2_gl;
    report.density_estimates = plugin.densities();
    return report;
}

ConfidenceInterval gl_confidence_interval(const Sample& sample, const GLSpec& spec, const LrvConfig& config,
                                          double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    }
    ConfidenceInterval ci;
    ci.variance = lrv_gl(sample, spec, config);
    ci.level = level;
    ci.z = standard_normal_quantile(0.5 * (1.0 + level));
    const double half = ci.z * std::sqrt(ci.variance.scaled_sigma2) / std::sqrt(static_cast<double>(sample.size()));
    ci.lo = ci.variance.estimate - half;
    ci.hi = ci.variance.estimate + half;
    return ci;
}

}  // namespace glstat

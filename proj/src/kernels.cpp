#include "glstat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace glstat {

KernelSpec::KernelSpec(std::string name, std::size_t m, KernelKind kind, KernelParams params, KernelFn fn)
    : name_(std::move(name)), m_(m), kind_(kind), params_(std::move(params)), fn_(std::move(fn)) {
    if (m_ < 1) {
        throw std::invalid_argument("kernel '" + name_ + "': dimension m must be >= 1");
    }
}

KernelSpec KernelSpec::gini_abs_diff() {
    return KernelSpec("gini_abs_diff", 2, KernelKind::gini_abs_diff, {}, {});
}

KernelSpec KernelSpec::min_pairwise(std::size_t m) {
    if (m < 2) {
        throw std::invalid_argument("kernel 'min_pairwise': m must be >= 2");
    }
    return KernelSpec("min_pairwise", m, KernelKind::min_pairwise, {{"m", static_cast<double>(m)}}, {});
}

KernelSpec KernelSpec::range(std::size_t m) {
    if (m < 2) {
        throw std::invalid_argument("kernel 'range': m must be >= 2");
    }
    return KernelSpec("range", m, KernelKind::range, {{"m", static_cast<double>(m)}}, {});
}

KernelSpec KernelSpec::identity() {
    return KernelSpec("identity", 1, KernelKind::identity, {}, {});
}

KernelSpec KernelSpec::custom(std::string name, std::size_t m, KernelFn fn, KernelParams params) {
    if (!fn) {
        throw std::invalid_argument("kernel '" + name + "': empty evaluation function");
    }
    return KernelSpec(std::move(name), m, KernelKind::custom, std::move(params), std::move(fn));
}

double KernelSpec::min_pairwise_distance(std::span<const double> args) noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        for (std::size_t j = i + 1; j < args.size(); ++j) {
            best = std::min(best, std::abs(args[i] - args[j]));
        }
    }
    return best;
}

double KernelSpec::spread(std::span<const double> args) noexcept {
    const auto [lo, hi] = std::minmax_element(args.begin(), args.end());
    return *hi - *lo;
}

double eval_kernel(const KernelSpec& kernel, std::span<const double> args) {
    if (args.size() != kernel.m()) {
        throw std::invalid_argument("kernel '" + kernel.name() + "' expects " + std::to_string(kernel.m()) +
                                    " arguments, got " + std::to_string(args.size()));
    }
    for (double a : args) {
        if (!std::isfinite(a)) {
            throw std::domain_error("kernel '" + kernel.name() + "': non-finite argument");
        }
    }
    return kernel(args);
}

namespace {

std::size_t dimension_param(std::string_view name, const KernelParams& params) {
    const auto it = params.find("m");
    if (it == params.end()) {
        throw std::invalid_argument("kernel '" + std::string(name) + "' requires parameter m");
    }
    const double m = it->second;
    if (!std::isfinite(m) || m < 2 || m != std::floor(m)) {
        throw std::invalid_argument("kernel '" + std::string(name) + "': m must be an integer >= 2");
    }
    return static_cast<std::size_t>(m);
}

}  // namespace

KernelSpec builtin_kernel(std::string_view name, const KernelParams& params) {
    if (name == "gini_abs_diff") {
        return KernelSpec::gini_abs_diff();
    }
    if (name == "identity") {
        return KernelSpec::identity();
    }
    if (name == "min_pairwise") {
        return KernelSpec::min_pairwise(dimension_param(name, params));
    }
    if (name == "range") {
        return KernelSpec::range(dimension_param(name, params));
    }
    throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

bool is_symmetric_at(const KernelSpec& kernel, std::span<const double> args) {
    const double reference = eval_kernel(kernel, args);
    std::vector<std::size_t> order(args.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::vector<double> permuted(args.size());
    while (std::next_permutation(order.begin(), order.end())) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            permuted[i] = args[order[i]];
        }
        if (kernel(permuted) != reference) {
            return false;
        }
    }
    return true;
}

}  // namespace glstat

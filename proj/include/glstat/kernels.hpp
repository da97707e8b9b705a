#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>

namespace glstat {

enum class KernelKind { gini_abs_diff, min_pairwise, range, identity, custom };

using KernelParams = std::map<std::string, double>;
using KernelFn = std::function<double(std::span<const double>)>;

/**
 * @brief A symmetric kernel h(x_1, ..., x_m).
 *
 * Immutable after construction. Built-in kernels are dispatched on their kind
 * so hot enumeration loops avoid the type-erased call; custom kernels carry a
 * user function whose symmetry is the caller's obligation (see is_symmetric_at).
 */
class KernelSpec {
public:
    static KernelSpec gini_abs_diff();
    static KernelSpec min_pairwise(std::size_t m);
    static KernelSpec range(std::size_t m);
    static KernelSpec identity();
    static KernelSpec custom(std::string name, std::size_t m, KernelFn fn, KernelParams params = {});

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    [[nodiscard]] KernelKind kind() const noexcept { return kind_; }
    [[nodiscard]] const KernelParams& params() const noexcept { return params_; }

    // Unchecked evaluation: args.size() == m() and finite entries are assumed.
    [[nodiscard]] double operator()(std::span<const double> args) const {
        switch (kind_) {
        case KernelKind::gini_abs_diff:
            return args[0] > args[1] ? args[0] - args[1] : args[1] - args[0];
        case KernelKind::identity:
            return args[0];
        case KernelKind::min_pairwise:
            return min_pairwise_distance(args);
        case KernelKind::range:
            return spread(args);
        case KernelKind::custom:
            break;
        }
        return fn_(args);
    }

private:
    KernelSpec(std::string name, std::size_t m, KernelKind kind, KernelParams params, KernelFn fn);

    static double min_pairwise_distance(std::span<const double> args) noexcept;
    static double spread(std::span<const double> args) noexcept;

    std::string name_;
    std::size_t m_;
    KernelKind kind_;
    KernelParams params_;
    KernelFn fn_;
};

/// Checked evaluation. Throws std::invalid_argument on a dimension mismatch
/// and std::domain_error on non-finite input.
[[nodiscard]] double eval_kernel(const KernelSpec& kernel, std::span<const double> args);

/// Looks up a catalog kernel: gini_abs_diff, min_pairwise (m), range (m), identity.
[[nodiscard]] KernelSpec builtin_kernel(std::string_view name, const KernelParams& params = {});

/// True when h takes the same value on every permutation of args (exact comparison).
/// Enumerates all permutations, so keep args short.
[[nodiscard]] bool is_symmetric_at(const KernelSpec& kernel, std::span<const double> args);

}  // namespace glstat

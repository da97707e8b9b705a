#pragma once

#include "glstat/kernels.hpp"
#include "glstat/ustat.hpp"
#include "glstat/weight_function.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace glstat {

/// One term a_i * H_n^{-1}(p_i) of the discrete part.
struct DiscreteTerm {
    double weight;
    double level;  ///< p_i in (0, 1)
};

/**
 * @brief Full parameterization of a GL-statistic
 *
 *   T(H_n) = integral_0^1 H_n^{-1}(t) J(t) dt + sum_i a_i H_n^{-1}(p_i).
 *
 * The discrete quantiles follow `convention`.
 */
struct GLSpec {
    KernelSpec kernel;
    WeightFunctionJ weight = WeightFunctionJ::zero();
    std::vector<DiscreteTerm> discrete;
    QuantileConvention convention = QuantileConvention::ceil;

    /// Throws std::invalid_argument unless every p_i lies in (0, 1) and weights are finite.
    void validate() const;
};

/// T(H_n) in its discretized form over the sorted kernel values v_1 <= ... <= v_N:
/// sum_i [integral of J over ((i-1)/N, i/N)] v_i + sum_i a_i H_n^{-1}(p_i).
[[nodiscard]] double gl_statistic(const KernelValueSet& values, const GLSpec& spec);
[[nodiscard]] double gl_statistic(const Sample& sample, const GLSpec& spec,
                                  std::uint64_t enumeration_cap = kDefaultEnumerationCap);

enum class GiniForm { pairwise, order_statistic };

/// Gini's mean difference. Both forms agree to rounding; order_statistic is O(n log n).
[[nodiscard]] double estimator_gini(const Sample& sample, GiniForm form = GiniForm::order_statistic);

/// Q_n^alpha: the k-th smallest min-pairwise kernel value over all m-subsets,
/// k = max(1, floor(alpha * C(n, m))). m = 3, alpha = 0.5 is the median-of-triples Q.
[[nodiscard]] double estimator_q(const Sample& sample, std::size_t m = 3, double alpha = 0.5,
                                 std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// C_n^alpha = c_alpha * (k-th smallest of X_(i+h+1) - X_(i), i = 1..n-h-1),
/// with h = floor(alpha n) and k = floor(n/2) - h. Never enumerates subsets.
[[nodiscard]] double estimator_c(const Sample& sample, double alpha, double c_alpha);

inline constexpr double kLmsConstant = 0.7413;

/// LMS_n = 0.7413 * min_i (X_(i+floor(n/2)) - X_(i)).
[[nodiscard]] double estimator_lms(const Sample& sample);

/// 1 / (2 Phi^{-1}(0.75)), the normal-consistency factor behind the 0.7413 constant.
[[nodiscard]] double lms_constant();

/// Phi^{-1}(p) for p in (0, 1).
[[nodiscard]] double standard_normal_quantile(double p);

// GL representations of the catalog estimators.
[[nodiscard]] GLSpec gini_gl_spec();
[[nodiscard]] GLSpec gini_order_statistic_gl_spec(std::size_t n);
[[nodiscard]] GLSpec q_gl_spec(std::size_t m = 3, double alpha = 0.5);
/// Range kernel of dimension floor(alpha n) + 2, J = 0, d = 1, a_1 = c_alpha,
/// p_1 = 1 / C(n, m). Matches estimator_c only when floor(n/2) - floor(alpha n) = 1.
[[nodiscard]] GLSpec c_gl_spec(std::size_t n, double alpha, double c_alpha);

/// Self-description of a catalog estimator, including its index conventions.
struct EstimatorInfo {
    std::string name;
    std::string formula;
    std::string index_convention;
};

/// Catalog names: gini, gini_os, q, c, lms, gl.
[[nodiscard]] const std::vector<EstimatorInfo>& estimator_catalog();
[[nodiscard]] const EstimatorInfo& describe_estimator(std::string_view name);

}  // namespace glstat

#include "glstat/glstat.hpp"

#include "glstat/errors.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glstat {

void GLSpec::validate() const {
    for (const auto& term : discrete) {
        if (!(term.level > 0.0 && term.level < 1.0)) {
            throw std::invalid_argument("GL discrete level p_i must lie in (0, 1)");
        }
        if (!std::isfinite(term.weight)) {
            throw std::invalid_argument("GL discrete weight a_i must be finite");
        }
    }
}

double gl_statistic(const KernelValueSet& values, const GLSpec& spec) {
    spec.validate();
    const auto v = values.sorted_values();
    const std::size_t count = v.size();
    const double nd = static_cast<double>(count);
    double total = 0.0;
    if (!spec.weight.is_zero()) {
        for (std::size_t i = 0; i < count; ++i) {
            const double lo = static_cast<double>(i) / nd;
            const double hi = i + 1 == count ? 1.0 : static_cast<double>(i + 1) / nd;
            total += spec.weight.integral(lo, hi) * v[i];
        }
    }
    for (const auto& term : spec.discrete) {
        total += term.weight * values.quantile(term.level, spec.convention);
    }
    return total;
}

double gl_statistic(const Sample& sample, const GLSpec& spec, std::uint64_t enumeration_cap) {
    spec.validate();
    return gl_statistic(kernel_values(sample, spec.kernel, enumeration_cap), spec);
}

double estimator_gini(const Sample& sample, GiniForm form) {
    if (sample.size() < 2) {
        throw InsufficientData("Gini's mean difference needs at least 2 observations");
    }
    if (form == GiniForm::order_statistic) {
        return gini_order_statistic_form(sample.values());
    }
    return u_statistic(sample, KernelSpec::gini_abs_diff(), {.allow_fast_path = false});
}

double estimator_q(const Sample& sample, std::size_t m, double alpha, std::uint64_t enumeration_cap) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("Q estimator: alpha must lie in (0, 1)");
    }
    const KernelSpec kernel = KernelSpec::min_pairwise(m);
    if (sample.size() < m) {
        throw InsufficientData("Q estimator needs at least m observations");
    }
    const std::uint64_t count = binomial(sample.size(), m);
    if (count > enumeration_cap) {
        throw CapacityExceeded("Q estimator: C(n, m) exceeds the enumeration cap; use the subsampled mode");
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    std::vector<double> args(m);
    for_each_subset(sample.values(), m, args, 0, [&] { values.push_back(kernel(args)); });
    const std::size_t k = quantile_rank(alpha, values.size(), QuantileConvention::floor_bracket);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1), values.end());
    return values[k - 1];
}

namespace {

// k-th smallest (1-based) of sorted[i + gap] - sorted[i].
double window_spread_order_statistic(const std::vector<double>& sorted, std::size_t gap, std::size_t k) {
    std::vector<double> spreads;
    spreads.reserve(sorted.size() - gap);
    for (std::size_t i = 0; i + gap < sorted.size(); ++i) {
        spreads.push_back(sorted[i + gap] - sorted[i]);
    }
    std::nth_element(spreads.begin(), spreads.begin() + static_cast<std::ptrdiff_t>(k - 1), spreads.end());
    return spreads[k - 1];
}

}  // namespace

double estimator_c(const Sample& sample, double alpha, double c_alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::invalid_argument("C estimator: alpha must lie in (0, 0.5)");
    }
    if (!std::isfinite(c_alpha)) {
        throw std::invalid_argument("C estimator: c_alpha must be finite");
    }
    const std::size_t n = sample.size();
    const auto h = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n)));
    if (n < h + 2) {
        throw InsufficientData("C estimator needs n >= floor(alpha n) + 2");
    }
    if (n / 2 <= h) {
        throw InsufficientData("C estimator: order-statistic index floor(n/2) - floor(alpha n) must be >= 1");
    }
    const std::size_t k = n / 2 - h;
    return c_alpha * window_spread_order_statistic(sample.sorted(), h + 1, k);
}

double estimator_lms(const Sample& sample) {
    const std::size_t n = sample.size();
    if (n < 1) {
        throw InsufficientData("LMS needs at least one observation");
    }
    return kLmsConstant * window_spread_order_statistic(sample.sorted(), n / 2, 1);
}

double standard_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("normal quantile level must lie in (0, 1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double lms_constant() {
    return 1.0 / (2.0 * standard_normal_quantile(0.75));
}

GLSpec gini_gl_spec() {
    return {KernelSpec::gini_abs_diff(), WeightFunctionJ::constant(1.0), {}, QuantileConvention::ceil};
}

GLSpec gini_order_statistic_gl_spec(std::size_t n) {
    return {KernelSpec::identity(), WeightFunctionJ::gini_order_statistic(n), {}, QuantileConvention::ceil};
}

GLSpec q_gl_spec(std::size_t m, double alpha) {
    return {KernelSpec::min_pairwise(m), WeightFunctionJ::zero(), {{1.0, alpha}}, QuantileConvention::floor_bracket};
}

GLSpec c_gl_spec(std::size_t n, double alpha, double c_alpha) {
    const auto h = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n)));
    const std::size_t m = h + 2;
    if (n < m) {
        throw InsufficientData("C estimator needs n >= floor(alpha n) + 2");
    }
    const double level = 1.0 / binomial_real(n, m);
    return {KernelSpec::range(m), WeightFunctionJ::zero(), {{c_alpha, level}}, QuantileConvention::ceil};
}

const std::vector<EstimatorInfo>& estimator_catalog() {
    static const std::vector<EstimatorInfo> catalog = {
        {"gini", "1/(n(n-1)) sum_{i,j} |X_i - X_j| (computed via sorted values)",
         "GL form: kernel |x - y|, J = 1, d = 0"},
        {"gini_os", "2/(n(n-1)) sum_i (2i - n - 1) X_(i:n)",
         "1-based order statistics; GL form: identity kernel, J(t) = 4n/(n-1) t - 2n/(n-1)"},
        {"q", "k-th smallest of min_{l<k} |X_il - X_ik| over m-subsets",
         "k = max(1, floor(alpha * C(n, m))), 1-based"},
        {"c", "c_alpha * k-th smallest of X_(i+h+1) - X_(i)",
         "h = floor(alpha n), k = floor(n/2) - h, i = 1..n-h-1, 1-based"},
        {"lms", "0.7413 * min_i (X_(i+floor(n/2)) - X_(i))", "i = 1..n-floor(n/2), 1-based"},
        {"gl", "sum_i [int J over ((i-1)/N, i/N)] v_(i) + sum_i a_i H_n^{-1}(p_i)",
         "discrete quantiles per spec convention: ceil k = ceil(pN), floor_bracket k = max(1, floor(pN))"},
    };
    return catalog;
}

const EstimatorInfo& describe_estimator(std::string_view name) {
    for (const auto& info : estimator_catalog()) {
        if (info.name == name) {
            return info;
        }
    }
    throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

}  // namespace glstat

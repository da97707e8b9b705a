#pragma once

#include "glstat/glstat.hpp"
#include "glstat/kernels.hpp"
#include "glstat/ustat.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace glstat {

/// Bartlett weight (1 - t) on [0, 1], zero beyond. Throws std::invalid_argument for t < 0.
[[nodiscard]] double weight_bartlett(double t);

/// Lag weight kappa used by the long-run variance estimators.
class WeightFunction {
public:
    enum class Kind { bartlett, custom };

    static WeightFunction bartlett();
    /// `support` is the radius beyond which kappa vanishes; infinity sums every lag.
    static WeightFunction custom(std::string name, std::function<double(double)> kappa, double support);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] double support() const noexcept { return support_; }
    [[nodiscard]] double operator()(double t) const { return kind_ == Kind::bartlett ? weight_bartlett(t) : kappa_(t); }

private:
    WeightFunction(Kind kind, std::string name, std::function<double(double)> kappa, double support);

    Kind kind_;
    std::string name_;
    std::function<double(double)> kappa_;
    double support_;
};

/// floor(n^(1/3)), at least 1. Throws InsufficientData for n < 2.
[[nodiscard]] double default_bandwidth(std::size_t n);

struct BandwidthPolicy {
    enum class Kind { automatic, fixed, power_law };

    Kind kind = Kind::automatic;
    double value = 0.0;        ///< fixed bandwidth
    double coefficient = 1.0;  ///< power_law: coefficient * n^exponent
    double exponent = 1.0 / 3.0;

    static BandwidthPolicy automatic() { return {}; }
    static BandwidthPolicy fixed(double b) { return {Kind::fixed, b, 1.0, 1.0 / 3.0}; }
    static BandwidthPolicy power_law(double c, double e) { return {Kind::power_law, 0.0, c, e}; }

    [[nodiscard]] double bandwidth(std::size_t n) const;
};

struct LrvConfig {
    WeightFunction weight = WeightFunction::bartlett();
    BandwidthPolicy bandwidth = BandwidthPolicy::automatic();
    double density_halfwidth_constant = 0.5;  ///< c in delta_n = c * IQR_h * n^(-1/5)
    Normalization normalization = Normalization::combinatorial;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

/// sum_{|r| < n} kappa(|r| / b) (1/n) sum_i g_i g_{i+|r|}, lag-major with ascending index.
[[nodiscard]] double weighted_autocovariance_sum(std::span<const double> projections, const WeightFunction& weight,
                                                 double bandwidth);

/// Long-run variance of a U-statistic from the empirical first Hoeffding projection.
/// May be negative for non-Bartlett weights; no clamping here.
[[nodiscard]] double lrv_ustat(const Sample& sample, const KernelSpec& kernel, const LrvConfig& config = {});

struct DensityEstimate {
    double level;      ///< p
    double quantile;   ///< H_n^{-1}(p)
    double halfwidth;  ///< delta_n
    double density;    ///< (H_n(xi + delta) - H_n(xi - delta)) / (2 delta)
};

/// Central finite difference of H_n around its p-quantile. Throws DegenerateDensity
/// when H_n is flat there (including a zero interquartile range).
[[nodiscard]] DensityEstimate density_at_uquantile(const KernelValueSet& values, double p, const LrvConfig& config,
                                                   QuantileConvention convention = QuantileConvention::ceil);
[[nodiscard]] double density_at_uquantile(const Sample& sample, const KernelSpec& kernel, double p,
                                          const LrvConfig& config = {});

/**
 * @brief Empirical surrogates for the influence kernel A of a GL-statistic.
 *
 * H_F is replaced by H_n throughout (also inside J), H_F^{-1}(p_i) by the
 * U-quantiles and h_F at those quantiles by density_at_uquantile. A depends on
 * its arguments only through h(args), so evaluation works on kernel values.
 */
class PluginContext {
public:
    PluginContext(KernelValueSet values, const GLSpec& spec, const LrvConfig& config);

    static PluginContext build(const Sample& sample, const GLSpec& spec, const LrvConfig& config);

    /// A at a point whose kernel value is v. O(log N).
    [[nodiscard]] double influence(double v) const;
    /// influence(v) with a galloping search that starts at hint; hint is moved to the located position.
    [[nodiscard]] double influence(double v, std::size_t& hint) const;
    /// Sum of A over all C(n, m) index subsets.
    [[nodiscard]] double centering_sum() const noexcept { return centering_sum_; }

    [[nodiscard]] const KernelValueSet& values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<DensityEstimate>& densities() const noexcept { return densities_; }

private:
    KernelValueSet values_;
    [[nodiscard]] double influence_at(double v, std::size_t position) const;

    std::vector<DiscreteTerm> discrete_;
    std::vector<DensityEstimate> densities_;
    double j_at_zero_ = 0.0;
    double j_at_one_ = 0.0;
    double level_weighted_ = 0.0;      // sum_k J(k/N) (k/N) (v_{k+1} - v_k)
    std::vector<double> gap_weight_;   // J(k/N) for the gap after sorted position k-1
    std::vector<double> suffix_;       // suffix sums of J(k/N) (v_{k+1} - v_k)
    double centering_sum_ = 0.0;
};

/// Plug-in A(args). args must have the kernel's dimension.
[[nodiscard]] double a_kernel_hat(const GLSpec& spec, std::span<const double> args, const PluginContext& plugin);

/// Empirical first Hoeffding projection of A at x, normalized like hoeffding_g1_hat.
[[nodiscard]] double a1_hat(const Sample& sample, const GLSpec& spec, double x, const PluginContext& plugin,
                            Normalization mode = Normalization::combinatorial);

/// a1_hat at every sample point, in sample order.
[[nodiscard]] std::vector<double> a1_hat_all(const Sample& sample, const GLSpec& spec, const PluginContext& plugin,
                                             Normalization mode = Normalization::combinatorial);

struct GLVarianceReport {
    double estimate = 0.0;       ///< T(H_n)
    double sigma2_raw = 0.0;     ///< weighted autocovariance sum of a1_hat
    double sigma2_gl = 0.0;      ///< max(sigma2_raw, 0)
    double scaled_sigma2 = 0.0;  ///< m^2 * sigma2_gl, the variance of sqrt(n)(T(H_n) - T(H_F))
    double bandwidth_used = 0.0;
    std::size_t m = 0;
    std::vector<DensityEstimate> density_estimates;
    bool clamped = false;
};

[[nodiscard]] GLVarianceReport lrv_gl(const Sample& sample, const GLSpec& spec, const LrvConfig& config = {});

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.0;
    double z = 0.0;
    GLVarianceReport variance;
};

/// T(H_n) +- z_{(1+level)/2} * m * sigma_gl / sqrt(n).
[[nodiscard]] ConfidenceInterval gl_confidence_interval(const Sample& sample, const GLSpec& spec,
                                                        const LrvConfig& config, double level);

}  // namespace glstat

#pragma once

#include "glstat/ustat.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace glstat {

/// Driving noise Z_t with standard-normal marginals.
struct InnovationModel {
    enum class Kind { iid_gaussian, ar1 };

    Kind kind = Kind::iid_gaussian;
    double rho = 0.0;  ///< ar1 only: Z_t = rho Z_{t-1} + sqrt(1 - rho^2) eps_t

    static InnovationModel iid_gaussian() { return {}; }
    static InnovationModel ar1(double rho) { return {Kind::ar1, rho}; }

    [[nodiscard]] double marginal_variance() const noexcept { return 1.0; }
};

/// E|Z_t| under the innovation law: sqrt(2/pi) for both supported (normal-marginal) kinds.
[[nodiscard]] double mean_abs_innovation(const InnovationModel& model);

/// n_total draws; ar1 starts from Z_1 ~ N(0, 1) so the path is stationary from the first draw.
/// Throws std::domain_error when |rho| >= 1.
[[nodiscard]] Sample simulate_innovations(const InnovationModel& model, std::size_t n_total, std::uint64_t seed);

/// log sigma_t^2 = alpha0 + sum_k alpha_k f(Z_{t-k}) + sum_j beta_j log sigma_{t-j}^2,
/// f(z) = theta z + lambda (|z| - E|Z|), X_t = sigma_t Z_t.
struct EgarchParams {
    double alpha0 = 0.0;
    std::vector<double> alpha{0.2};
    std::vector<double> beta{0.05};
    double theta = 0.9;
    double lambda = 0.1;
    double mean_abs_z = 0.7978845608028654;  // sqrt(2/pi)

    [[nodiscard]] double beta_sum() const noexcept;

    /// alpha_1 = 0.2, beta_1 = 0.05, theta = 0.9, lambda = 0.1.
    static EgarchParams scenario1();
    /// alpha_1 = 0.8, beta_1 = 0.1, theta = 0.9, lambda = 0.1.
    static EgarchParams scenario2();
};

struct Garch11Params {
    double alpha0 = 0.1;
    double alpha1 = 0.1;
    double beta1 = 0.8;
};

/// Process descriptor as it appears in configs.
struct ProcessSpec {
    enum class Kind { iid_gaussian, ar1, garch11, egarch, constant };

    Kind kind = Kind::iid_gaussian;
    InnovationModel innovations;  ///< the series itself for iid/ar1, the driving noise otherwise
    EgarchParams egarch;
    Garch11Params garch;
    double constant_value = 0.0;
};

[[nodiscard]] std::string to_string(ProcessSpec::Kind kind);
[[nodiscard]] ProcessSpec::Kind parse_process_kind(const std::string& name);

struct SimConfig {
    std::size_t n = 0;
    std::size_t burn_in = 500;
    std::uint64_t seed = 0;
    ProcessSpec model;
};

/// Runs the EGARCH recursion over `innovations`, which must hold at least
/// n + burn_in + max(p, q) values. The first max(p, q) log-variances are set to
/// alpha0 / (1 - sum beta); the next burn_in outputs are dropped.
[[nodiscard]] Sample simulate_egarch(const EgarchParams& params, const Sample& innovations, const SimConfig& sim);

/// GARCH(1,1) with sigma_1^2 = alpha0 / (1 - alpha1 - beta1); needs n + burn_in innovations.
[[nodiscard]] Sample simulate_garch11(const Garch11Params& params, const Sample& innovations, const SimConfig& sim);

/// Simulates sim.model end to end from sim.seed.
[[nodiscard]] Sample simulate_path(const SimConfig& sim);

struct EgarchDiagnostics {
    double beta_sum = 0.0;
    bool stationary = false;                    ///< |sum beta| < 1
    double stationary_log_variance_mean = 0.0;  ///< alpha0 / (1 - sum beta); NaN when not stationary
    bool innovations_bounded = false;           ///< sup |Z_t| < infinity
    bool moment_condition = false;              ///< E|Z_t| <= 1
    std::vector<std::string> notes;
};

[[nodiscard]] EgarchDiagnostics check_egarch_conditions(const EgarchParams& params, const InnovationModel& model);

/// One value per line under an `x` header, 17 significant digits.
void write_path_csv(const Sample& path, std::ostream& out);

}  // namespace glstat

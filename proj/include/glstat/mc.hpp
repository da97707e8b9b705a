#pragma once

#include "glstat/glstat.hpp"
#include "glstat/lrv.hpp"
#include "glstat/processes.hpp"
#include "glstat/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace glstat {

/// One estimator column of an experiment. `label` names its output files.
struct EstimatorConfig {
    std::string name;   ///< gini, gini_os, q, c, lms or gl
    std::string label;  ///< defaults to name
    std::size_t m = 3;       ///< q
    double alpha = 0.5;      ///< q, c
    double c_alpha = 1.0;    ///< c
    std::optional<GLSpec> gl;  ///< gl
};

/// GL form of a catalog estimator at sample size n, used for its confidence
/// intervals. gl returns its own spec.
[[nodiscard]] std::optional<GLSpec> gl_spec_for_estimator(const EstimatorConfig& estimator, std::size_t n);

/// How the Q estimator is computed when C(n, m) is large.
enum class QMode {
    automatic,   ///< exact when C(n, m) <= q_subsample_size, subsampled otherwise
    exact,
    subsampled,  ///< incomplete U-quantile over q_subsample_size random m-subsets
};

struct ExperimentConfig {
    ProcessSpec process;
    std::size_t burn_in = 500;
    std::vector<EstimatorConfig> estimators;
    std::vector<std::size_t> sample_sizes;
    std::size_t replications = 500;
    std::optional<LrvConfig> lrv;  ///< when set, per-replication CIs and coverage are reported
    double ci_level = 0.95;
    std::uint64_t seed = 0;
    std::string output_dir;
    QMode q_mode = QMode::automatic;
    std::uint64_t q_subsample_size = 2'000'000;
    std::string rng{kRngAlgorithm};

    /// Throws std::invalid_argument on an unusable config.
    void validate() const;
};

struct NormalitySummary {
    double mean = 0.0;
    double sd = 0.0;  ///< with the n - 1 divisor
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double qq_correlation = 0.0;
};

struct QQPoint {
    double theoretical;
    double empirical;
};

/// (Phi^{-1}((i - 0.5)/R), v_(i)) for the sorted values. Throws DegenerateVariance
/// for fewer than two values or zero spread.
[[nodiscard]] std::vector<QQPoint> qq_points(std::span<const double> values);

/// Moment skewness and excess kurtosis plus the QQ correlation. Needs at least 4 values.
[[nodiscard]] NormalitySummary normality_summary(std::span<const double> values);

/// (v - mean) / sd with the n - 1 divisor.
[[nodiscard]] std::vector<double> standardize(std::span<const double> values);

/// Incomplete U-quantile version of estimator_q over `subsets` random m-subsets
/// (distinct indices within a subset, subsets drawn with replacement).
[[nodiscard]] double estimator_q_subsampled(const Sample& sample, std::size_t m, double alpha, std::uint64_t subsets,
                                            std::uint64_t seed);

struct CellReport {
    std::string estimator;  ///< label
    std::size_t n = 0;
    std::string mode;
    std::vector<double> estimates;
    std::vector<double> standardized;
    std::optional<NormalitySummary> summary;
    std::vector<QQPoint> qq;
    std::optional<double> coverage;
    std::string error;           ///< empty on success
    std::string coverage_error;  ///< empty unless CIs were requested and failed
};

struct ExperimentReport {
    std::optional<ExperimentConfig> config;
    std::vector<CellReport> cells;
};

struct RunOptions {
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Seed of the replication-r path at sample size n. Independent of the estimator,
/// so cells sharing n see the same paths and dropping a cell changes no other.
[[nodiscard]] std::uint64_t path_seed(std::uint64_t master, std::size_t n, std::size_t replication);

[[nodiscard]] ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

struct ManifestEntry {
    std::string file;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct Manifest {
    std::vector<ManifestEntry> entries;
};

/// Writes summary.csv, estimates_<label>_<n>.csv, qq_<label>_<n>.csv, config.json
/// and manifest.txt (sha256 + size per file) into dir, creating it if needed.
Manifest write_report(const ExperimentReport& report, const std::filesystem::path& dir);

/// "%.17g".
[[nodiscard]] std::string format_double(double v);

}  // namespace glstat

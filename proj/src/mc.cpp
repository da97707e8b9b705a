#include "glstat/mc.hpp"

#include "glstat/config_io.hpp"
#include "glstat/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace glstat {

namespace {

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(std::span<const double> v, double mean) {
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::size_t minimum_sample_size(const EstimatorConfig& e) {
    if (e.name == "q") {
        return std::max<std::size_t>(e.m, 2);
    }
    if (e.name == "c" || e.name == "lms") {
        return 3;
    }
    if (e.name == "gl") {
        return std::max<std::size_t>(e.gl->kernel.m(), 2);
    }
    return 2;
}

bool q_is_subsampled(const ExperimentConfig& config, const EstimatorConfig& e, std::size_t n) {
    switch (config.q_mode) {
    case QMode::exact:
        return false;
    case QMode::subsampled:
        return true;
    case QMode::automatic:
        return binomial(n, e.m) > config.q_subsample_size;
    }
    return false;
}

}  // namespace

std::optional<GLSpec> gl_spec_for_estimator(const EstimatorConfig& e, std::size_t n) {
    if (e.name == "gini") {
        return gini_gl_spec();
    }
    if (e.name == "gini_os") {
        return gini_order_statistic_gl_spec(n);
    }
    if (e.name == "q") {
        return q_gl_spec(e.m, e.alpha);
    }
    if (e.name == "c") {
        return c_gl_spec(n, e.alpha, e.c_alpha);
    }
    if (e.name == "lms") {
        const std::size_t m = n / 2 + 1;
        return GLSpec{KernelSpec::range(m), WeightFunctionJ::zero(), {{kLmsConstant, 1.0 / binomial_real(n, m)}},
                      QuantileConvention::ceil};
    }
    return e.gl;
}

namespace {

struct CellPlan {
    std::size_t estimator_index = 0;
    std::size_t n = 0;
    bool subsampled = false;
    std::optional<GLSpec> spec;
    std::string plan_error;
    std::string spec_error;
};

struct CellWork {
    std::vector<double> estimates;
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<std::string> errors;
    std::vector<std::string> ci_errors;
};

double compute_estimate(const ExperimentConfig& config, const CellPlan& plan, const Sample& path,
                        std::uint64_t replication_seed) {
    const EstimatorConfig& e = config.estimators[plan.estimator_index];
    if (e.name == "gini") {
        return estimator_gini(path, GiniForm::order_statistic);
    }
    if (e.name == "gini_os") {
        return gl_statistic(path, gini_order_statistic_gl_spec(path.size()));
    }
    if (e.name == "q") {
        if (plan.subsampled) {
            return estimator_q_subsampled(path, e.m, e.alpha, config.q_subsample_size,
                                          derive_seed(replication_seed, {hash_label(e.label)}));
        }
        return estimator_q(path, e.m, e.alpha);
    }
    if (e.name == "c") {
        return estimator_c(path, e.alpha, e.c_alpha);
    }
    if (e.name == "lms") {
        return estimator_lms(path);
    }
    return gl_statistic(path, *e.gl);
}

void for_each_index(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                body(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c == '\n' ? ' ' : c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ExperimentConfig::validate() const {
    if (rng != kRngAlgorithm) {
        throw std::invalid_argument("unsupported rng '" + rng + "'; only " + std::string(kRngAlgorithm) +
                                    " is implemented");
    }
    if (replications < 2) {
        throw std::invalid_argument("replications must be at least 2");
    }
    if (sample_sizes.empty()) {
        throw std::invalid_argument("sample_sizes must not be empty");
    }
    for (std::size_t n : sample_sizes) {
        if (n < 2) {
            throw std::invalid_argument("every sample size must be at least 2");
        }
    }
    if (estimators.empty()) {
        throw std::invalid_argument("at least one estimator is required");
    }
    std::vector<std::string> labels;
    for (const auto& e : estimators) {
        (void)describe_estimator(e.name);
        if (e.name == "q") {
            if (e.m < 2) {
                throw std::invalid_argument("q needs m >= 2");
            }
            if (!(e.alpha > 0.0 && e.alpha < 1.0)) {
                throw std::invalid_argument("q needs alpha in (0, 1)");
            }
        }
        if (e.name == "c" && !(e.alpha > 0.0 && e.alpha < 0.5)) {
            throw std::invalid_argument("c needs alpha in (0, 0.5)");
        }
        if (e.name == "gl") {
            if (!e.gl) {
                throw std::invalid_argument("estimator 'gl' needs a spec");
            }
            e.gl->validate();
        }
        const std::string label = e.label.empty() ? e.name : e.label;
        if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
            throw std::invalid_argument("duplicate estimator label '" + label + "'");
        }
        labels.push_back(label);
    }
    if (!(ci_level > 0.0 && ci_level < 1.0)) {
        throw std::invalid_argument("ci_level must lie in (0, 1)");
    }
    if (q_subsample_size == 0) {
        throw std::invalid_argument("q_subsample_size must be positive");
    }
    if (process.kind == ProcessSpec::Kind::ar1 || process.kind == ProcessSpec::Kind::egarch ||
        process.kind == ProcessSpec::Kind::garch11) {
        if (!(std::abs(process.innovations.rho) < 1.0)) {
            throw std::invalid_argument("AR(1) coefficient must satisfy |rho| < 1");
        }
    }
}

std::vector<double> standardize(std::span<const double> values) {
    if (values.size() < 2) {
        throw DegenerateVariance("standardization needs at least two values");
    }
    const double mean = mean_of(values);
    const double sd = sd_of(values, mean);
    if (!(sd > 0.0) || !std::isfinite(sd)) {
        throw DegenerateVariance("estimates have zero variance (sd = 0)");
    }
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return (v - mean) / sd; });
    return out;
}

std::vector<QQPoint> qq_points(std::span<const double> values) {
    if (values.size() < 2) {
        throw DegenerateVariance("QQ points need at least two values");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (!(sorted.back() > sorted.front())) {
        throw DegenerateVariance("QQ points need values with positive spread");
    }
    const double r = static_cast<double>(sorted.size());
    std::vector<QQPoint> out;
    out.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        out.push_back({standard_normal_quantile((static_cast<double>(i) + 0.5) / r), sorted[i]});
    }
    return out;
}

NormalitySummary normality_summary(std::span<const double> values) {
    if (values.size() < 4) {
        throw InsufficientData("normality summary needs at least 4 values");
    }
    NormalitySummary s;
    s.mean = mean_of(values);
    s.sd = sd_of(values, s.mean);
    if (!(s.sd > 0.0)) {
        throw DegenerateVariance("values have zero variance");
    }
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double count = static_cast<double>(values.size());
    m2 /= count;
    m3 /= count;
    m4 /= count;
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;

    const auto qq = qq_points(values);
    double mx = 0.0;
    double my = 0.0;
    for (const auto& p : qq) {
        mx += p.theoretical;
        my += p.empirical;
    }
    mx /= count;
    my /= count;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (const auto& p : qq) {
        sxy += (p.theoretical - mx) * (p.empirical - my);
        sxx += (p.theoretical - mx) * (p.theoretical - mx);
        syy += (p.empirical - my) * (p.empirical - my);
    }
    s.qq_correlation = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    return s;
}

double estimator_q_subsampled(const Sample& sample, std::size_t m, double alpha, std::uint64_t subsets,
                              std::uint64_t seed) {
    const std::size_t n = sample.size();
    if (m < 2) {
        throw std::invalid_argument("q needs m >= 2");
    }
    if (n < m) {
        throw InsufficientData("q needs at least m observations");
    }
    if (subsets == 0) {
        throw std::invalid_argument("subsample size must be positive");
    }
    const auto& xs = sample.values();
    Xoshiro256StarStar rng(seed);
    std::vector<double> values;
    values.reserve(subsets);
    std::vector<std::size_t> idx(m);
    for (std::uint64_t s = 0; s < subsets; ++s) {
        for (std::size_t a = 0; a < m; ++a) {
            bool fresh = false;
            while (!fresh) {
                idx[a] = static_cast<std::size_t>(rng.below(n));
                fresh = std::find(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(a), idx[a]) ==
                        idx.begin() + static_cast<std::ptrdiff_t>(a);
            }
        }
        double best = std::abs(xs[idx[0]] - xs[idx[1]]);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = a + 1; b < m; ++b) {
                best = std::min(best, std::abs(xs[idx[a]] - xs[idx[b]]));
            }
        }
        values.push_back(best);
    }
    const std::size_t k = quantile_rank(alpha, values.size(), QuantileConvention::floor_bracket);
    auto nth = values.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(values.begin(), nth, values.end());
    return *nth;
}

std::uint64_t path_seed(std::uint64_t master, std::size_t n, std::size_t replication) {
    return derive_seed(master, {hash_label("path"), static_cast<std::uint64_t>(n),
                                static_cast<std::uint64_t>(replication)});
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    config.validate();
    unsigned threads = options.threads;
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    const std::size_t reps = config.replications;

    ExperimentReport report;
    report.config = config;

    for (std::size_t n : config.sample_sizes) {
        std::vector<CellPlan> plans;
        for (std::size_t e = 0; e < config.estimators.size(); ++e) {
            const auto& est = config.estimators[e];
            CellPlan plan;
            plan.estimator_index = e;
            plan.n = n;
            if (n < minimum_sample_size(est)) {
                plan.plan_error = "estimator '" + est.name + "' needs n >= " +
                                  std::to_string(minimum_sample_size(est));
            }
            plan.subsampled = est.name == "q" && q_is_subsampled(config, est, n);
            if (config.lrv && plan.plan_error.empty()) {
                try {
                    plan.spec = gl_spec_for_estimator(est, n);
                } catch (const std::exception& ex) {
                    plan.spec_error = ex.what();
                }
            }
            plans.push_back(std::move(plan));
        }

        std::vector<CellWork> work(plans.size());
        for (auto& w : work) {
            w.estimates.assign(reps, 0.0);
            w.errors.assign(reps, {});
            if (config.lrv) {
                w.lo.assign(reps, 0.0);
                w.hi.assign(reps, 0.0);
                w.ci_errors.assign(reps, {});
            }
        }

        for_each_index(reps, threads, [&](std::size_t r) {
            const std::uint64_t seed = path_seed(config.seed, n, r);
            SimConfig sim{n, config.burn_in, seed, config.process};
            const Sample path = simulate_path(sim);
            for (std::size_t c = 0; c < plans.size(); ++c) {
                const CellPlan& plan = plans[c];
                if (!plan.plan_error.empty()) {
                    continue;
                }
                try {
                    work[c].estimates[r] = compute_estimate(config, plan, path, seed);
                } catch (const std::exception& ex) {
                    work[c].errors[r] = ex.what();
                    continue;
                }
                if (!config.lrv || !plan.spec_error.empty()) {
                    continue;
                }
                try {
                    const auto ci = gl_confidence_interval(path, *plan.spec, *config.lrv, config.ci_level);
                    work[c].lo[r] = ci.lo;
                    work[c].hi[r] = ci.hi;
                } catch (const std::exception& ex) {
                    work[c].ci_errors[r] = ex.what();
                }
            }
        });

        for (std::size_t c = 0; c < plans.size(); ++c) {
            const auto& est = config.estimators[plans[c].estimator_index];
            CellReport cell;
            cell.estimator = est.label.empty() ? est.name : est.label;
            cell.n = n;
            cell.mode = plans[c].subsampled ? "subsampled" : "exact";
            report.cells.push_back(std::move(cell));
        }
        const std::size_t base = report.cells.size() - plans.size();
        for (std::size_t c = 0; c < plans.size(); ++c) {
            CellReport& cell = report.cells[base + c];
            CellWork& w = work[c];
            if (!plans[c].plan_error.empty()) {
                cell.error = plans[c].plan_error;
                continue;
            }
            const auto failed = std::find_if(w.errors.begin(), w.errors.end(),
                                             [](const std::string& s) { return !s.empty(); });
            if (failed != w.errors.end()) {
                cell.error = "replication " + std::to_string(failed - w.errors.begin()) + ": " + *failed;
                continue;
            }
            cell.estimates = std::move(w.estimates);
            try {
                cell.standardized = standardize(cell.estimates);
                cell.summary = normality_summary(cell.estimates);
                cell.qq = qq_points(cell.standardized);
            } catch (const std::exception& ex) {
                cell.standardized.clear();
                cell.summary.reset();
                cell.qq.clear();
                cell.error = ex.what();
            }
            if (!config.lrv) {
                continue;
            }
            if (!plans[c].spec_error.empty()) {
                cell.coverage_error = plans[c].spec_error;
                continue;
            }
            const auto ci_failed = std::find_if(w.ci_errors.begin(), w.ci_errors.end(),
                                                [](const std::string& s) { return !s.empty(); });
            if (ci_failed != w.ci_errors.end()) {
                cell.coverage_error =
                    "replication " + std::to_string(ci_failed - w.ci_errors.begin()) + ": " + *ci_failed;
                continue;
            }
            const double grand_mean = mean_of(cell.estimates);
            std::size_t covered = 0;
            for (std::size_t r = 0; r < reps; ++r) {
                if (w.lo[r] <= grand_mean && grand_mean <= w.hi[r]) {
                    ++covered;
                }
            }
            cell.coverage = static_cast<double>(covered) / static_cast<double>(reps);
        }
    }

    std::vector<CellReport> ordered;
    ordered.reserve(report.cells.size());
    const std::size_t per_n = config.estimators.size();
    for (std::size_t e = 0; e < per_n; ++e) {
        for (std::size_t k = 0; k < config.sample_sizes.size(); ++k) {
            ordered.push_back(std::move(report.cells[k * per_n + e]));
        }
    }
    report.cells = std::move(ordered);
    return report;
}

Manifest write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    Manifest manifest;
    const auto emit = [&](const std::string& name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
        }
        out << content;
        out.close();
        if (!out) {
            throw std::runtime_error("failed writing '" + (dir / name).string() + "'");
        }
        manifest.entries.push_back({name, sha256_hex(content), content.size()});
    };

    std::ostringstream summary;
    summary << "estimator,n,replications,mode,mean,sd,skewness,excess_kurtosis,qq_correlation,coverage,error\n";
    for (const auto& cell : report.cells) {
        summary << csv_field(cell.estimator) << ',' << cell.n << ',' << cell.estimates.size() << ',' << cell.mode;
        if (cell.summary) {
            const auto& s = *cell.summary;
            summary << ',' << format_double(s.mean) << ',' << format_double(s.sd) << ','
                    << format_double(s.skewness) << ',' << format_double(s.excess_kurtosis) << ','
                    << format_double(s.qq_correlation);
        } else {
            summary << ",,,,,";
        }
        summary << ',' << (cell.coverage ? format_double(*cell.coverage) : std::string());
        std::string error = cell.error;
        if (!cell.coverage_error.empty()) {
            error += (error.empty() ? "" : "; ") + std::string("coverage: ") + cell.coverage_error;
        }
        summary << ',' << csv_field(error) << '\n';
    }
    emit("summary.csv", summary.str());

    if (report.config) {
        emit("config.json", to_json(*report.config).dump(2) + "\n");
    }

    for (const auto& cell : report.cells) {
        const std::string suffix = cell.estimator + "_" + std::to_string(cell.n) + ".csv";
        if (!cell.estimates.empty()) {
            std::string body = "replication,estimate\n";
            for (std::size_t r = 0; r < cell.estimates.size(); ++r) {
                body += std::to_string(r) + "," + format_double(cell.estimates[r]) + "\n";
            }
            emit("estimates_" + suffix, body);
        }
        if (!cell.qq.empty()) {
            std::string body = "theoretical,empirical\n";
            for (const auto& p : cell.qq) {
                body += format_double(p.theoretical) + "," + format_double(p.empirical) + "\n";
            }
            emit("qq_" + suffix, body);
        }
    }

    std::ostringstream listing;
    for (const auto& entry : manifest.entries) {
        listing << entry.sha256 << "  " << entry.bytes << "  " << entry.file << '\n';
    }
    std::ofstream out(dir / "manifest.txt", std::ios::binary | std::ios::trunc);
    out << listing.str();
    if (!out) {
        throw std::runtime_error("cannot write manifest in '" + dir.string() + "'");
    }
    return manifest;
}

}  // namespace glstat

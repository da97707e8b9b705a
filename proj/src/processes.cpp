#include "glstat/processes.hpp"

#include "glstat/errors.hpp"
#include "glstat/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace glstat {

double mean_abs_innovation(const InnovationModel& model) {
    switch (model.kind) {
    case InnovationModel::Kind::iid_gaussian:
    case InnovationModel::Kind::ar1:
        return std::sqrt(2.0 / std::numbers::pi);
    }
    throw std::invalid_argument("unsupported innovation model");
}

Sample simulate_innovations(const InnovationModel& model, std::size_t n_total, std::uint64_t seed) {
    Xoshiro256StarStar rng(seed);
    std::vector<double> z(n_total);
    if (model.kind == InnovationModel::Kind::iid_gaussian) {
        for (auto& v : z) {
            v = rng.normal();
        }
        return Sample(std::move(z));
    }
    if (!(std::abs(model.rho) < 1.0)) {
        throw std::domain_error("AR(1) innovations need |rho| < 1");
    }
    const double scale = std::sqrt(1.0 - model.rho * model.rho);
    for (std::size_t t = 0; t < n_total; ++t) {
        const double eps = rng.normal();
        z[t] = t == 0 ? eps : model.rho * z[t - 1] + scale * eps;
    }
    return Sample(std::move(z));
}

double EgarchParams::beta_sum() const noexcept {
    double s = 0.0;
    for (double b : beta) {
        s += b;
    }
    return s;
}

EgarchParams EgarchParams::scenario1() {
    return EgarchParams{};
}

EgarchParams EgarchParams::scenario2() {
    EgarchParams p;
    p.alpha = {0.8};
    p.beta = {0.1};
    return p;
}

std::string to_string(ProcessSpec::Kind kind) {
    switch (kind) {
    case ProcessSpec::Kind::iid_gaussian:
        return "iid_gaussian";
    case ProcessSpec::Kind::ar1:
        return "ar1";
    case ProcessSpec::Kind::garch11:
        return "garch11";
    case ProcessSpec::Kind::egarch:
        return "egarch";
    case ProcessSpec::Kind::constant:
        return "constant";
    }
    return "unknown";
}

ProcessSpec::Kind parse_process_kind(const std::string& name) {
    for (auto kind : {ProcessSpec::Kind::iid_gaussian, ProcessSpec::Kind::ar1, ProcessSpec::Kind::garch11,
                      ProcessSpec::Kind::egarch, ProcessSpec::Kind::constant}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    if (name == "iid") {
        return ProcessSpec::Kind::iid_gaussian;
    }
    throw std::invalid_argument("unknown process model '" + name + "'");
}

Sample simulate_egarch(const EgarchParams& params, const Sample& innovations, const SimConfig& sim) {
    const std::size_t p = params.alpha.size();
    const std::size_t q = params.beta.size();
    if (p < 1 || q < 1) {
        throw std::invalid_argument("EGARCH needs p >= 1 and q >= 1");
    }
    const double beta_sum = params.beta_sum();
    if (!(std::abs(beta_sum) < 1.0)) {
        throw StationarityError("EGARCH needs |sum beta| < 1, got " + std::to_string(beta_sum));
    }
    const std::size_t lead = std::max(p, q);
    const std::size_t total = sim.n + sim.burn_in + lead;
    if (innovations.size() < total) {
        throw InsufficientData("EGARCH simulation needs " + std::to_string(total) + " innovations, got " +
                               std::to_string(innovations.size()));
    }
    const auto z = innovations.values();
    const auto f = [&](double zt) { return params.theta * zt + params.lambda * (std::abs(zt) - params.mean_abs_z); };

    std::vector<double> log_var(total);
    const double start = params.alpha0 / (1.0 - beta_sum);
    for (std::size_t t = 0; t < lead; ++t) {
        log_var[t] = start;
    }
    for (std::size_t t = lead; t < total; ++t) {
        double acc = params.alpha0;
        for (std::size_t k = 0; k < p; ++k) {
            if (params.alpha[k] != 0.0) {
                acc += params.alpha[k] * f(z[t - k - 1]);
            }
        }
        for (std::size_t j = 0; j < q; ++j) {
            if (params.beta[j] != 0.0) {
                acc += params.beta[j] * log_var[t - j - 1];
            }
        }
        log_var[t] = acc;
    }

    std::vector<double> x(sim.n);
    const std::size_t first = lead + sim.burn_in;
    for (std::size_t i = 0; i < sim.n; ++i) {
        const std::size_t t = first + i;
        x[i] = std::exp(0.5 * log_var[t]) * z[t];
    }
    return Sample(std::move(x));
}

Sample simulate_garch11(const Garch11Params& params, const Sample& innovations, const SimConfig& sim) {
    if (!(params.alpha0 > 0.0 && params.alpha1 >= 0.0 && params.beta1 >= 0.0)) {
        throw std::invalid_argument("GARCH(1,1) needs alpha0 > 0, alpha1 >= 0, beta1 >= 0");
    }
    if (!(params.alpha1 + params.beta1 < 1.0)) {
        throw StationarityError("GARCH(1,1) needs alpha1 + beta1 < 1");
    }
    const std::size_t total = sim.n + sim.burn_in;
    if (innovations.size() < total) {
        throw InsufficientData("GARCH simulation needs " + std::to_string(total) + " innovations, got " +
                               std::to_string(innovations.size()));
    }
    const auto z = innovations.values();
    std::vector<double> x(sim.n);
    double var = params.alpha0 / (1.0 - params.alpha1 - params.beta1);
    double prev_x = 0.0;
    for (std::size_t t = 0; t < total; ++t) {
        if (t > 0) {
            double next = params.alpha0;
            if (params.alpha1 != 0.0) {
                next += params.alpha1 * prev_x * prev_x;
            }
            if (params.beta1 != 0.0) {
                next += params.beta1 * var;
            }
            var = next;
        }
        prev_x = std::sqrt(var) * z[t];
        if (t >= sim.burn_in) {
            x[t - sim.burn_in] = prev_x;
        }
    }
    return Sample(std::move(x));
}

Sample simulate_path(const SimConfig& sim) {
    const ProcessSpec& model = sim.model;
    switch (model.kind) {
    case ProcessSpec::Kind::constant:
        return Sample(std::vector<double>(sim.n, model.constant_value));
    case ProcessSpec::Kind::iid_gaussian:
    case ProcessSpec::Kind::ar1: {
        InnovationModel inn = model.innovations;
        inn.kind = model.kind == ProcessSpec::Kind::ar1 ? InnovationModel::Kind::ar1 : InnovationModel::Kind::iid_gaussian;
        const Sample full = simulate_innovations(inn, sim.n + sim.burn_in, sim.seed);
        const auto v = full.values();
        return Sample(std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(sim.burn_in), v.end()));
    }
    case ProcessSpec::Kind::garch11:
        return simulate_garch11(model.garch, simulate_innovations(model.innovations, sim.n + sim.burn_in, sim.seed),
                                sim);
    case ProcessSpec::Kind::egarch: {
        const std::size_t lead = std::max(model.egarch.alpha.size(), model.egarch.beta.size());
        return simulate_egarch(model.egarch,
                               simulate_innovations(model.innovations, sim.n + sim.burn_in + lead, sim.seed), sim);
    }
    }
    throw std::invalid_argument("unsupported process model");
}

EgarchDiagnostics check_egarch_conditions(const EgarchParams& params, const InnovationModel& model) {
    EgarchDiagnostics d;
    d.beta_sum = params.beta_sum();
    d.stationary = std::abs(d.beta_sum) < 1.0;
    if (d.stationary) {
        d.stationary_log_variance_mean = params.alpha0 / (1.0 - d.beta_sum);
        d.notes.push_back("|sum beta| = " + std::to_string(std::abs(d.beta_sum)) + " < 1: log-variance recursion is stable");
    } else {
        d.stationary_log_variance_mean = std::numeric_limits<double>::quiet_NaN();
        d.notes.push_back("|sum beta| = " + std::to_string(std::abs(d.beta_sum)) +
                          " >= 1: log-variance recursion is not stable; NED result does not apply");
    }
    // Both supported innovation kinds have Gaussian marginals: unbounded support, E|Z| = sqrt(2/pi) < 1.
    d.innovations_bounded = false;
    d.moment_condition = mean_abs_innovation(model) <= 1.0;
    d.notes.push_back(
        "Gaussian innovations violate sup_t |Z_t| < infinity; only the moment surrogate E|Z_t| <= 1 holds "
        "(E|Z_t| = sqrt(2/pi))");
    return d;
}

void write_path_csv(const Sample& path, std::ostream& out) {
    out << "x\n";
    char buf[32];
    for (double v : path.values()) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << '\n';
    }
}

}  // namespace glstat

#include "glstat/cli.hpp"

#include "glstat/config_io.hpp"
#include "glstat/errors.hpp"
#include "glstat/glstat.hpp"
#include "glstat/lrv.hpp"
#include "glstat/mc.hpp"
#include "glstat/processes.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace glstat {

namespace {

/// Raised for bad flag values that CLI11 cannot see on its own.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

Sample read_sample(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read input '" + path + "'");
    }
    return Sample(read_column_csv(in));
}

struct EstimatorFlags {
    std::string name;
    double alpha = 0.5;
    bool alpha_set = false;
    std::size_t m = 3;
    double c_alpha = 1.0;
    std::string spec_path;
};

EstimatorConfig resolve_estimator(const EstimatorFlags& flags) {
    const auto& catalog = estimator_catalog();
    const bool known = std::any_of(catalog.begin(), catalog.end(),
                                   [&](const EstimatorInfo& info) { return info.name == flags.name; });
    if (!known) {
        throw UsageError("unknown estimator '" + flags.name + "'");
    }
    EstimatorConfig e;
    e.name = flags.name;
    e.label = flags.name;
    e.m = flags.m;
    e.alpha = flags.alpha_set ? flags.alpha : (flags.name == "c" ? 0.25 : 0.5);
    e.c_alpha = flags.c_alpha;
    if (e.name == "gl") {
        if (flags.spec_path.empty()) {
            throw UsageError("estimator 'gl' needs --spec <json>");
        }
        e.gl = gl_spec_from_json(read_json_file(flags.spec_path));
    } else if (!flags.spec_path.empty()) {
        throw UsageError("--spec only applies to --estimator gl");
    }
    return e;
}

double point_estimate(const EstimatorConfig& e, const Sample& sample) {
    if (e.name == "gini") {
        return estimator_gini(sample);
    }
    if (e.name == "gini_os") {
        return gl_statistic(sample, gini_order_statistic_gl_spec(sample.size()));
    }
    if (e.name == "q") {
        return estimator_q(sample, e.m, e.alpha);
    }
    if (e.name == "c") {
        return estimator_c(sample, e.alpha, e.c_alpha);
    }
    if (e.name == "lms") {
        return estimator_lms(sample);
    }
    return gl_statistic(sample, *e.gl);
}

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& flags, bool required) {
    auto* opt = cmd->add_option("--estimator", flags.name, "gini, gini_os, q, c, lms or gl");
    if (required) {
        opt->required();
    }
    cmd->add_option_function<double>(
        "--alpha", [&flags](double a) { flags.alpha = a; flags.alpha_set = true; },
        "quantile level for q, trimming fraction for c");
    cmd->add_option("--m", flags.m, "subset size for q")->check(CLI::Range(2, 64));
    cmd->add_option("--c-alpha", flags.c_alpha, "scale constant for c");
    cmd->add_option("--spec", flags.spec_path, "GL form as a JSON file, for --estimator gl");
}

struct LrvFlags {
    std::string kernel_weight = "bartlett";
    std::string bandwidth = "auto";
    double delta_constant = 0.5;
    std::string normalization = "combinatorial";
};

void add_lrv_flags(CLI::App* cmd, LrvFlags& flags) {
    cmd->add_option("--kernel-weight", flags.kernel_weight, "lag weight")->check(CLI::IsMember({"bartlett"}));
    cmd->add_option("--bandwidth", flags.bandwidth, "auto or a positive number");
    cmd->add_option("--delta-constant", flags.delta_constant, "c in the density halfwidth c * IQR * n^(-1/5)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--normalization", flags.normalization, "projection normalization")
        ->check(CLI::IsMember({"combinatorial", "paper_literal"}));
}

LrvConfig resolve_lrv(const LrvFlags& flags) {
    LrvConfig config;
    if (flags.bandwidth != "auto") {
        double b = 0.0;
        const auto* first = flags.bandwidth.data();
        const auto* last = first + flags.bandwidth.size();
        const auto [ptr, ec] = std::from_chars(first, last, b);
        if (ec != std::errc() || ptr != last || !(b > 0.0)) {
            throw UsageError("--bandwidth must be 'auto' or a positive number");
        }
        config.bandwidth = BandwidthPolicy::fixed(b);
    }
    config.density_halfwidth_constant = flags.delta_constant;
    config.normalization = parse_normalization(flags.normalization);
    return config;
}

void echo_lrv(std::ostream& err, const LrvConfig& config, std::size_t n) {
    err << "# lag_weight=" << config.weight.name() << '\n';
    err << "# bandwidth=" << format_shortest(config.bandwidth.bandwidth(n))
        << (config.bandwidth.kind == BandwidthPolicy::Kind::automatic ? " (auto: floor(n^(1/3)))" : "") << '\n';
    err << "# density_halfwidth_constant=" << format_shortest(config.density_halfwidth_constant) << '\n';
    err << "# normalization=" << to_string(config.normalization) << '\n';
}

void echo_estimator(std::ostream& err, const EstimatorConfig& e, std::size_t n) {
    err << "# estimator=" << e.name << '\n';
    err << "# n=" << n << '\n';
    if (e.name == "q") {
        err << "# m=" << e.m << "\n# alpha=" << format_shortest(e.alpha) << '\n';
    } else if (e.name == "c") {
        err << "# alpha=" << format_shortest(e.alpha) << "\n# c_alpha=" << format_shortest(e.c_alpha) << '\n';
    } else if (e.name == "lms") {
        err << "# constant=" << format_shortest(kLmsConstant) << '\n';
    }
    err << "# convention=" << describe_estimator(e.name).index_convention << '\n';
}

ProcessSpec process_from_config_file(const std::string& path) {
    const Json j = read_json_file(path);
    if (j.is_object() && j.contains("process")) {
        return process_from_json(j.at("process"));
    }
    return process_from_json(j);
}

unsigned threads_from_env() {
    const char* raw = std::getenv("GLSTAT_THREADS");
    if (raw == nullptr || *raw == '\0') {
        return 0;
    }
    unsigned value = 0;
    const std::string s(raw);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw UsageError("GLSTAT_THREADS must be a non-negative integer");
    }
    return value;
}

}  // namespace

std::string format_shortest(double v) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, result.ptr);
}

std::vector<double> read_column_csv(std::istream& in) {
    std::vector<double> values;
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string cell = trim(line);
        if (cell.empty()) {
            continue;
        }
        if (first && cell == "x") {
            first = false;
            continue;
        }
        first = false;
        double v = 0.0;
        const char* begin = cell.data();
        if (*begin == '+') {
            ++begin;
        }
        const auto [ptr, ec] = std::from_chars(begin, cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
        }
        values.push_back(v);
    }
    return values;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"GL-statistics for U-statistics and U-quantiles of time series", "glstat"};
    app.require_subcommand(1, 1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "echo every resolved default on stderr");

    EstimatorFlags est_flags;
    std::string input;
    auto* estimate = app.add_subcommand("estimate", "point estimate of a catalog estimator");
    add_estimator_flags(estimate, est_flags, true);
    estimate->add_option("--input", input, "single-column CSV")->required();

    EstimatorFlags lrv_est_flags;
    std::string lrv_kernel;
    std::size_t lrv_kernel_m = 3;
    std::string lrv_input;
    LrvFlags lrv_flags;
    auto* lrv = app.add_subcommand("lrv", "long-run variance of a U-statistic or GL-statistic");
    auto* lrv_est_opt = lrv->add_option("--estimator", lrv_est_flags.name, "GL variance for a catalog estimator");
    lrv->add_option_function<double>(
        "--alpha", [&](double a) { lrv_est_flags.alpha = a; lrv_est_flags.alpha_set = true; }, "estimator alpha");
    lrv->add_option("--c-alpha", lrv_est_flags.c_alpha, "scale constant for c");
    lrv->add_option("--spec", lrv_est_flags.spec_path, "GL form as a JSON file, for --estimator gl");
    auto* lrv_kernel_opt =
        lrv->add_option("--kernel", lrv_kernel, "U-statistic variance for a kernel: gini, identity, min_pairwise, range")
            ->check(CLI::IsMember({"gini", "gini_abs_diff", "identity", "min_pairwise", "range"}));
    lrv->add_option("--m", lrv_kernel_m, "kernel dimension for min_pairwise, range and q")->check(CLI::Range(2, 64));
    lrv_est_opt->excludes(lrv_kernel_opt);
    lrv->add_option("--input", lrv_input, "single-column CSV")->required();
    add_lrv_flags(lrv, lrv_flags);

    EstimatorFlags ci_flags;
    std::string ci_input;
    double ci_level = 0.95;
    LrvFlags ci_lrv_flags;
    auto* ci = app.add_subcommand("ci", "confidence interval from the GL long-run variance");
    add_estimator_flags(ci, ci_flags, true);
    ci->add_option("--input", ci_input, "single-column CSV")->required();
    ci->add_option("--level", ci_level, "coverage level")->check(CLI::Range(0.0, 1.0));
    add_lrv_flags(ci, ci_lrv_flags);

    std::string sim_model;
    std::string sim_config;
    std::size_t sim_n = 0;
    std::uint64_t sim_seed = 0;
    std::optional<std::size_t> sim_burn;
    int sim_scenario = 1;
    std::string sim_out;
    auto* simulate = app.add_subcommand("simulate", "simulate one path");
    simulate->add_option("--model", sim_model, "iid, ar1, garch11, egarch or constant");
    auto* config_opt = simulate->add_option("--config", sim_config, "JSON process description");
    simulate->add_option("--n", sim_n, "path length")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim_seed, "seed");
    simulate->add_option("--burn-in", sim_burn, "discarded leading observations (default 500)");
    auto* scenario_opt =
        simulate->add_option("--scenario", sim_scenario, "EGARCH scenario 1 or 2")->check(CLI::IsMember({1, 2}));
    scenario_opt->excludes(config_opt);
    simulate->add_option("--out", sim_out, "CSV destination (stdout when absent)");

    std::string exp_config;
    std::string exp_out;
    std::optional<unsigned> exp_threads;
    auto* experiment = app.add_subcommand("experiment", "Monte Carlo experiment");
    experiment->add_option("--config", exp_config, "JSON experiment config")->required();
    experiment->add_option("--out", exp_out, "report directory (defaults to output_dir)");
    experiment->add_option("--threads", exp_threads, "worker threads, 0 = auto (overrides GLSTAT_THREADS)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        err << "run with --help for usage\n";
        return 2;
    }

    try {
        if (estimate->parsed()) {
            const EstimatorConfig e = resolve_estimator(est_flags);
            const Sample sample = read_sample(input);
            if (verbose) {
                echo_estimator(err, e, sample.size());
            }
            out << format_shortest(point_estimate(e, sample)) << '\n';
            return 0;
        }

        if (lrv->parsed()) {
            if (lrv_est_flags.name.empty() && lrv_kernel.empty()) {
                throw UsageError("lrv needs --estimator or --kernel");
            }
            const LrvConfig config = resolve_lrv(lrv_flags);
            if (!lrv_kernel.empty()) {
                KernelParams params;
                if (lrv_kernel == "min_pairwise" || lrv_kernel == "range") {
                    params["m"] = static_cast<double>(lrv_kernel_m);
                }
                const KernelSpec kernel =
                    builtin_kernel(lrv_kernel == "gini" ? std::string("gini_abs_diff") : lrv_kernel, params);
                const Sample sample = read_sample(lrv_input);
                if (verbose) {
                    err << "# kernel=" << kernel.name() << "\n# m=" << kernel.m() << "\n# n=" << sample.size()
                        << '\n';
                    echo_lrv(err, config, sample.size());
                }
                const double sigma2 = lrv_ustat(sample, kernel, config);
                out << "sigma2=" << format_shortest(sigma2) << '\n';
                out << "bandwidth=" << format_shortest(config.bandwidth.bandwidth(sample.size())) << '\n';
                out << "m=" << kernel.m() << '\n';
                out << "scaled_sigma2=" << format_shortest(static_cast<double>(kernel.m() * kernel.m()) * sigma2)
                    << '\n';
                return 0;
            }
            lrv_est_flags.m = lrv_kernel_m;
            const EstimatorConfig e = resolve_estimator(lrv_est_flags);
            const Sample sample = read_sample(lrv_input);
            const auto spec = gl_spec_for_estimator(e, sample.size());
            if (verbose) {
                echo_estimator(err, e, sample.size());
                echo_lrv(err, config, sample.size());
            }
            const GLVarianceReport r = lrv_gl(sample, *spec, config);
            out << "sigma2_gl=" << format_shortest(r.sigma2_gl) << '\n';
            out << "sigma2_raw=" << format_shortest(r.sigma2_raw) << '\n';
            out << "clamped=" << (r.clamped ? "true" : "false") << '\n';
            out << "estimate=" << format_shortest(r.estimate) << '\n';
            out << "m=" << r.m << '\n';
            out << "scaled_sigma2=" << format_shortest(r.scaled_sigma2) << '\n';
            out << "bandwidth=" << format_shortest(r.bandwidth_used) << '\n';
            for (const auto& d : r.density_estimates) {
                out << "density p=" << format_shortest(d.level) << " quantile=" << format_shortest(d.quantile)
                    << " halfwidth=" << format_shortest(d.halfwidth) << " value=" << format_shortest(d.density)
                    << '\n';
            }
            return 0;
        }

        if (ci->parsed()) {
            if (!(ci_level > 0.0 && ci_level < 1.0)) {
                throw UsageError("--level must lie strictly between 0 and 1");
            }
            const EstimatorConfig e = resolve_estimator(ci_flags);
            const LrvConfig config = resolve_lrv(ci_lrv_flags);
            const Sample sample = read_sample(ci_input);
            const auto spec = gl_spec_for_estimator(e, sample.size());
            if (verbose) {
                echo_estimator(err, e, sample.size());
                echo_lrv(err, config, sample.size());
                err << "# level=" << format_shortest(ci_level) << '\n';
            }
            const ConfidenceInterval interval = gl_confidence_interval(sample, *spec, config, ci_level);
            out << "estimate=" << format_shortest(interval.variance.estimate) << '\n';
            out << "lo=" << format_shortest(interval.lo) << '\n';
            out << "hi=" << format_shortest(interval.hi) << '\n';
            out << "level=" << format_shortest(interval.level) << '\n';
            out << "z=" << format_shortest(interval.z) << '\n';
            out << "sigma2_gl=" << format_shortest(interval.variance.sigma2_gl) << '\n';
            return 0;
        }

        if (simulate->parsed()) {
            SimConfig sim;
            sim.n = sim_n;
            sim.seed = sim_seed;
            if (!sim_config.empty()) {
                sim.model = process_from_config_file(sim_config);
                if (!sim_model.empty() && parse_process_kind(sim_model) != sim.model.kind) {
                    throw UsageError("--model disagrees with the model in --config");
                }
            } else {
                const std::string model = sim_model.empty() ? "egarch" : sim_model;
                try {
                    sim.model.kind = parse_process_kind(model);
                } catch (const std::invalid_argument& ex) {
                    throw UsageError(ex.what());
                }
                if (sim.model.kind == ProcessSpec::Kind::egarch) {
                    sim.model.egarch = sim_scenario == 2 ? EgarchParams::scenario2() : EgarchParams::scenario1();
                    sim.model.innovations = InnovationModel::ar1(0.8);
                } else if (sim.model.kind == ProcessSpec::Kind::ar1) {
                    throw UsageError("model ar1 needs --config with its rho");
                }
            }
            if (sim_burn) {
                sim.burn_in = *sim_burn;
            }
            if (verbose) {
                err << "# model=" << to_string(sim.model.kind) << "\n# n=" << sim.n << "\n# seed=" << sim.seed
                    << "\n# burn_in=" << sim.burn_in << '\n';
                err << "# process=" << to_json(sim.model).dump() << '\n';
            }
            const Sample path = simulate_path(sim);
            if (sim_out.empty()) {
                write_path_csv(path, out);
            } else {
                std::ostringstream buffer;
                write_path_csv(path, buffer);
                std::ofstream file(sim_out, std::ios::binary | std::ios::trunc);
                if (!file) {
                    throw std::runtime_error("cannot write '" + sim_out + "'");
                }
                file << buffer.str();
                if (!file) {
                    throw std::runtime_error("failed writing '" + sim_out + "'");
                }
            }
            return 0;
        }

        if (experiment->parsed()) {
            ExperimentConfig config = experiment_from_json(read_json_file(exp_config));
            const std::string dir = exp_out.empty() ? config.output_dir : exp_out;
            if (dir.empty()) {
                throw UsageError("experiment needs --out or output_dir in the config");
            }
            RunOptions options;
            options.threads = exp_threads ? *exp_threads : threads_from_env();
            if (verbose) {
                err << "# config=" << to_json(config).dump() << '\n';
                err << "# threads=" << options.threads << (options.threads == 0 ? " (auto)" : "") << '\n';
            }
            const ExperimentReport report = run_experiment(config, options);
            const Manifest manifest = write_report(report, dir);
            for (const auto& cell : report.cells) {
                out << cell.estimator << " n=" << cell.n << " mode=" << cell.mode;
                if (cell.summary) {
                    out << " qq_correlation=" << format_shortest(cell.summary->qq_correlation);
                }
                if (cell.coverage) {
                    out << " coverage=" << format_shortest(*cell.coverage);
                }
                if (!cell.error.empty()) {
                    out << " error=\"" << cell.error << '"';
                }
                out << '\n';
            }
            out << "wrote " << manifest.entries.size() << " files to " << dir << '\n';
            return 0;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace glstat

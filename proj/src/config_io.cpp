#include "glstat/config_io.hpp"

#include <fstream>
#include <stdexcept>
#include <utility>

namespace glstat {

namespace {

template <class T>
T value_or(const Json& j, const char* key, T fallback) {
    if (!j.is_object()) {
        throw std::invalid_argument(std::string("expected a JSON object when reading '") + key + "'");
    }
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return fallback;
    }
    try {
        return it->template get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
    }
}

template <class T>
T required(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw std::invalid_argument(std::string("missing required config key '") + key + "'");
    }
    try {
        return j.at(key).template get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
    }
}

std::pair<double, double> support_of(const WeightFunctionJ& w) {
    const auto& piece = w.pieces().front();
    return {piece.lo, piece.hi};
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const char* where) {
    if (!j.is_object()) {
        throw std::invalid_argument(std::string(where) + ": expected a JSON object");
    }
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (item.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw std::invalid_argument(std::string(where) + ": unknown key '" + item.key() + "'");
        }
    }
}

}  // namespace

std::string to_string(Normalization mode) {
    return mode == Normalization::combinatorial ? "combinatorial" : "paper_literal";
}

Normalization parse_normalization(const std::string& name) {
    if (name == "combinatorial") {
        return Normalization::combinatorial;
    }
    if (name == "paper_literal") {
        return Normalization::paper_literal;
    }
    throw std::invalid_argument("unknown normalization '" + name + "'");
}

std::string to_string(QuantileConvention convention) {
    return convention == QuantileConvention::ceil ? "ceil" : "floor_bracket";
}

QuantileConvention parse_quantile_convention(const std::string& name) {
    if (name == "ceil") {
        return QuantileConvention::ceil;
    }
    if (name == "floor_bracket") {
        return QuantileConvention::floor_bracket;
    }
    throw std::invalid_argument("unknown quantile convention '" + name + "'");
}

std::string to_string(QMode mode) {
    switch (mode) {
    case QMode::automatic:
        return "auto";
    case QMode::exact:
        return "exact";
    case QMode::subsampled:
        return "subsampled";
    }
    return "auto";
}

QMode parse_q_mode(const std::string& name) {
    if (name == "auto") {
        return QMode::automatic;
    }
    if (name == "exact") {
        return QMode::exact;
    }
    if (name == "subsampled") {
        return QMode::subsampled;
    }
    throw std::invalid_argument("unknown q_mode '" + name + "'");
}

Json to_json(const KernelSpec& kernel) {
    if (kernel.kind() == KernelKind::custom) {
        throw std::invalid_argument("custom kernels cannot be serialized");
    }
    Json j;
    j["name"] = kernel.name();
    if (kernel.kind() == KernelKind::min_pairwise || kernel.kind() == KernelKind::range) {
        j["m"] = kernel.m();
    }
    return j;
}

KernelSpec kernel_from_json(const Json& j) {
    if (j.is_string()) {
        return builtin_kernel(j.get<std::string>());
    }
    reject_unknown(j, {"name", "m"}, "kernel");
    KernelParams params;
    if (j.contains("m")) {
        params["m"] = required<double>(j, "m");
    }
    return builtin_kernel(required<std::string>(j, "name"), params);
}

Json to_json(const WeightFunctionJ& weight) {
    Json j;
    switch (weight.kind()) {
    case WeightFunctionJ::Kind::zero:
        j["kind"] = "zero";
        break;
    case WeightFunctionJ::Kind::constant: {
        const auto [lo, hi] = support_of(weight);
        j["kind"] = "constant";
        j["value"] = weight.pieces().front().coefficients.at(0);
        j["support"] = {lo, hi};
        break;
    }
    case WeightFunctionJ::Kind::linear: {
        const auto [lo, hi] = support_of(weight);
        const auto& c = weight.pieces().front().coefficients;
        j["kind"] = "linear";
        j["intercept"] = c.at(0);
        j["slope"] = c.at(1);
        j["support"] = {lo, hi};
        break;
    }
    case WeightFunctionJ::Kind::piecewise_polynomial: {
        j["kind"] = "piecewise_polynomial";
        Json pieces = Json::array();
        for (const auto& p : weight.pieces()) {
            pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"coefficients", p.coefficients}});
        }
        j["pieces"] = pieces;
        break;
    }
    }
    return j;
}

WeightFunctionJ weight_from_json(const Json& j) {
    const auto kind = required<std::string>(j, "kind");
    const auto support = value_or<std::vector<double>>(j, "support", {0.0, 1.0});
    if (support.size() != 2) {
        throw std::invalid_argument("J support must be [lo, hi]");
    }
    if (kind == "zero") {
        reject_unknown(j, {"kind"}, "J");
        return WeightFunctionJ::zero();
    }
    if (kind == "constant") {
        reject_unknown(j, {"kind", "value", "support"}, "J");
        return WeightFunctionJ::constant(required<double>(j, "value"), support[0], support[1]);
    }
    if (kind == "linear") {
        reject_unknown(j, {"kind", "intercept", "slope", "support"}, "J");
        return WeightFunctionJ::linear(required<double>(j, "intercept"), required<double>(j, "slope"), support[0],
                                       support[1]);
    }
    if (kind == "piecewise_polynomial") {
        reject_unknown(j, {"kind", "pieces"}, "J");
        std::vector<PolynomialPiece> pieces;
        for (const auto& p : j.at("pieces")) {
            reject_unknown(p, {"lo", "hi", "coefficients"}, "J piece");
            pieces.push_back({required<double>(p, "lo"), required<double>(p, "hi"),
                              required<std::vector<double>>(p, "coefficients")});
        }
        return WeightFunctionJ::piecewise(std::move(pieces));
    }
    throw std::invalid_argument("unknown J kind '" + kind + "'");
}

Json to_json(const GLSpec& spec) {
    Json j;
    j["kernel"] = to_json(spec.kernel);
    j["J"] = to_json(spec.weight);
    Json discrete = Json::array();
    for (const auto& term : spec.discrete) {
        discrete.push_back({{"a", term.weight}, {"p", term.level}});
    }
    j["discrete"] = discrete;
    j["quantile_convention"] = to_string(spec.convention);
    return j;
}

GLSpec gl_spec_from_json(const Json& j) {
    reject_unknown(j, {"kernel", "J", "discrete", "quantile_convention"}, "GL spec");
    if (!j.contains("kernel")) {
        throw std::invalid_argument("GL spec needs a kernel");
    }
    GLSpec spec{.kernel = kernel_from_json(j.at("kernel")),
                .weight = WeightFunctionJ::zero(),
                .discrete = {},
                .convention = QuantileConvention::ceil};
    if (j.contains("J")) {
        spec.weight = weight_from_json(j.at("J"));
    }
    if (j.contains("discrete")) {
        for (const auto& term : j.at("discrete")) {
            reject_unknown(term, {"a", "p"}, "GL discrete term");
            spec.discrete.push_back({required<double>(term, "a"), required<double>(term, "p")});
        }
    }
    spec.convention = parse_quantile_convention(value_or<std::string>(j, "quantile_convention", "ceil"));
    spec.validate();
    return spec;
}

Json to_json(const LrvConfig& config) {
    if (config.weight.kind() != WeightFunction::Kind::bartlett) {
        throw std::invalid_argument("only the bartlett lag weight can be serialized");
    }
    Json j;
    j["weight"] = "bartlett";
    switch (config.bandwidth.kind) {
    case BandwidthPolicy::Kind::automatic:
        j["bandwidth"] = "auto";
        break;
    case BandwidthPolicy::Kind::fixed:
        j["bandwidth"] = config.bandwidth.value;
        break;
    case BandwidthPolicy::Kind::power_law:
        j["bandwidth"] = {{"coefficient", config.bandwidth.coefficient}, {"exponent", config.bandwidth.exponent}};
        break;
    }
    j["density_halfwidth_constant"] = config.density_halfwidth_constant;
    j["normalization"] = to_string(config.normalization);
    j["enumeration_cap"] = config.enumeration_cap;
    return j;
}

LrvConfig lrv_config_from_json(const Json& j) {
    reject_unknown(j, {"weight", "bandwidth", "density_halfwidth_constant", "normalization", "enumeration_cap"},
                   "lrv");
    LrvConfig config;
    const auto weight = value_or<std::string>(j, "weight", "bartlett");
    if (weight != "bartlett") {
        throw std::invalid_argument("unknown lag weight '" + weight + "'");
    }
    if (j.contains("bandwidth")) {
        const auto& b = j.at("bandwidth");
        if (b.is_string()) {
            if (b.get<std::string>() != "auto") {
                throw std::invalid_argument("bandwidth must be \"auto\", a number, or {coefficient, exponent}");
            }
        } else if (b.is_number()) {
            config.bandwidth = BandwidthPolicy::fixed(b.get<double>());
        } else if (b.is_object()) {
            reject_unknown(b, {"coefficient", "exponent"}, "bandwidth");
            config.bandwidth = BandwidthPolicy::power_law(required<double>(b, "coefficient"),
                                                          required<double>(b, "exponent"));
        } else {
            throw std::invalid_argument("bandwidth must be \"auto\", a number, or {coefficient, exponent}");
        }
    }
    config.density_halfwidth_constant = value_or<double>(j, "density_halfwidth_constant", 0.5);
    if (!(config.density_halfwidth_constant > 0.0)) {
        throw std::invalid_argument("density_halfwidth_constant must be positive");
    }
    config.normalization = parse_normalization(value_or<std::string>(j, "normalization", "combinatorial"));
    config.enumeration_cap = value_or<std::uint64_t>(j, "enumeration_cap", kDefaultEnumerationCap);
    return config;
}

namespace {

Json to_json(const InnovationModel& model) {
    Json j;
    if (model.kind == InnovationModel::Kind::ar1) {
        j["kind"] = "ar1";
        j["rho"] = model.rho;
    } else {
        j["kind"] = "iid_gaussian";
    }
    return j;
}

InnovationModel innovations_from_json(const Json& j) {
    reject_unknown(j, {"kind", "rho"}, "innovations");
    const auto kind = value_or<std::string>(j, "kind", "iid_gaussian");
    if (kind == "ar1") {
        return InnovationModel::ar1(required<double>(j, "rho"));
    }
    if (kind == "iid_gaussian" || kind == "iid") {
        return InnovationModel::iid_gaussian();
    }
    throw std::invalid_argument("unknown innovation kind '" + kind + "'");
}

}  // namespace

Json to_json(const ProcessSpec& process) {
    Json j;
    j["model"] = to_string(process.kind);
    switch (process.kind) {
    case ProcessSpec::Kind::iid_gaussian:
        break;
    case ProcessSpec::Kind::ar1:
        j["rho"] = process.innovations.rho;
        break;
    case ProcessSpec::Kind::garch11:
        j["innovations"] = to_json(process.innovations);
        j["garch11"] = {{"alpha0", process.garch.alpha0},
                        {"alpha1", process.garch.alpha1},
                        {"beta1", process.garch.beta1}};
        break;
    case ProcessSpec::Kind::egarch:
        j["innovations"] = to_json(process.innovations);
        j["egarch"] = {{"alpha0", process.egarch.alpha0},   {"alpha", process.egarch.alpha},
                       {"beta", process.egarch.beta},       {"theta", process.egarch.theta},
                       {"lambda", process.egarch.lambda},   {"mean_abs_z", process.egarch.mean_abs_z}};
        break;
    case ProcessSpec::Kind::constant:
        j["constant_value"] = process.constant_value;
        break;
    }
    return j;
}

ProcessSpec process_from_json(const Json& j) {
    reject_unknown(j, {"model", "rho", "innovations", "garch11", "egarch", "constant_value"}, "process");
    ProcessSpec p;
    p.kind = parse_process_kind(required<std::string>(j, "model"));
    switch (p.kind) {
    case ProcessSpec::Kind::iid_gaussian:
        break;
    case ProcessSpec::Kind::ar1:
        p.innovations = InnovationModel::ar1(required<double>(j, "rho"));
        break;
    case ProcessSpec::Kind::garch11: {
        if (j.contains("innovations")) {
            p.innovations = innovations_from_json(j.at("innovations"));
        }
        const Json g = j.value("garch11", Json::object());
        reject_unknown(g, {"alpha0", "alpha1", "beta1"}, "garch11");
        p.garch.alpha0 = value_or<double>(g, "alpha0", p.garch.alpha0);
        p.garch.alpha1 = value_or<double>(g, "alpha1", p.garch.alpha1);
        p.garch.beta1 = value_or<double>(g, "beta1", p.garch.beta1);
        break;
    }
    case ProcessSpec::Kind::egarch: {
        p.innovations = j.contains("innovations") ? innovations_from_json(j.at("innovations"))
                                                  : InnovationModel::ar1(0.8);
        const Json e = j.value("egarch", Json::object());
        reject_unknown(e, {"alpha0", "alpha", "beta", "theta", "lambda", "mean_abs_z"}, "egarch");
        p.egarch.alpha0 = value_or<double>(e, "alpha0", p.egarch.alpha0);
        p.egarch.alpha = value_or<std::vector<double>>(e, "alpha", p.egarch.alpha);
        p.egarch.beta = value_or<std::vector<double>>(e, "beta", p.egarch.beta);
        p.egarch.theta = value_or<double>(e, "theta", p.egarch.theta);
        p.egarch.lambda = value_or<double>(e, "lambda", p.egarch.lambda);
        p.egarch.mean_abs_z = value_or<double>(e, "mean_abs_z", mean_abs_innovation(p.innovations));
        break;
    }
    case ProcessSpec::Kind::constant:
        p.constant_value = value_or<double>(j, "constant_value", 0.0);
        break;
    }
    return p;
}

Json to_json(const EstimatorConfig& e) {
    Json j;
    j["name"] = e.name;
    j["label"] = e.label.empty() ? e.name : e.label;
    if (e.name == "q") {
        j["m"] = e.m;
        j["alpha"] = e.alpha;
    } else if (e.name == "c") {
        j["alpha"] = e.alpha;
        j["c_alpha"] = e.c_alpha;
    } else if (e.name == "gl") {
        j["spec"] = to_json(e.gl.value());
    }
    return j;
}

EstimatorConfig estimator_from_json(const Json& j) {
    EstimatorConfig e;
    if (j.is_string()) {
        e.name = j.get<std::string>();
    } else {
        reject_unknown(j, {"name", "label", "m", "alpha", "c_alpha", "spec"}, "estimator");
        e.name = required<std::string>(j, "name");
        e.label = value_or<std::string>(j, "label", "");
        e.m = value_or<std::size_t>(j, "m", e.m);
        e.alpha = value_or<double>(j, "alpha", e.alpha);
        e.c_alpha = value_or<double>(j, "c_alpha", e.c_alpha);
        if (j.contains("spec")) {
            e.gl = gl_spec_from_json(j.at("spec"));
        }
    }
    (void)describe_estimator(e.name);
    if (e.name == "gl" && !e.gl) {
        throw std::invalid_argument("estimator 'gl' needs a spec");
    }
    if (e.label.empty()) {
        e.label = e.name;
    }
    return e;
}

Json to_json(const ExperimentConfig& config) {
    Json j;
    j["rng"] = config.rng;
    j["seed"] = config.seed;
    j["replications"] = config.replications;
    j["sample_sizes"] = config.sample_sizes;
    j["burn_in"] = config.burn_in;
    j["process"] = to_json(config.process);
    Json estimators = Json::array();
    for (const auto& e : config.estimators) {
        estimators.push_back(to_json(e));
    }
    j["estimators"] = estimators;
    j["q_mode"] = to_string(config.q_mode);
    j["q_subsample_size"] = config.q_subsample_size;
    if (config.lrv) {
        j["lrv"] = to_json(*config.lrv);
        j["ci_level"] = config.ci_level;
    }
    j["output_dir"] = config.output_dir;
    return j;
}

ExperimentConfig experiment_from_json(const Json& j) {
    reject_unknown(j,
                   {"rng", "seed", "replications", "sample_sizes", "burn_in", "process", "estimators", "estimator",
                    "q_mode", "q_subsample_size", "lrv", "ci_level", "output_dir"},
                   "experiment");
    ExperimentConfig c;
    c.rng = value_or<std::string>(j, "rng", std::string(kRngAlgorithm));
    c.seed = value_or<std::uint64_t>(j, "seed", 0);
    c.replications = value_or<std::size_t>(j, "replications", 500);
    c.sample_sizes = required<std::vector<std::size_t>>(j, "sample_sizes");
    c.burn_in = value_or<std::size_t>(j, "burn_in", 500);
    if (j.contains("process")) {
        c.process = process_from_json(j.at("process"));
    }
    if (j.contains("estimators")) {
        for (const auto& e : j.at("estimators")) {
            c.estimators.push_back(estimator_from_json(e));
        }
    }
    if (j.contains("estimator")) {
        c.estimators.push_back(estimator_from_json(j.at("estimator")));
    }
    c.q_mode = parse_q_mode(value_or<std::string>(j, "q_mode", "auto"));
    c.q_subsample_size = value_or<std::uint64_t>(j, "q_subsample_size", 2'000'000);
    if (j.contains("lrv")) {
        c.lrv = lrv_config_from_json(j.at("lrv"));
    }
    c.ci_level = value_or<double>(j, "ci_level", 0.95);
    c.output_dir = value_or<std::string>(j, "output_dir", "");
    c.validate();
    return c;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read '" + path.string() + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

}  // namespace glstat

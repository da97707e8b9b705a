#pragma once

#include "glstat/glstat.hpp"
#include "glstat/lrv.hpp"
#include "glstat/mc.hpp"
#include "glstat/processes.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace glstat {

using Json = nlohmann::ordered_json;

// JSON forms of the library's configuration types. Readers fill defaults for
// absent keys and throw std::invalid_argument on malformed input; writers emit
// every resolved field so that write(read(write(x))) == write(x).

[[nodiscard]] Json to_json(const KernelSpec& kernel);
[[nodiscard]] KernelSpec kernel_from_json(const Json& j);

[[nodiscard]] Json to_json(const WeightFunctionJ& weight);
[[nodiscard]] WeightFunctionJ weight_from_json(const Json& j);

[[nodiscard]] Json to_json(const GLSpec& spec);
[[nodiscard]] GLSpec gl_spec_from_json(const Json& j);

[[nodiscard]] Json to_json(const LrvConfig& config);
[[nodiscard]] LrvConfig lrv_config_from_json(const Json& j);

[[nodiscard]] Json to_json(const ProcessSpec& process);
[[nodiscard]] ProcessSpec process_from_json(const Json& j);

[[nodiscard]] Json to_json(const EstimatorConfig& estimator);
[[nodiscard]] EstimatorConfig estimator_from_json(const Json& j);

[[nodiscard]] Json to_json(const ExperimentConfig& config);
[[nodiscard]] ExperimentConfig experiment_from_json(const Json& j);

[[nodiscard]] std::string to_string(Normalization mode);
[[nodiscard]] Normalization parse_normalization(const std::string& name);
[[nodiscard]] std::string to_string(QuantileConvention convention);
[[nodiscard]] QuantileConvention parse_quantile_convention(const std::string& name);
[[nodiscard]] std::string to_string(QMode mode);
[[nodiscard]] QMode parse_q_mode(const std::string& name);

/// Reads and parses a JSON document. Throws std::runtime_error if unreadable.
[[nodiscard]] Json read_json_file(const std::filesystem::path& path);

}  // namespace glstat

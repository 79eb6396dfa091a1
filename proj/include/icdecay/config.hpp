#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "icdecay/intensity.hpp"
#include "icdecay/model.hpp"

namespace icdecay {

/// Malformed or out-of-domain configuration. Messages start with the line
/// number when one applies.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat
{
    csv,
    jsonl,
};

struct OracleSpec
{
    double spacing = 0.0;
    std::optional<double> span; ///< defaults to the minimum admissible span
};

struct RunConfig
{
    ModelParams model;
    DephasingScenario scenario;
    double theta_step_deg = 0.5;
    /// Evaluation times; the panel times when the config does not list any.
    std::vector<Time> times;
    std::optional<OracleSpec> oracle;
    std::filesystem::path output_dir = ".";
    OutputFormat format = OutputFormat::csv;
    double fringe_half_width_deg = 30.0;
    std::vector<double> scan_beta = {0.0, 0.01, 0.05, 0.2};
    std::vector<double> scan_omega_dot;
};

/// One documented configuration key, for --help.
struct ConfigKey
{
    std::string_view name;
    std::string_view help;
};
const std::vector<ConfigKey>& config_keys();

/// Parses `key = value` lines (`#` starts a comment). Unknown or repeated keys
/// and invalid values are rejected; the model must pass ModelParams::validate.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// One time token: `5T/16`, `0.25T`, `T`, a bare number (fraction of T) or a
/// number with an `s` suffix (seconds).
Time parse_time(std::string_view token, const ModelParams& p);

} // namespace icdecay

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wedgedrag/friction.hpp"
#include "wedgedrag/geometry.hpp"
#include "wedgedrag/particle_oracle.hpp"

namespace wedgedrag {

enum class OutputFormat { Csv, Json };

/// Everything a study needs, as loaded from a flat `dotted.key = value` file plus flags.
///
/// Numeric fields are stored raw; wedge() and gas() build the validated domain types and
/// throw ConfigError naming the key when a value is out of range.
struct StudyConfig {
    double theta = 1.0471975511965976;  // pi/3
    double length = 1.0;
    double rho = 1.0;
    double beta = 1.0;
    QuadratureSpec quadrature;
    McSpec mc;

    std::vector<double> velocities;     // empty: the command's default grid
    std::vector<double> times;          // explicit t grid; overrides t_min/t_max/t_points
    double t_min = 0.0;                 // 0: command default
    double t_max = 0.0;
    long long t_points = -1;            // -1: command default
    std::vector<double> inverse_times;  // stationary-check T grid
    std::vector<double> forces;         // limiting-velocity E values
    double exponent_min = -5.3;
    double exponent_max = -4.7;
    bool synthetic = false;
    double velocity_cap = 64.0;

    std::string output_path;
    OutputFormat format = OutputFormat::Json;
    bool format_set = false;

    WedgeConfig wedge() const;
    GasState gas() const;
    /// Runs every component validation.
    void validate() const;

    /// Flat key/value echo of the effective configuration, in key order.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Keys accepted in config files, in canonical order.
const std::vector<std::string>& known_config_keys();

/// Sets one key. Throws ConfigError for unknown keys, malformed numbers, or angles given
/// in degrees.
void apply_config_value(StudyConfig& cfg, std::string_view key, std::string_view value);

/// Parses `key = value` lines; `#` starts a comment. Throws ConfigError (field "config" for
/// I/O and syntax problems, the key itself otherwise).
StudyConfig parse_config_text(std::string_view text, StudyConfig base = {});
StudyConfig load_config_file(const std::filesystem::path& path, StudyConfig base = {});

/// %.17g, the lossless text form used in every report.
std::string format_number(double x);

}  // namespace wedgedrag

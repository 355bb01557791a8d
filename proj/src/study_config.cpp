#include "wedgedrag/study_config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "wedgedrag/errors.hpp"

namespace wedgedrag {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(std::string(key), "expected a real number, got '" + std::string(text) + "'");
    }
    return value;
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view text) {
    text = trim(text);
    Int value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    text = trim(text);
    if (text.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        out.push_back(parse_real(key, text.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError(std::string(key), "expected true or false, got '" + std::string(text) + "'");
}

double parse_angle(std::string_view key, std::string_view text) {
    const std::string_view t = trim(text);
    for (std::string_view unit : {"deg", "degree", "degrees", "\xC2\xB0"}) {
        if (t.size() > unit.size() && t.substr(t.size() - unit.size()) == unit) {
            throw ConfigError(std::string(key), "angles are accepted in radians only");
        }
    }
    return parse_real(key, t);
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += format_number(xs[i]);
    }
    return out;
}

using Setter = std::function<void(StudyConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"wedge.theta", [](StudyConfig& c, auto k, auto v) { c.theta = parse_angle(k, v); }},
        {"wedge.length", [](StudyConfig& c, auto k, auto v) { c.length = parse_real(k, v); }},
        {"gas.rho", [](StudyConfig& c, auto k, auto v) { c.rho = parse_real(k, v); }},
        {"gas.beta", [](StudyConfig& c, auto k, auto v) { c.beta = parse_real(k, v); }},
        {"quadrature.rel_tol",
         [](StudyConfig& c, auto k, auto v) { c.quadrature.rel_tol = parse_real(k, v); }},
        {"quadrature.abs_tol",
         [](StudyConfig& c, auto k, auto v) { c.quadrature.abs_tol = parse_real(k, v); }},
        {"quadrature.cutoff_sigmas",
         [](StudyConfig& c, auto k, auto v) { c.quadrature.velocity_cutoff_sigmas = parse_real(k, v); }},
        {"quadrature.eta_panels",
         [](StudyConfig& c, auto k, auto v) { c.quadrature.eta_panels = parse_integer<int>(k, v); }},
        {"mc.samples",
         [](StudyConfig& c, auto k, auto v) { c.mc.n_samples = parse_integer<std::size_t>(k, v); }},
        {"mc.seed", [](StudyConfig& c, auto k, auto v) { c.mc.seed = parse_integer<std::uint64_t>(k, v); }},
        {"mc.strata",
         [](StudyConfig& c, auto k, auto v) { c.mc.stratify_eta = parse_integer<std::size_t>(k, v); }},
        {"mc.threads",
         [](StudyConfig& c, auto k, auto v) { c.mc.threads = parse_integer<std::size_t>(k, v); }},
        {"study.velocities", [](StudyConfig& c, auto k, auto v) { c.velocities = parse_list(k, v); }},
        {"study.times", [](StudyConfig& c, auto k, auto v) { c.times = parse_list(k, v); }},
        {"study.t_min", [](StudyConfig& c, auto k, auto v) { c.t_min = parse_real(k, v); }},
        {"study.t_max", [](StudyConfig& c, auto k, auto v) { c.t_max = parse_real(k, v); }},
        {"study.t_points",
         [](StudyConfig& c, auto k, auto v) { c.t_points = parse_integer<long long>(k, v); }},
        {"study.inverse_times",
         [](StudyConfig& c, auto k, auto v) { c.inverse_times = parse_list(k, v); }},
        {"study.forces", [](StudyConfig& c, auto k, auto v) { c.forces = parse_list(k, v); }},
        {"study.exponent_min", [](StudyConfig& c, auto k, auto v) { c.exponent_min = parse_real(k, v); }},
        {"study.exponent_max", [](StudyConfig& c, auto k, auto v) { c.exponent_max = parse_real(k, v); }},
        {"study.synthetic", [](StudyConfig& c, auto k, auto v) { c.synthetic = parse_bool(k, v); }},
        {"study.velocity_cap", [](StudyConfig& c, auto k, auto v) { c.velocity_cap = parse_real(k, v); }},
        {"output.path", [](StudyConfig& c, auto, auto v) { c.output_path = std::string(trim(v)); }},
        {"output.format",
         [](StudyConfig& c, auto k, auto v) {
             const auto f = trim(v);
             if (f == "csv") c.format = OutputFormat::Csv;
             else if (f == "json") c.format = OutputFormat::Json;
             else throw ConfigError(std::string(k), "expected csv or json, got '" + std::string(f) + "'");
             c.format_set = true;
         }},
    };
    return table;
}

}  // namespace

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

WedgeConfig StudyConfig::wedge() const { return WedgeConfig(theta, length); }
GasState StudyConfig::gas() const { return GasState(rho, beta); }

void StudyConfig::validate() const {
    (void)wedge();
    (void)gas();
    quadrature.validate();
    if (mc.n_samples == 0) throw ConfigError("mc.samples", "must be positive");
    if (mc.stratify_eta == 0) throw ConfigError("mc.strata", "must be positive");
    if (!(exponent_min < exponent_max)) {
        throw ConfigError("study.exponent_min", "must be below study.exponent_max");
    }
    if (!(velocity_cap > 0.0)) throw ConfigError("study.velocity_cap", "must be positive");
}

std::vector<std::pair<std::string, std::string>> StudyConfig::echo() const {
    return {
        {"wedge.theta", format_number(theta)},
        {"wedge.length", format_number(length)},
        {"gas.rho", format_number(rho)},
        {"gas.beta", format_number(beta)},
        {"quadrature.rel_tol", format_number(quadrature.rel_tol)},
        {"quadrature.abs_tol", format_number(quadrature.abs_tol)},
        {"quadrature.cutoff_sigmas", format_number(quadrature.velocity_cutoff_sigmas)},
        {"quadrature.eta_panels", std::to_string(quadrature.eta_panels)},
        {"mc.samples", std::to_string(mc.n_samples)},
        {"mc.seed", std::to_string(mc.seed)},
        {"mc.strata", std::to_string(mc.stratify_eta)},
        {"study.velocities", join(velocities)},
        {"study.times", join(times)},
        {"study.t_min", format_number(t_min)},
        {"study.t_max", format_number(t_max)},
        {"study.t_points", std::to_string(t_points)},
        {"study.inverse_times", join(inverse_times)},
        {"study.forces", join(forces)},
        {"study.exponent_min", format_number(exponent_min)},
        {"study.exponent_max", format_number(exponent_max)},
        {"study.synthetic", synthetic ? "true" : "false"},
        {"study.velocity_cap", format_number(velocity_cap)},
        {"output.format", format == OutputFormat::Csv ? "csv" : "json"},
    };
}

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& [k, _] : setters()) out.push_back(k);
        return out;
    }();
    return keys;
}

void apply_config_value(StudyConfig& cfg, std::string_view key, std::string_view value) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(std::string(key), "unknown configuration key");
    it->second(cfg, key, value);
}

StudyConfig parse_config_text(std::string_view text, StudyConfig base) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config", "line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

StudyConfig load_config_file(const std::filesystem::path& path, StudyConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), std::move(base));
}

}  // namespace wedgedrag

#include "wedgedrag/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "wedgedrag/asymptotics.hpp"
#include "wedgedrag/errors.hpp"
#include "wedgedrag/friction.hpp"
#include "wedgedrag/particle_oracle.hpp"

namespace wedgedrag::cli {

namespace {

using Json = nlohmann::ordered_json;

// nlohmann prints the shortest round-trip form; reports use %.17g everywhere instead.
void dump_json(const Json& j, std::string& out, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
    const std::string close_pad(2 * static_cast<std::size_t>(depth), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) { out += "{}"; return; }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(key).dump() + ": ";
            dump_json(value, out, depth + 1);
        }
        out += "\n" + close_pad + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) { out += "[]"; return; }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            dump_json(j[i], out, depth + 1);
        }
        out += "\n" + close_pad + "]";
        return;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        out += std::isfinite(x) ? format_number(x) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

std::string render_json(const Json& j) {
    std::string out;
    dump_json(j, out, 0);
    out += '\n';
    return out;
}

Json meta(const std::string& command, const StudyConfig& cfg) {
    Json echo = Json::object();
    for (const auto& [k, v] : cfg.echo()) echo[k] = v;
    Json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["seed"] = cfg.mc.seed;
    m["config"] = echo;
    return m;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string render_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

Json table_json(const Table& table) {
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        Json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = row[i];
        rows.push_back(obj);
    }
    return rows;
}

OutputFormat effective_format(const StudyConfig& cfg, OutputFormat fallback) {
    return cfg.format_set ? cfg.format : fallback;
}

std::vector<double> velocity_grid(const StudyConfig& cfg, std::vector<double> fallback) {
    std::vector<double> grid = cfg.velocities.empty() ? std::move(fallback) : cfg.velocities;
    for (double v : grid) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ConfigError("study.velocities", "velocities must be finite and >= 0, got " +
                                                      format_number(v));
        }
    }
    return grid;
}

struct Window {
    double t_min;
    double t_max;
    long long points;
};

Window resolve_window(const StudyConfig& cfg, Window fallback) {
    Window w{cfg.t_min != 0.0 ? cfg.t_min : fallback.t_min,
             cfg.t_max != 0.0 ? cfg.t_max : fallback.t_max,
             cfg.t_points >= 0 ? cfg.t_points : fallback.points};
    if (w.points == 0) throw ConfigError("study.t_points", "empty t-grid");
    if (w.points < 0) throw ConfigError("study.t_points", "must be non-negative");
    if (!(w.t_min > 0.0) || !std::isfinite(w.t_min)) {
        throw ConfigError("study.t_min", "must be positive, got " + format_number(w.t_min));
    }
    if (!std::isfinite(w.t_max) || (w.points > 1 && !(w.t_max > w.t_min))) {
        throw ConfigError("study.t_max", "must exceed study.t_min (empty t-grid)");
    }
    return w;
}

std::vector<double> window_grid(const Window& w) {
    if (w.points == 1) return {w.t_min};
    return log_grid(w.t_min, w.t_max, static_cast<std::size_t>(w.points));
}

// Explicit study.times wins; otherwise the window keys, otherwise the command's own list.
std::vector<double> time_grid(const StudyConfig& cfg, std::vector<double> fallback_list,
                              Window fallback_window) {
    std::vector<double> grid;
    if (!cfg.times.empty()) {
        grid = cfg.times;
    } else if (cfg.t_min == 0.0 && cfg.t_max == 0.0 && cfg.t_points < 0) {
        grid = std::move(fallback_list);
    } else {
        grid = window_grid(resolve_window(cfg, fallback_window));
    }
    if (grid.empty()) throw ConfigError("study.times", "empty t-grid");
    for (double t : grid) {
        if (!std::isfinite(t) || t < 0.0) {
            throw ConfigError("study.times", "times must be finite and >= 0, got " + format_number(t));
        }
    }
    return grid;
}

CommandResult finish(const StudyConfig& cfg, OutputFormat fallback, const std::string& command,
                     const Table& table, Json data) {
    CommandResult result;
    if (effective_format(cfg, fallback) == OutputFormat::Csv) {
        result.body = render_csv(table);
    } else {
        Json doc;
        doc["meta"] = meta(command, cfg);
        doc["data"] = std::move(data);
        result.body = render_json(doc);
    }
    return result;
}

}  // namespace

CommandResult run_friction_curve(const StudyConfig& cfg) {
    const WedgeConfig wedge = cfg.wedge();
    const GasState gas = cfg.gas();
    const auto velocities = velocity_grid(cfg, {0.0, 0.25, 0.5, 1.0});
    const auto times = time_grid(cfg, {0.0, 1.0, 10.0, 100.0}, {1.0, 100.0, 5});

    Table table{{"V", "t", "F0", "g", "g_inf", "delta_g", "F_total"}, {}};
    for (double V : velocities) {
        for (double t : times) {
            const FrictionBreakdown b = friction_breakdown(V, t, wedge, gas, cfg.quadrature);
            table.rows.push_back({V, t, b.f0, b.g, b.g_inf, b.delta_g, b.fv_total});
        }
    }
    CommandResult result =
        finish(cfg, OutputFormat::Csv, "friction-curve", table, table_json(table));
    result.verdict = "friction-curve: " + std::to_string(table.rows.size()) + " rows";
    return result;
}

CommandResult run_decay_study(const StudyConfig& cfg) {
    const WedgeConfig wedge = cfg.wedge();
    const GasState gas = cfg.gas();
    if (!cfg.times.empty()) {
        throw ConfigError("study.times", "decay-study uses study.t_min/t_max/t_points");
    }
    const Window w = resolve_window(cfg, {2.0, 50.0, 12});
    if (w.points < 8) throw ConfigError("study.t_points", "decay fit needs at least 8 points");
    const auto n = static_cast<std::size_t>(w.points);

    std::vector<std::pair<double, DecayFit>> fits;
    if (cfg.synthetic) {
        // Pure power law 7 t^-5: the fit must return exponent -5 exactly.
        auto hook = [](double t) { return 7.0 * std::pow(t, -5.0); };
        fits.emplace_back(std::numeric_limits<double>::quiet_NaN(),
                          fit_decay_exponent(hook, w.t_min, w.t_max, n));
    } else {
        for (double V : velocity_grid(cfg, {0.5})) {
            if (V == 0.0) throw ConfigError("study.velocities", "decay-study needs V > 0");
            fits.emplace_back(V, fit_decay_exponent(V, wedge, gas, w.t_min, w.t_max, n,
                                                    cfg.quadrature));
        }
    }

    Table table{cfg.synthetic ? std::vector<std::string>{"t", "delta_g"}
                              : std::vector<std::string>{"V", "t", "delta_g"},
                {}};
    Json data;
    data["synthetic"] = cfg.synthetic;
    data["band"] = Json::array({cfg.exponent_min, cfg.exponent_max});
    data["fits"] = Json::array();
    bool all_in_band = true;
    std::string summary;
    for (const auto& [V, fit] : fits) {
        const bool in_band = fit.exponent >= cfg.exponent_min && fit.exponent <= cfg.exponent_max;
        all_in_band = all_in_band && in_band;
        Json f;
        if (std::isnan(V)) f["V"] = nullptr; else f["V"] = V;
        f["exponent"] = fit.exponent;
        f["log_intercept"] = fit.log_intercept;
        f["r_squared"] = fit.r_squared;
        f["c_lower"] = fit.c_lower;
        f["c_upper"] = fit.c_upper;
        f["window"] = Json::array({fit.t_grid.front(), fit.t_grid.back()});
        f["points_used"] = fit.t_grid.size();
        f["requested_points"] = fit.requested_points;
        f["in_band"] = in_band;
        f["t"] = fit.t_grid;
        f["delta_g"] = fit.values;
        data["fits"].push_back(f);
        for (std::size_t i = 0; i < fit.t_grid.size(); ++i) {
            if (cfg.synthetic) table.rows.push_back({fit.t_grid[i], fit.values[i]});
            else table.rows.push_back({V, fit.t_grid[i], fit.values[i]});
        }
        summary += " " + format_number(fit.exponent);
    }

    CommandResult result = finish(cfg, OutputFormat::Json, "decay-study", table, data);
    result.exit_code = all_in_band ? kExitOk : kExitAssertion;
    result.verdict = std::string("decay exponent") + summary + ": " + (all_in_band ? "PASS" : "FAIL");
    return result;
}

CommandResult run_oracle_compare(const StudyConfig& cfg) {
    const WedgeConfig wedge = cfg.wedge();
    const GasState gas = cfg.gas();
    const auto velocities = velocity_grid(cfg, {0.0, 0.25, 0.5, 1.0});
    const auto times = time_grid(cfg, {1.0, 10.0, 100.0}, {1.0, 100.0, 3});

    Table table{{"V", "t", "quadrature", "mc_mean", "mc_stderr", "z_score"}, {}};
    double worst = 0.0;
    for (double V : velocities) {
        for (double t : times) {
            const double quad = friction_breakdown(V, t, wedge, gas, cfg.quadrature).fv_total;
            const McEstimate mc = estimate_friction_mc(V, t, wedge, gas, cfg.mc);
            const double diff = mc.mean - quad;
            double z = 0.0;
            if (mc.std_error > 0.0) z = diff / mc.std_error;
            else if (diff != 0.0) z = std::numeric_limits<double>::infinity();
            worst = std::max(worst, std::abs(z));
            table.rows.push_back({V, t, quad, mc.mean, mc.std_error, z});
        }
    }
    const bool pass = worst <= 3.0;
    Json data;
    data["rows"] = table_json(table);
    data["max_abs_z"] = worst;
    data["pass"] = pass;
    CommandResult result = finish(cfg, OutputFormat::Csv, "oracle-compare", table, data);
    result.exit_code = pass ? kExitOk : kExitAssertion;
    result.verdict = "oracle agreement max |z| = " + format_number(worst) + ": " + (pass ? "PASS" : "FAIL");
    return result;
}

CommandResult run_stationary_check(const StudyConfig& cfg) {
    const WedgeConfig wedge = cfg.wedge();
    const GasState gas = cfg.gas();
    const auto velocities = velocity_grid(cfg, {0.1, 0.5, 1.0, 2.0});
    std::vector<double> inverse =
        cfg.inverse_times.empty() ? std::vector<double>{0.05, 0.1, 0.5, 1.0} : cfg.inverse_times;
    for (double T : inverse) {
        if (!(T > 0.0) || !std::isfinite(T)) {
            throw ConfigError("study.inverse_times", "must be finite and > 0, got " + format_number(T));
        }
    }

    Table table{{"V", "T", "t", "d_delta_g"}, {}};
    Json data;
    CommandResult result;
    try {
        const StationarityReport report =
            stationarity_obstruction_scan(wedge, gas, velocities, inverse, cfg.quadrature);
        for (const auto& p : report.points) {
            table.rows.push_back({p.velocity, p.inverse_t, time_from_inverse(wedge, p.inverse_t),
                                  p.d_delta_g});
        }
        data["points"] = table_json(table);
        data["f0_at_rest"] = report.f0_at_rest;
        data["g_at_rest"] = report.g_at_rest;
        data["rest_excluded"] = report.rest_excluded;
        data["passed"] = report.passed;
        result = finish(cfg, OutputFormat::Json, "stationary-check", table, data);
        result.exit_code = report.passed ? kExitOk : kExitAssertion;
        result.verdict = std::string("no stationary velocity: ") + (report.passed ? "PASS" : "FAIL");
    } catch (const ObstructionViolation& e) {
        data["passed"] = false;
        data["error"] = e.what();
        result = finish(cfg, OutputFormat::Json, "stationary-check", table, data);
        result.exit_code = kExitAssertion;
        result.verdict = std::string("no stationary velocity: FAIL (") + e.what() + ")";
    }
    return result;
}

CommandResult run_limiting_velocity(const StudyConfig& cfg) {
    const WedgeConfig wedge = cfg.wedge();
    const GasState gas = cfg.gas();
    const std::vector<double> forces = cfg.forces.empty() ? std::vector<double>{0.1} : cfg.forces;
    for (double E : forces) {
        if (!(E > 0.0) || !std::isfinite(E)) {
            throw ConfigError("study.forces", "forces must be finite and > 0, got " + format_number(E));
        }
    }
    LimitSolverOptions opt;
    opt.velocity_cap = cfg.velocity_cap;

    Table table{{"E", "v_bar_inf", "residual", "bracket_lo", "bracket_hi"}, {}};
    bool pass = true;
    for (double E : forces) {
        const LimitingVelocity root = solve_limiting_velocity(E, wedge, gas, cfg.quadrature, opt);
        pass = pass && root.v_bar_inf > 0.0 && std::abs(root.residual) <= opt.residual_tol * E;
        table.rows.push_back({E, root.v_bar_inf, root.residual, root.bracket_lo, root.bracket_hi});
    }
    // Larger forces must not give a smaller terminal velocity.
    std::vector<std::size_t> order(table.rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return table.rows[a][0] < table.rows[b][0]; });
    bool monotone = true;
    for (std::size_t i = 1; i < order.size(); ++i) {
        monotone = monotone && table.rows[order[i]][1] >= table.rows[order[i - 1]][1];
    }
    pass = pass && monotone;

    Json data;
    data["roots"] = table_json(table);
    data["monotone_in_E"] = monotone;
    data["passed"] = pass;
    CommandResult result = finish(cfg, OutputFormat::Json, "limiting-velocity", table, data);
    result.exit_code = pass ? kExitOk : kExitAssertion;
    result.verdict = std::string("limiting velocity: ") + (pass ? "PASS" : "FAIL");
    return result;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"friction-curve", "decay-study", "oracle-compare",
                                                   "stationary-check", "limiting-velocity"};
    return names;
}

CommandResult run_command(std::string_view name, const StudyConfig& cfg) {
    try {
        cfg.validate();
        if (name == "friction-curve") return run_friction_curve(cfg);
        if (name == "decay-study") return run_decay_study(cfg);
        if (name == "oracle-compare") return run_oracle_compare(cfg);
        if (name == "stationary-check") return run_stationary_check(cfg);
        if (name == "limiting-velocity") return run_limiting_velocity(cfg);
        throw ConfigError("command", "unknown command '" + std::string(name) + "'");
    } catch (const ConfigError& e) {
        return {kExitConfig, {}, std::string("config error: ") + e.what()};
    } catch (const ObstructionViolation& e) {
        return {kExitAssertion, {}, std::string("assertion failed: ") + e.what()};
    } catch (const std::exception& e) {
        return {kExitNumerical, {}, std::string("numerical failure: ") + e.what()};
    }
}

}  // namespace wedgedrag::cli

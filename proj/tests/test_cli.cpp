#include <doctest.h>

#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "test_support.hpp"
#include "wedgedrag/commands.hpp"
#include "wedgedrag/errors.hpp"
#include "wedgedrag/study_config.hpp"

using namespace wedgedrag;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

StudyConfig small_config() {
    StudyConfig cfg;
    cfg.velocities = {0.0, 0.5};
    cfg.times = {0.0, 2.0};
    return cfg;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / ("wedgedrag_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_tool(const std::string& args) {
    const fs::path dir = scratch_dir();
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(WEDGEDRAG_TOOL) + " " + args + " >" + out.string() + " 2>" +
                            err.string();
    const int status = std::system(cmd.c_str());
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

}  // namespace

TEST_CASE("config text parsing") {
    const StudyConfig cfg = parse_config_text(
        "# study\n"
        "wedge.theta = 1.2   # radians\n"
        "\n"
        "gas.beta=2\r\n"
        "study.velocities = 0.1, 0.2 ,0.3\n"
        "mc.seed = 99\n"
        "output.format = csv\n");
    CHECK(cfg.theta == 1.2);
    CHECK(cfg.beta == 2.0);
    CHECK(cfg.velocities == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(cfg.mc.seed == 99);
    CHECK(cfg.format == OutputFormat::Csv);
    CHECK(cfg.format_set);
}

TEST_CASE("config errors name the offending key") {
    auto field_of = [](const std::string& text) {
        try {
            parse_config_text(text);
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of("wedge.thta = 1\n") == "wedge.thta");
    CHECK(field_of("wedge.theta = 60deg\n") == "wedge.theta");
    CHECK(field_of("wedge.theta = 60\xC2\xB0\n") == "wedge.theta");
    CHECK(field_of("gas.beta = 1.0x\n") == "gas.beta");
    CHECK(field_of("mc.samples = -4\n") == "mc.samples");
    CHECK(field_of("output.format = xml\n") == "output.format");
    CHECK(field_of("just words\n") == "config");
    // 60 parses as a number but is not a valid half-angle in radians
    StudyConfig cfg;
    apply_config_value(cfg, "wedge.theta", "60");
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("every known key round-trips through the echo") {
    StudyConfig cfg;
    for (const auto& key : known_config_keys()) CHECK(key.find('.') != std::string::npos);
    const auto echo = cfg.echo();
    for (const auto& [key, value] : echo) {
        if (value.empty()) continue;
        StudyConfig copy;
        CHECK_NOTHROW(apply_config_value(copy, key, value));
    }
}

TEST_CASE("number formatting is lossless") {
    testing::Gen gen(51);
    for (int i = 0; i < 10000; ++i) {
        std::uint64_t bits = gen.engine();
        double x;
        std::memcpy(&x, &bits, sizeof x);
        if (!std::isfinite(x)) continue;
        CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("friction-curve CSV header and rest rows") {
    StudyConfig cfg = small_config();
    cfg.format = OutputFormat::Csv;
    cfg.format_set = true;
    const cli::CommandResult r = cli::run_command("friction-curve", cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.body.rfind("V,t,F0,g,g_inf,delta_g,F_total\n", 0) == 0);
    CHECK(r.body.find('\r') == std::string::npos);
    const auto rows = split_csv(r.body);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][0] != "0") continue;
        for (std::size_t c = 2; c < rows[i].size(); ++c) {
            CHECK(std::abs(std::strtod(rows[i][c].c_str(), nullptr)) <= 1e-12);
        }
    }
}

TEST_CASE("CSV and JSON encode identical numbers") {
    StudyConfig cfg = small_config();
    cfg.format = OutputFormat::Csv;
    cfg.format_set = true;
    const auto csv = split_csv(cli::run_command("friction-curve", cfg).body);
    cfg.format = OutputFormat::Json;
    const auto doc = nlohmann::json::parse(cli::run_command("friction-curve", cfg).body);
    CHECK(doc["meta"]["command"] == "friction-curve");
    CHECK(doc["meta"]["version"] == cli::kVersion);
    CHECK(doc["meta"]["seed"] == cfg.mc.seed);
    const auto& data = doc["data"];
    REQUIRE(data.size() + 1 == csv.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t c = 0; c < csv[0].size(); ++c) {
            const double from_csv = std::strtod(csv[i + 1][c].c_str(), nullptr);
            CHECK(data[i][csv[0][c]].get<double>() == from_csv);
        }
    }
}

TEST_CASE("decay-study reports") {
    StudyConfig cfg;
    cfg.synthetic = true;
    cli::CommandResult r = cli::run_command("decay-study", cfg);
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.body);
    CHECK(doc["data"]["fits"][0]["exponent"].get<double>() == doctest::Approx(-5.0).epsilon(1e-6));

    cfg.synthetic = false;
    r = cli::run_command("decay-study", cfg);
    CHECK(r.exit_code == 0);
    doc = nlohmann::json::parse(r.body);
    const double exponent = doc["data"]["fits"][0]["exponent"].get<double>();
    CHECK(exponent >= -5.3);
    CHECK(exponent <= -4.7);
    CHECK(doc["data"]["fits"][0]["c_upper"].get<double>() /
              doc["data"]["fits"][0]["c_lower"].get<double>() < 1e3);

    cfg.t_points = 0;
    r = cli::run_command("decay-study", cfg);
    CHECK(r.exit_code == cli::kExitConfig);
    CHECK(r.verdict.find("study.t_points") != std::string::npos);

    StudyConfig narrow;
    narrow.exponent_min = -4.0;
    narrow.exponent_max = -3.0;
    CHECK(cli::run_command("decay-study", narrow).exit_code == cli::kExitAssertion);
}

TEST_CASE("oracle-compare is deterministic and passes at rest") {
    StudyConfig cfg;
    cfg.velocities = {0.0, 0.5};
    cfg.times = {10.0};
    cfg.mc.n_samples = 100000;
    const cli::CommandResult a = cli::run_command("oracle-compare", cfg);
    const cli::CommandResult b = cli::run_command("oracle-compare", cfg);
    REQUIRE(a.exit_code == 0);
    CHECK(a.body == b.body);
    const auto rows = split_csv(a.body);
    CHECK(rows[0] == std::vector<std::string>{"V", "t", "quadrature", "mc_mean", "mc_stderr", "z_score"});
    CHECK(std::abs(std::strtod(rows[1][5].c_str(), nullptr)) <= 3.0);
}

TEST_CASE("stationary-check and limiting-velocity verdicts") {
    StudyConfig cfg;
    const cli::CommandResult s = cli::run_command("stationary-check", cfg);
    CHECK(s.exit_code == 0);
    CHECK(s.verdict == "no stationary velocity: PASS");

    const cli::CommandResult l = cli::run_command("limiting-velocity", cfg);
    REQUIRE(l.exit_code == 0);
    const auto doc = nlohmann::json::parse(l.body);
    const auto& root = doc["data"]["roots"][0];
    CHECK(root["E"].get<double>() == 0.1);
    CHECK(root["v_bar_inf"].get<double>() > 0.0);
    CHECK(std::abs(root["residual"].get<double>()) <= 1e-10 * 0.1);

    cfg.forces = {-1.0};
    CHECK(cli::run_command("limiting-velocity", cfg).exit_code == cli::kExitConfig);
    CHECK(cli::run_command("no-such-command", StudyConfig{}).exit_code == cli::kExitConfig);
}

TEST_CASE("executable exit codes and flag precedence") {
    const fs::path dir = scratch_dir();
    const fs::path bad = dir / "bad.cfg";
    std::ofstream(bad) << "wedge.theta = 1.0\nstudy.velocitys = 0.5\n";
    Run r = run_tool("friction-curve --config " + bad.string());
    CHECK(r.code == 2);
    CHECK(r.err.find("study.velocitys") != std::string::npos);

    r = run_tool("friction-curve --theta 60deg");
    CHECK(r.code == 2);
    CHECK(r.err.find("wedge.theta") != std::string::npos);

    r = run_tool("decay-study --t-points 0");
    CHECK(r.code == 2);

    r = run_tool("friction-curve --no-such-flag");
    CHECK(r.code == 2);

    const fs::path good = dir / "good.cfg";
    std::ofstream(good) << "wedge.theta = 1.0\nstudy.velocities = 0.5\nstudy.times = 1\n";
    r = run_tool("friction-curve --config " + good.string() + " --theta 1.2 --format json");
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["meta"]["config"]["wedge.theta"] == "1.2");

    const fs::path a = dir / "a.csv";
    const fs::path b = dir / "b.csv";
    REQUIRE(run_tool("friction-curve --velocity 0.25,1 --output " + a.string()).code == 0);
    REQUIRE(run_tool("friction-curve --velocity 0.25,1 --output " + b.string()).code == 0);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    CHECK(!slurp(a).empty());
    CHECK(slurp(a) == slurp(b));
    fs::remove_all(dir);
}

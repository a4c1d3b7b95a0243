#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgas/cli/commands.hpp"
#include "qgas/cli/output.hpp"
#include "qgas/zerofinder.hpp"

using namespace qgas;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "qgas_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

json slurp_json(const fs::path& path) { return json::parse(slurp(path)); }

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        rows.push_back(fields);
    }
    return rows;
}

int run_cli(const std::vector<std::string>& args) { return cli::run(args); }

} // namespace

TEST_CASE("zeros-poly default run reproduces the N=5 counts") {
    const fs::path dir = fresh_dir("poly_default");
    const int rc = run_cli({"zeros-poly", "--out", dir.string(), "--svg"});
    CHECK(rc == 0);

    const auto rows = read_csv(dir / "zeros_poly.csv");
    REQUIRE(rows.size() >= 1);
    CHECK(rows[0] == std::vector<std::string>{"re", "im", "abs", "residual", "kind"});
    int fisher = 0, correlation = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 5);
        if (rows[i][4] == "fisher") {
            ++fisher;
        } else if (rows[i][4] == "correlation") {
            ++correlation;
        }
    }
    CHECK(fisher == 31);
    CHECK(correlation == 14);

    const json meta = slurp_json(dir / "zeros_poly.json");
    CHECK(meta.at("schema") == 1);
    CHECK(meta.at("counts").at("fisher") == 31);
    CHECK(meta.at("counts").at("correlation") == 14);
    CHECK(meta.at("origin_multiplicity").at("correlation") == 1);
    CHECK(meta.at("origin_multiplicity").at("fisher") == 0);
    CHECK(meta.at("unit_circle").contains("fisher"));
    CHECK(meta.at("converged") == true);
    CHECK(fs::exists(dir / "zeros_poly.svg"));
}

TEST_CASE("zeros-poly rejects the identically-zero N=1 weighted polynomial") {
    const fs::path dir = fresh_dir("poly_n1");
    const int rc = run_cli({"zeros-poly", "--N", "1", "--out", dir.string()});
    CHECK(rc == 2);
}

TEST_CASE("zeros-poly N=1 fisher-only works") {
    const fs::path dir = fresh_dir("poly_n1_fisher");
    const int rc =
        run_cli({"zeros-poly", "--N", "1", "--fisher-only", "--out", dir.string()});
    CHECK(rc == 0);
    const json meta = slurp_json(dir / "zeros_poly.json");
    CHECK(meta.at("counts").at("fisher") == 1);
}

TEST_CASE("identical runs produce byte-identical outputs") {
    const fs::path dir_a = fresh_dir("det_a");
    const fs::path dir_b = fresh_dir("det_b");
    for (const auto& dir : {dir_a, dir_b}) {
        CHECK(run_cli({"zeros-poly", "--out", dir.string(), "--svg", "--seed", "7"}) == 0);
    }
    CHECK(slurp(dir_a / "zeros_poly.csv") == slurp(dir_b / "zeros_poly.csv"));
    CHECK(slurp(dir_a / "zeros_poly.json") == slurp(dir_b / "zeros_poly.json"));
    CHECK(slurp(dir_a / "zeros_poly.svg") == slurp(dir_b / "zeros_poly.svg"));
}

TEST_CASE("CSV residuals re-verify on reload") {
    const fs::path dir = fresh_dir("poly_reverify");
    REQUIRE(run_cli({"zeros-poly", "--out", dir.string()}) == 0);

    const auto fisher_poly = zeros::build_z_polynomial(5, DeformationParam(2.0), 0.0, false);
    const auto corr_poly = zeros::build_z_polynomial(5, DeformationParam(2.0), 0.0, true);

    const auto rows = read_csv(dir / "zeros_poly.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double re = std::strtod(rows[i][0].c_str(), nullptr);
        const double im = std::strtod(rows[i][1].c_str(), nullptr);
        const double stored = std::strtod(rows[i][3].c_str(), nullptr);
        const auto& poly = rows[i][4] == "fisher" ? fisher_poly : corr_poly;
        const std::complex<double> z{re, im};
        const double recomputed =
            std::abs(poly.eval(z)) / std::max(poly.term_scale(z), 1e-300);
        CHECK(recomputed <= 2.0 * stored + 1e-300);
    }
}

TEST_CASE("SVG is a pure function of the CSV rows") {
    const fs::path dir = fresh_dir("svg_purity");
    REQUIRE(run_cli({"zeros-poly", "--out", dir.string(), "--svg"}) == 0);

    const auto rows = read_csv(dir / "zeros_poly.csv");
    std::vector<cli::ZeroRow> parsed;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        parsed.push_back(cli::ZeroRow{std::strtod(rows[i][0].c_str(), nullptr),
                                      std::strtod(rows[i][1].c_str(), nullptr),
                                      std::strtod(rows[i][2].c_str(), nullptr),
                                      std::strtod(rows[i][3].c_str(), nullptr),
                                      rows[i][4]});
    }
    CHECK(cli::zeros_poly_svg(parsed) == slurp(dir / "zeros_poly.svg"));
}

TEST_CASE("figure1 writes both panels with the derived counts") {
    const fs::path dir = fresh_dir("figure1");
    REQUIRE(run_cli({"figure1", "--out", dir.string(), "--svg"}) == 0);

    const json meta_a = slurp_json(dir / "figure1a.json");
    CHECK(meta_a.at("counts").at("fisher") == 31);
    CHECK(meta_a.at("counts").at("correlation") == 14);
    const json meta_b = slurp_json(dir / "figure1b.json");
    CHECK(meta_b.at("counts").at("fisher") == 127);
    CHECK(meta_b.at("counts").at("correlation") == 62);
    CHECK(fs::exists(dir / "figure1a.svg"));
    CHECK(fs::exists(dir / "figure1b.svg"));
}

TEST_CASE("zeros-beta recovers the N=1 family from a config file") {
    const fs::path dir = fresh_dir("beta_n1");
    const fs::path config = dir / "config.json";
    {
        std::ofstream out(config);
        out << R"({
  "system": {"eps": [0.0, 1.0], "N": 1, "q": 2.0},
  "zeros_beta": {"target": "partition", "beta_min": -0.5, "beta_max": 0.5,
                  "beta1_min": 0.0, "beta1_max": 10.0, "grid_m": 33, "grid_k": 40}
})";
    }
    REQUIRE(run_cli({"zeros-beta", "--config", config.string(), "--out", dir.string()}) ==
            0);

    const auto rows = read_csv(dir / "zeros_beta.csv");
    REQUIRE(rows.size() == 3); // header + two zeros
    CHECK(rows[0] == std::vector<std::string>{"beta", "beta1", "residual"});
    const double beta1_first = std::strtod(rows[1][1].c_str(), nullptr);
    const double beta1_second = std::strtod(rows[2][1].c_str(), nullptr);
    CHECK(std::abs(beta1_first - std::numbers::pi) <= 1e-8);
    CHECK(std::abs(beta1_second - 3 * std::numbers::pi) <= 1e-8);

    const json meta = slurp_json(dir / "zeros_beta.json");
    CHECK(meta.at("counts").at("zeros") == 2);
    CHECK(meta.contains("beta1_period"));
}

TEST_CASE("zeros-beta at q=1 on the physical half-plane finds nothing") {
    const fs::path dir = fresh_dir("beta_q1");
    const fs::path config = dir / "config.json";
    {
        std::ofstream out(config);
        out << R"({
  "system": {"eps": [1.0, 0.0], "N": 5, "q": 1.0},
  "zeros_beta": {"beta_min": 0.1, "beta_max": 2.0,
                  "beta1_min": -3.0, "beta1_max": 3.0, "grid_m": 16, "grid_k": 16}
})";
    }
    REQUIRE(run_cli({"zeros-beta", "--config", config.string(), "--out", dir.string()}) ==
            0);
    const auto rows = read_csv(dir / "zeros_beta.csv");
    CHECK(rows.size() == 1); // header only
    const json meta = slurp_json(dir / "zeros_beta.json");
    bool noted = false;
    for (const auto& w : meta.at("warnings")) {
        if (w.get<std::string>().find("no zeros at q=1") != std::string::npos) {
            noted = true;
        }
    }
    CHECK(noted);
}

TEST_CASE("correlator sweep emits candidates at the analytic zero times") {
    const fs::path dir = fresh_dir("corr_sweep");
    const fs::path config = dir / "config.json";
    {
        std::ofstream out(config);
        out << R"({
  "system": {"eps": [0.0, 1.0], "N": 3, "q": 2.0},
  "correlator": {"beta": 1e-12, "tau_min": 0.0, "tau_max": 12.0, "tau_points": 301}
})";
    }
    REQUIRE(run_cli({"correlator", "--config", config.string(), "--out", dir.string()}) ==
            0);

    const auto rows = read_csv(dir / "correlator.csv");
    REQUIRE(rows.size() == 302);
    CHECK(rows[0] == std::vector<std::string>{"tau", "re", "im", "abs"});
    // tau = 0 row is real
    CHECK(std::strtod(rows[1][0].c_str(), nullptr) == 0.0);
    CHECK(std::abs(std::strtod(rows[1][2].c_str(), nullptr)) <=
          1e-13 * std::abs(std::strtod(rows[1][1].c_str(), nullptr)));

    const json meta = slurp_json(dir / "correlator.json");
    const auto& candidates = meta.at("zero_candidates");
    REQUIRE(candidates.size() == 2); // pi and 3*pi inside [0, 12]
    CHECK(std::abs(candidates[0].at("tau").get<double>() - std::numbers::pi) <= 1e-6);
    CHECK(std::abs(candidates[1].at("tau").get<double>() - 3 * std::numbers::pi) <= 1e-6);
}

TEST_CASE("correlator modulus is constant at q=1") {
    const fs::path dir = fresh_dir("corr_q1");
    REQUIRE(run_cli({"correlator", "--N", "3", "--q", "1.0", "--eps", "1.0", "0.4",
                     "--beta", "0.9", "--out", dir.string()}) == 0);
    const auto rows = read_csv(dir / "correlator.csv");
    REQUIRE(rows.size() > 2);
    const double first = std::strtod(rows[1][3].c_str(), nullptr);
    for (std::size_t i = 2; i < rows.size(); ++i) {
        CHECK(std::abs(std::strtod(rows[i][3].c_str(), nullptr) - first) <=
              1e-12 * first);
    }
}

TEST_CASE("oracle-check passes and the corrupt mode is a working negative control") {
    const fs::path dir = fresh_dir("oracle");
    CHECK(run_cli({"oracle-check", "--out", dir.string(), "--seed", "3"}) == 0);
    const json report = slurp_json(dir / "oracle_check.json");
    CHECK(report.at("counts").at("failed") == 0);
    CHECK(report.at("counts").at("checks").get<int>() > 50);
    for (const auto& check : report.at("checks")) {
        CHECK(check.at("pass") == true);
    }

    const fs::path dir2 = fresh_dir("oracle_corrupt");
    CHECK(run_cli({"oracle-check", "--out", dir2.string(), "--corrupt"}) == 1);
    const json corrupted = slurp_json(dir2 / "oracle_check.json");
    CHECK(corrupted.at("counts").at("failed").get<int>() >= 1);
}

TEST_CASE("config validation failures exit with code 2") {
    const fs::path dir = fresh_dir("config_errors");

    SUBCASE("unknown key") {
        const fs::path config = dir / "bad_key.json";
        std::ofstream(config) << R"({"system": {"eps": [1.0, 0.0], "frobnicate": 3}})";
        CHECK(run_cli({"zeros-poly", "--config", config.string(),
                       "--out", dir.string()}) == 2);
    }
    SUBCASE("invalid JSON") {
        const fs::path config = dir / "bad_json.json";
        std::ofstream(config) << "{not json";
        CHECK(run_cli({"zeros-poly", "--config", config.string(),
                       "--out", dir.string()}) == 2);
    }
    SUBCASE("missing file") {
        CHECK(run_cli({"zeros-poly", "--config", (dir / "absent.json").string(),
                       "--out", dir.string()}) == 2);
    }
    SUBCASE("bad flag") {
        CHECK(run_cli({"zeros-poly", "--no-such-flag"}) == 2);
    }
    SUBCASE("bad q") {
        CHECK(run_cli({"zeros-beta", "--q", "-1.0", "--out", dir.string()}) == 2);
    }
    SUBCASE("degenerate region") {
        const fs::path config = dir / "bad_region.json";
        std::ofstream(config) << R"({"zeros_beta": {"beta_min": 1.0, "beta_max": 1.0,
            "beta1_min": 0.0, "beta1_max": 1.0}})";
        CHECK(run_cli({"zeros-beta", "--config", config.string(),
                       "--out", dir.string()}) == 2);
    }
}

TEST_CASE("zeros-poly falls back to the beta-plane for irrational powers") {
    const fs::path dir = fresh_dir("poly_fallback");
    REQUIRE(run_cli({"zeros-poly", "--N", "5", "--q", "2", "--eps", "1.0",
                     "1.4142135623730951", "--fisher-only", "--out", dir.string()}) == 0);
    const json meta = slurp_json(dir / "zeros_poly.json");
    CHECK(meta.at("method") == "grid_newton");
    CHECK(meta.at("counts").at("fisher").get<int>() > 0);

    // every reported z is a principal-branch root of the real-power sum
    const auto poly = zeros::build_z_polynomial(5, DeformationParam(2.0),
                                                1.4142135623730951, false);
    const auto rows = read_csv(dir / "zeros_poly.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::complex<double> z{std::strtod(rows[i][0].c_str(), nullptr),
                                     std::strtod(rows[i][1].c_str(), nullptr)};
        const double residual =
            std::abs(poly.eval(z)) / std::max(poly.term_scale(z), 1e-300);
        CHECK(residual <= 1e-10);
    }
}

TEST_CASE("zeros-poly beyond the dense cap is a config error") {
    // N=15 at q=2 has degree 2^15-1: past the dense cap, and the beta-plane
    // fallback region exceeds the exp-safe bound
    const fs::path dir = fresh_dir("poly_cap");
    CHECK(run_cli({"zeros-poly", "--N", "15", "--q", "2", "--fisher-only", "--out",
                   dir.string()}) == 2);
}

TEST_CASE("zeros-poly on a single-term polynomial is a config error") {
    const fs::path dir = fresh_dir("poly_degenerate");
    CHECK(run_cli({"zeros-poly", "--N", "1", "--eps", "1.0", "1.0", "--fisher-only",
                   "--out", dir.string()}) == 2);
}

TEST_CASE("zeros-beta default region covers one beta1 period") {
    const fs::path dir = fresh_dir("beta_default");
    REQUIRE(run_cli({"zeros-beta", "--N", "1", "--q", "2", "--eps", "0.0", "1.0",
                     "--out", dir.string()}) == 0);
    const json meta = slurp_json(dir / "zeros_beta.json");
    CHECK(meta.at("region").at("beta_min").get<double>() == -0.5);
    CHECK(std::abs(meta.at("region").at("beta1_max").get<double>() -
                   2 * std::numbers::pi) <= 1e-9);
    // one family member (pi) lies in one period
    CHECK(meta.at("counts").at("zeros") == 1);
}

TEST_CASE("zeros-beta zc target through the --target flag") {
    const fs::path dir = fresh_dir("beta_zc_flag");
    const fs::path config = dir / "config.json";
    {
        std::ofstream out(config);
        out << R"({
  "system": {"eps": [0.0, 1.0], "N": 3, "q": 2.0},
  "zeros_beta": {"beta_min": -0.5, "beta_max": 0.5,
                  "beta1_min": 0.0, "beta1_max": 5.0, "grid_m": 33, "grid_k": 40}
})";
    }
    REQUIRE(run_cli({"zeros-beta", "--config", config.string(), "--target", "zc",
                     "--out", dir.string()}) == 0);
    const json meta = slurp_json(dir / "zeros_beta.json");
    CHECK(meta.at("target") == "zc");
    CHECK(meta.at("counts").at("zeros") == 2); // pi/2 and 3pi/2
}

TEST_CASE("zeros-beta rejects regions beyond the exp-safe bound") {
    const fs::path dir = fresh_dir("beta_overflow");
    const fs::path config = dir / "config.json";
    {
        std::ofstream out(config);
        out << R"({
  "system": {"eps": [1.0, 0.0], "N": 10, "q": 2.0},
  "zeros_beta": {"beta_min": 0.0, "beta_max": 1.0,
                  "beta1_min": 0.0, "beta1_max": 1.0}
})";
    }
    CHECK(run_cli({"zeros-beta", "--config", config.string(), "--out", dir.string()}) ==
          2);
}

TEST_CASE("oracle-check output is deterministic for a fixed seed") {
    const fs::path dir_a = fresh_dir("oracle_det_a");
    const fs::path dir_b = fresh_dir("oracle_det_b");
    for (const auto& dir : {dir_a, dir_b}) {
        REQUIRE(run_cli({"oracle-check", "--out", dir.string(), "--seed", "11"}) == 0);
    }
    CHECK(slurp(dir_a / "oracle_check.json") == slurp(dir_b / "oracle_check.json"));
}

TEST_CASE("format_double round-trips doubles") {
    for (double v : {1.0 / 3.0, 1e-300, -0.0, 3.141592653589793, 2.2250738585072014e-308}) {
        const std::string text = cli::format_double(v);
        CHECK(std::strtod(text.c_str(), nullptr) == v);
    }
}

TEST_CASE("json format embeds the rows in the meta document") {
    const fs::path dir = fresh_dir("json_format");
    REQUIRE(run_cli({"zeros-poly", "--format", "json", "--out", dir.string()}) == 0);
    CHECK_FALSE(fs::exists(dir / "zeros_poly.csv"));
    const json meta = slurp_json(dir / "zeros_poly.json");
    REQUIRE(meta.contains("rows"));
    CHECK(meta.at("rows").size() == 45); // 31 + 14
}

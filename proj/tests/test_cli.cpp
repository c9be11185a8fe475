#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "csl/astro.hpp"
#include "support/approx.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(CSLHEAT_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
        res.output.append(buf.data(), n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("heating: closed form, zero rate, far cutoff") {
    const RunResult white = run("heating --mass-kg 1 --lambda 1e-16 --rc 1e-7 --json");
    CHECK(white.exit_code == 0);
    const auto jw = nlohmann::json::parse(white.output);
    CHECK(jw["method"] == "closed-form-white");
    CHECK(jw["power_W"].get<double>() ==
          rel_approx(3.0249304248483234e-17, 1e-12));

    const RunResult zero = run("heating --mass-kg 1 --lambda 0 --rc 1e-7 --json");
    CHECK(zero.exit_code == 0);
    CHECK(nlohmann::json::parse(zero.output)["power_W"].get<double>() == 0.0);

    const RunResult far = run(
        "heating --mass-kg 1 --lambda 1e-16 --rc 1e-7 --spectrum gauss:1e20 "
        "--kf 1e9 --json");
    CHECK(far.exit_code == 0);
    const auto jf = nlohmann::json::parse(far.output);
    CHECK(jf["method"] == "colored-quadrature");
    CHECK(jf["power_W"].get<double>() ==
          rel_approx(jw["power_W"].get<double>(), 0.01));
}

TEST_CASE("heating: unit suffixes and profiles") {
    const RunResult msun =
        run("heating --mass-kg 1Msun --lambda 1e-16 --rc 1e-7 --json");
    CHECK(msun.exit_code == 0);
    const double p_sun = nlohmann::json::parse(msun.output)["power_W"].get<double>();
    CHECK(p_sun == rel_approx(1.9885e30 * 3.0249304248483234e-17, 1e-12));

    const RunResult paper =
        run("heating --mass-kg 1 --lambda 1e-16 --rc 1e-7 --profile paper --json");
    CHECK(paper.exit_code == 0);
    const double p_paper = nlohmann::json::parse(paper.output)["power_W"].get<double>();
    // Rounded nucleon mass shifts the closed form by ~1e-6 relative.
    CHECK(p_paper == rel_approx(3.0249270241843646e-17, 1e-12));

    const RunResult bad =
        run("heating --mass-kg 1km --lambda 1e-16 --rc 1e-7");
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("length unit") != std::string::npos);
}

TEST_CASE("usage and computation failures are distinguished") {
    CHECK(run("heating --lambda 1e-16").exit_code == 1); // missing required
    CHECK(run("nosuchcommand").exit_code == 1);
    CHECK(run("heating --mass-kg 1 --lambda 1e-16 --rc 1e-7 --spectrum bogus")
              .exit_code == 1);
    CHECK(run("--help").exit_code == 0);

    // Data failure: a tabulated spectrum that cannot cover the integrand.
    std::ofstream spec("/tmp/cli_narrow.csv");
    spec << "omega_rad_per_s,gamma_m3_per_s\n0,1e-36\n10,0\n";
    spec.close();
    const RunResult narrow = run(
        "heating --mass-kg 1 --lambda 1e-16 --rc 1e-7 "
        "--spectrum file:/tmp/cli_narrow.csv --kf 1e9");
    CHECK(narrow.exit_code == 2);
    CHECK(narrow.output.find("extend the table") != std::string::npos);

    const RunResult unknown =
        run("curve --body Vulcan --out /tmp/cli_x.csv");
    CHECK(unknown.exit_code == 2);
    CHECK(unknown.output.find("Neptune") != std::string::npos);
}

TEST_CASE("table: comparison column stays inside 1%") {
    const RunResult res = run("table --compare --json");
    CHECK(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    REQUIRE(j["rows"].size() == 12);
    for (const auto& row : j["rows"]) {
        REQUIRE(row.contains("deviation"));
        CHECK(std::abs(row["deviation"].get<double>()) < 0.01);
    }

    const RunResult neptune = run("table");
    CHECK(neptune.exit_code == 0);
    CHECK(neptune.output.find("Neptune") != std::string::npos);

    // CSV export carries its manifest sidecar.
    const RunResult csv = run("table --compare --out /tmp/cli_table.csv");
    CHECK(csv.exit_code == 0);
    CHECK(slurp("/tmp/cli_table.csv")
              .starts_with("name,power_per_mass_W_per_kg,lambda_over_rc2"));
    const auto mf = nlohmann::json::parse(slurp("/tmp/cli_table.csv.manifest.json"));
    CHECK(mf["command"] == "table");
}

TEST_CASE("table: explicit catalog path and environment default") {
    std::ofstream cat("/tmp/cli_catalog.json");
    cat << R"([{"name": "TestBody", "mass_kg": 1.0e24,
                "power_per_mass_W_per_kg": 1.0e-10}])";
    cat.close();

    const RunResult flag = run("table --catalog /tmp/cli_catalog.json --json");
    CHECK(flag.exit_code == 0);
    CHECK(nlohmann::json::parse(flag.output)["rows"].size() == 1);

    const std::string cmd = std::string("CSLHEAT_CATALOG=/tmp/cli_catalog.json ") +
                            CSLHEAT_BIN + " table --json 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
        out.append(buf.data(), n);
    CHECK(WEXITSTATUS(pclose(pipe)) == 0);
    const auto j = nlohmann::json::parse(out);
    CHECK(j["rows"].size() == 1);
    CHECK(j["rows"][0]["name"] == "TestBody");

    const RunResult broken = run("table --catalog /nonexistent.json");
    CHECK(broken.exit_code == 2);
}

TEST_CASE("curve: file round-trip, power law, manifest, determinism") {
    const std::string out = "/tmp/cli_curve.csv";
    const RunResult res = run("curve --body Neptune --rc-min 1e-9 --rc-max 1e-3 "
                              "--points 61 --out " + out);
    CHECK(res.exit_code == 0);

    const std::string text = slurp(out);
    REQUIRE(text.rfind("rC_m,lambda_max_per_s\n", 0) == 0);

    // Re-evaluating the bound at each rc reproduces the lambda column.
    const auto catalog = csl::builtin_catalog();
    const auto& body = csl::find_body(catalog, "Neptune");
    const csl::PhysConstants pc = csl::PhysConstants::codata();
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line); // header
    std::size_t rows = 0;
    bool saw_reference_rc = false;
    while (std::getline(lines, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        const double rc = std::stod(line.substr(0, comma));
        const double lam = std::stod(line.substr(comma + 1));
        CHECK(lam ==
              rel_approx(csl::bound_lambda(body, rc, pc), 1e-12));
        if (std::abs(rc / 1e-7 - 1.0) < 1e-9) {
            saw_reference_rc = true;
            CHECK(lam == rel_approx(6.57e-11, 0.01));
        }
        ++rows;
    }
    CHECK(rows == 61);
    CHECK(saw_reference_rc);

    // Manifest sidecar identifies the run.
    const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
    CHECK(manifest["command"] == "curve");
    CHECK(manifest["parameters"]["body"] == "Neptune");
    CHECK(manifest["constants_profile"] == "codata");
    CHECK(manifest["tool_version"].is_string());

    // Identical invocation, bit-identical output.
    const RunResult rerun = run("curve --body Neptune --rc-min 1e-9 --rc-max 1e-3 "
                                "--points 61 --out /tmp/cli_curve2.csv");
    CHECK(rerun.exit_code == 0);
    CHECK(slurp("/tmp/cli_curve2.csv") == text);

    // Two points a decade apart differ by exactly 100 in lambda.
    const RunResult decade = run(
        "curve --body Neptune --rc-min 1e-8 --rc-max 1e-7 --points 2 --out "
        "/tmp/cli_decade.csv");
    CHECK(decade.exit_code == 0);
    std::istringstream dl(slurp("/tmp/cli_decade.csv"));
    std::getline(dl, line);
    std::getline(dl, line);
    const double lam_lo = std::stod(line.substr(line.find(',') + 1));
    std::getline(dl, line);
    const double lam_hi = std::stod(line.substr(line.find(',') + 1));
    CHECK(lam_hi == rel_approx(100.0 * lam_lo, 1e-12));
}

TEST_CASE("curve: json format embeds manifest and overlays") {
    std::ofstream ov("/tmp/cli_overlay.json");
    ov << R"([{"name": "external", "points": [[1e-8, 1e-6], [1e-7, 1e-4]]}])";
    ov.close();

    const RunResult res = run(
        "curve --body 'PSR J1840-1419' --rc-min 1e-8 --rc-max 1e-6 --points 5 "
        "--format json --overlay /tmp/cli_overlay.json --out /tmp/cli_curve.json");
    CHECK(res.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp("/tmp/cli_curve.json"));
    CHECK(j["body"] == "PSR J1840-1419");
    CHECK(j["generated_from"] == "power-per-mass");
    CHECK(j["points"].size() == 5);
    REQUIRE(j["overlays"].size() == 1);
    CHECK(j["overlays"][0]["name"] == "external");
    CHECK(j["manifest"]["command"] == "curve");

    // Overlay pass-through requires the json format.
    const RunResult bad = run(
        "curve --body Neptune --overlay /tmp/cli_overlay.json --out /tmp/x.csv");
    CHECK(bad.exit_code == 1);

    // The blackbody path is selectable where the data exists.
    const RunResult sb = run(
        "curve --body 'PSR J1840-1419' --power-path sb --profile paper "
        "--rc-min 1e-8 --rc-max 1e-6 --points 3 --format json --out "
        "/tmp/cli_sb.json");
    CHECK(sb.exit_code == 0);
    const auto jsb = nlohmann::json::parse(slurp("/tmp/cli_sb.json"));
    CHECK(jsb["generated_from"] == "stefan-boltzmann");
}

TEST_CASE("verify --fast passes and exits zero") {
    const RunResult res = run("verify --fast --seed 7");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("FAIL") == std::string::npos);
    CHECK(res.output.find("box-sum-convergence") != std::string::npos);
}

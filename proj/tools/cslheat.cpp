// cslheat: collapse-noise heating power for Fermi gases and the derived
// astrophysical exclusion bounds on the collapse parameters, exported as
// machine-readable plot data.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csl/astro.hpp"
#include "csl/constants.hpp"
#include "csl/heating.hpp"
#include "csl/noise.hpp"
#include "csl/quadrature.hpp"
#include "csl/verify.hpp"

#ifndef CSLHEAT_VERSION
#define CSLHEAT_VERSION "0.0.0"
#endif

namespace {

using nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_computation = 2;
constexpr int exit_verification = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric CLI values accept SI numbers plus the convenience suffixes
// km (lengths), Msun (masses) and MK (temperatures).
double parse_quantity(const std::string& text, const std::string& dimension) {
    static const std::map<std::string, std::pair<std::string, double>> suffixes = {
        {"km", {"length", 1e3}},
        {"Msun", {"mass", 1.9885e30}},
        {"MK", {"temperature", 1e6}},
    };
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError("cannot parse number '" + text + "'");
    }
    const std::string suffix = text.substr(used);
    if (suffix.empty())
        return value;
    const auto it = suffixes.find(suffix);
    if (it == suffixes.end())
        throw UsageError("unknown unit suffix '" + suffix + "' in '" + text + "'");
    if (it->second.first != dimension)
        throw UsageError("suffix '" + suffix + "' is a " + it->second.first +
                         " unit, not valid for " + dimension);
    return value * it->second.second;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::string constants_profile;
    std::optional<std::uint64_t> seed;

    void add(const std::string& key, const std::string& value) {
        parameters.emplace_back(key, value);
    }
    void add(const std::string& key, double value) {
        parameters.emplace_back(key, format_full(value));
    }

    ordered_json to_json() const {
        ordered_json j;
        j["command"] = command;
        ordered_json params = ordered_json::object();
        for (const auto& [k, v] : parameters)
            params[k] = v;
        j["parameters"] = params;
        j["constants_profile"] = constants_profile;
        if (seed)
            j["seed"] = *seed;
        j["tool_version"] = CSLHEAT_VERSION;
        return j;
    }
};

std::vector<csl::AstroBody> resolve_catalog(const std::string& flag_path,
                                            std::string& source) {
    if (!flag_path.empty()) {
        source = flag_path;
        return csl::load_catalog(flag_path);
    }
    if (const char* env = std::getenv("CSLHEAT_CATALOG"); env && *env) {
        source = env;
        return csl::load_catalog(env);
    }
    source = "builtin";
    return csl::builtin_catalog();
}

csl::PowerPath parse_power_path(const std::string& s) {
    if (s == "auto") return csl::PowerPath::Auto;
    if (s == "ppm") return csl::PowerPath::PowerPerMass;
    if (s == "sb") return csl::PowerPath::StefanBoltzmann;
    throw UsageError("unknown --power-path '" + s + "' (auto|ppm|sb)");
}

// --spectrum white | gauss:OMEGA | lorentz:OMEGA | file:PATH
csl::NoiseSpectrum parse_spectrum(const std::string& text, double gamma0) {
    if (text == "white")
        return csl::NoiseSpectrum::white(gamma0);
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg =
        colon == std::string::npos ? std::string() : text.substr(colon + 1);
    if (head == "gauss" || head == "lorentz") {
        if (arg.empty())
            throw UsageError("--spectrum " + head + " needs a cutoff: " + head +
                             ":OMEGA");
        double omega = 0.0;
        try {
            omega = std::stod(arg);
        } catch (const std::exception&) {
            throw UsageError("bad cutoff frequency '" + arg + "'");
        }
        return head == "gauss" ? csl::NoiseSpectrum::gaussian_cutoff(gamma0, omega)
                               : csl::NoiseSpectrum::lorentzian(gamma0, omega);
    }
    if (head == "file") {
        if (arg.empty())
            throw UsageError("--spectrum file needs a path: file:PATH");
        return csl::NoiseSpectrum::tabulated_from_csv(arg);
    }
    throw UsageError("unknown --spectrum '" + text +
                     "' (white|gauss:OMEGA|lorentz:OMEGA|file:PATH)");
}

// ---------------------------------------------------------------- heating

struct HeatingArgs {
    std::string mass = "1";
    double lambda = 0.0;
    double rc = 0.0;
    std::string spectrum;
    double kf = 0.0;
    std::string ma;
    std::string profile = "codata";
    double tol = 1e-8;
    bool json = false;
};

int run_heating(const HeatingArgs& a) {
    const csl::PhysConstants pc = csl::PhysConstants::from_name(a.profile);
    const double mass = parse_quantity(a.mass, "mass");
    const double m_a =
        a.ma.empty() ? csl::neutron_mass : parse_quantity(a.ma, "mass");
    const csl::CollapseParams params(a.lambda, a.rc);

    RunManifest manifest;
    manifest.command = "heating";
    manifest.constants_profile = pc.profile_name();
    manifest.add("mass_kg", mass);
    manifest.add("lambda_per_s", params.lambda);
    manifest.add("rc_m", params.rc);
    manifest.add("ma_kg", m_a);

    csl::HeatingResult result;
    if (a.spectrum.empty()) {
        result = csl::heating_power_white(mass, params, pc, m_a);
    } else {
        const double gamma0 = csl::white_collapse_strength(params);
        const csl::NoiseSpectrum spec = parse_spectrum(a.spectrum, gamma0);
        const csl::FermiGas gas = csl::FermiGas::degenerate(m_a, a.kf, mass);
        csl::HeatingQuadrature cfg;
        cfg.rel_tol = a.tol;
        result = csl::heating_power_colored(gas, spec, params, pc, cfg);
        manifest.add("spectrum", a.spectrum);
        manifest.add("kf_per_m", a.kf);
        manifest.add("tol", a.tol);
    }

    if (a.json) {
        ordered_json j;
        j["command"] = "heating";
        j["method"] = csl::heating_method_name(result.method);
        j["power_W"] = result.power;
        j["per_particle_power_W"] = result.per_particle_power;
        j["quadrature_error_W"] = result.quadrature_error;
        j["manifest"] = manifest.to_json();
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("method               %s\n", csl::heating_method_name(result.method));
        std::printf("power_W              %.17g\n", result.power);
        std::printf("per_particle_W       %.17g\n", result.per_particle_power);
        std::printf("quadrature_error_W   %.3g\n", result.quadrature_error);
        std::printf("profile              %s\n", pc.profile_name());
    }
    return exit_ok;
}

// ------------------------------------------------------------------ table

struct TableArgs {
    std::string catalog;
    std::string out;
    std::string profile = "codata";
    bool compare = false;
    bool json = false;
};

int run_table(const TableArgs& a) {
    const csl::PhysConstants pc = csl::PhysConstants::from_name(a.profile);
    std::string source;
    const auto catalog = resolve_catalog(a.catalog, source);
    const auto rows = csl::bound_table(catalog, pc);

    RunManifest manifest;
    manifest.command = "table";
    manifest.constants_profile = pc.profile_name();
    manifest.add("catalog", source);
    manifest.add("compare", a.compare ? "true" : "false");

    if (a.json) {
        ordered_json j;
        j["command"] = "table";
        j["catalog"] = source;
        j["constants_profile"] = pc.profile_name();
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows) {
            ordered_json r;
            r["name"] = row.name;
            if (row.ok()) {
                r["power_per_mass_W_per_kg"] = row.power_per_mass;
                r["lambda_over_rc2_per_s_m2"] = row.lambda_over_rc2;
            } else {
                r["error"] = row.error;
            }
            if (a.compare && row.reference) {
                r["reference_per_s_m2"] = *row.reference;
                if (row.ok())
                    r["deviation"] = row.lambda_over_rc2 / *row.reference - 1.0;
            }
            arr.push_back(r);
        }
        j["rows"] = arr;
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("%-16s %14s %18s", "body", "P/M [W/kg]", "lambda/rc^2 [1/(s m^2)]");
        if (a.compare)
            std::printf(" %14s %10s", "reference", "deviation");
        std::printf("\n");
        for (const auto& row : rows) {
            if (!row.ok()) {
                std::printf("%-16s  -- %s\n", row.name.c_str(), row.error.c_str());
                continue;
            }
            std::printf("%-16s %14.4e %18.4e", row.name.c_str(), row.power_per_mass,
                        row.lambda_over_rc2);
            if (a.compare) {
                if (row.reference)
                    std::printf(" %14.4e %9.4f%%", *row.reference,
                                100.0 * (row.lambda_over_rc2 / *row.reference - 1.0));
                else
                    std::printf(" %14s %10s", "--", "--");
            }
            std::printf("\n");
        }
    }

    if (!a.out.empty()) {
        std::ofstream csv(a.out);
        if (!csv)
            throw std::runtime_error("cannot write " + a.out);
        csv << "name,power_per_mass_W_per_kg,lambda_over_rc2_per_s_m2";
        if (a.compare)
            csv << ",reference_per_s_m2,deviation";
        csv << "\n";
        for (const auto& row : rows) {
            csv << row.name << ",";
            if (row.ok())
                csv << format_full(row.power_per_mass) << ","
                    << format_full(row.lambda_over_rc2);
            else
                csv << ",";
            if (a.compare) {
                csv << ",";
                if (row.reference)
                    csv << format_full(*row.reference) << ","
                        << (row.ok() ? format_full(row.lambda_over_rc2 /
                                                       *row.reference -
                                                   1.0)
                                     : std::string());
                else
                    csv << ",";
            }
            csv << "\n";
        }
        csv.close();

        std::ofstream mf(a.out + ".manifest.json");
        if (!mf)
            throw std::runtime_error("cannot write " + a.out + ".manifest.json");
        mf << manifest.to_json().dump(2) << "\n";
    }
    return exit_ok;
}

// ------------------------------------------------------------------ curve

struct CurveArgs {
    std::string body;
    std::string rc_min = "1e-9";
    std::string rc_max = "1e-3";
    std::size_t points = 61;
    std::string out;
    std::string format = "csv";
    std::string overlay;
    std::string power_path = "auto";
    std::string catalog;
    std::string profile = "codata";
};

int run_curve(const CurveArgs& a) {
    const csl::PhysConstants pc = csl::PhysConstants::from_name(a.profile);
    const double rc_min = parse_quantity(a.rc_min, "length");
    const double rc_max = parse_quantity(a.rc_max, "length");
    if (a.format != "csv" && a.format != "json")
        throw UsageError("--format must be csv or json");
    if (!a.overlay.empty() && a.format != "json")
        throw UsageError("--overlay requires --format json");

    std::string source;
    const auto catalog = resolve_catalog(a.catalog, source);
    const csl::AstroBody& body = csl::find_body(catalog, a.body);
    const csl::PowerPath path = parse_power_path(a.power_path);
    const csl::BoundCurve curve =
        csl::exclusion_curve(body, rc_min, rc_max, a.points, pc, path);

    RunManifest manifest;
    manifest.command = "curve";
    manifest.constants_profile = pc.profile_name();
    manifest.add("body", body.name);
    manifest.add("rc_min_m", rc_min);
    manifest.add("rc_max_m", rc_max);
    manifest.add("points", static_cast<double>(a.points));
    manifest.add("power_path", csl::power_path_name(curve.generated_from));
    manifest.add("catalog", source);

    if (a.format == "csv") {
        std::ofstream csv(a.out);
        if (!csv)
            throw std::runtime_error("cannot write " + a.out);
        csv << "rC_m,lambda_max_per_s\n";
        for (const auto& [rc, lam] : curve.points)
            csv << format_full(rc) << "," << format_full(lam) << "\n";

        std::ofstream mf(a.out + ".manifest.json");
        if (!mf)
            throw std::runtime_error("cannot write " + a.out + ".manifest.json");
        mf << manifest.to_json().dump(2) << "\n";
    } else {
        ordered_json j;
        j["body"] = curve.body_name;
        j["generated_from"] = csl::power_path_name(curve.generated_from);
        j["constants_profile"] = curve.constants_profile;
        ordered_json pts = ordered_json::array();
        for (const auto& [rc, lam] : curve.points)
            pts.push_back({rc, lam});
        j["points"] = pts;
        if (!a.overlay.empty()) {
            ordered_json ovs = ordered_json::array();
            for (const auto& ov : csl::load_overlays(a.overlay)) {
                ordered_json o;
                o["name"] = ov.name;
                ordered_json opts = ordered_json::array();
                for (const auto& [rc, lam] : ov.points)
                    opts.push_back({rc, lam});
                o["points"] = opts;
                ovs.push_back(o);
            }
            j["overlays"] = ovs;
        }
        j["manifest"] = manifest.to_json();

        std::ofstream out(a.out);
        if (!out)
            throw std::runtime_error("cannot write " + a.out);
        out << j.dump(2) << "\n";
    }
    std::cout << "wrote " << a.out << " (" << curve.points.size() << " points, "
              << csl::power_path_name(curve.generated_from) << ")\n";
    return exit_ok;
}

// ----------------------------------------------------------------- verify

struct VerifyArgs {
    std::uint64_t seed = 42;
    bool fast = false;
    bool json = false;
};

int run_verify(const VerifyArgs& a) {
    csl::VerifyOptions opt;
    opt.seed = a.seed;
    opt.fast = a.fast;
    const auto checks = csl::verification_suite(opt);

    bool all_pass = true;
    if (a.json) {
        ordered_json arr = ordered_json::array();
        for (const auto& c : checks) {
            ordered_json j;
            j["name"] = c.name;
            j["pass"] = c.pass;
            j["discrepancy"] = c.discrepancy;
            j["tolerance"] = c.tolerance;
            j["detail"] = c.detail;
            arr.push_back(j);
            all_pass = all_pass && c.pass;
        }
        ordered_json out;
        out["command"] = "verify";
        out["seed"] = a.seed;
        out["fast"] = a.fast;
        out["generator"] = csl::noise_generator_name();
        out["checks"] = arr;
        out["pass"] = all_pass;
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& c : checks) {
            std::printf("%s %-34s %s (discrepancy %.3g, tol %.3g)\n",
                        c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str(),
                        c.discrepancy, c.tolerance);
            all_pass = all_pass && c.pass;
        }
        std::printf("%s (%zu checks, seed %llu, generator %s)\n",
                    all_pass ? "all oracles passed" : "ORACLE FAILURES", checks.size(),
                    static_cast<unsigned long long>(a.seed),
                    csl::noise_generator_name());
    }
    return all_pass ? exit_ok : exit_verification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CSL collapse-noise heating for Fermi gases and astrophysical "
                 "exclusion bounds"};
    app.set_version_flag("--version", CSLHEAT_VERSION);
    app.require_subcommand(1);

    HeatingArgs h;
    CLI::App* heating = app.add_subcommand(
        "heating", "Heating power for given collapse parameters");
    heating->add_option("--mass-kg", h.mass, "total mass [kg; accepts Msun]")
        ->required();
    heating->add_option("--lambda", h.lambda, "collapse rate [1/s]")->required();
    heating->add_option("--rc", h.rc, "correlation length [m]")->required();
    heating->add_option("--spectrum", h.spectrum,
                        "white|gauss:OMEGA|lorentz:OMEGA|file:PATH "
                        "(default: closed-form white)");
    heating->add_option("--kf", h.kf, "Fermi wavenumber [1/m] (default 0)");
    heating->add_option("--ma-kg", h.ma,
                        "constituent mass [kg; accepts Msun] (default neutron)");
    heating->add_option("--profile", h.profile, "constants profile: codata|paper");
    heating->add_option("--tol", h.tol, "quadrature relative tolerance");
    heating->add_flag("--json", h.json, "machine-readable output");

    TableArgs t;
    CLI::App* table =
        app.add_subcommand("table", "Bound ratios P/M and lambda/rc^2 per body");
    table->add_option("--catalog", t.catalog,
                      "catalog JSON (default: $CSLHEAT_CATALOG or builtin)");
    table->add_flag("--compare", t.compare,
                    "add published reference values and deviations");
    table->add_option("--out", t.out, "also write the table as CSV");
    table->add_option("--profile", t.profile, "constants profile: codata|paper");
    table->add_flag("--json", t.json, "machine-readable output");

    CurveArgs c;
    CLI::App* curve =
        app.add_subcommand("curve", "Exclusion curve lambda_max(rc) for one body");
    curve->add_option("--body", c.body, "catalog body name")->required();
    curve->add_option("--rc-min", c.rc_min, "smallest rc [m; accepts km]");
    curve->add_option("--rc-max", c.rc_max, "largest rc [m; accepts km]");
    curve->add_option("--points", c.points, "number of samples (>= 2)");
    curve->add_option("--out", c.out, "output file")->required();
    curve->add_option("--format", c.format, "csv|json (default csv)");
    curve->add_option("--overlay", c.overlay,
                      "overlay polyline JSON, copied through (json format only)");
    curve->add_option("--power-path", c.power_path,
                      "radiated-power source: auto|ppm|sb");
    curve->add_option("--catalog", c.catalog,
                      "catalog JSON (default: $CSLHEAT_CATALOG or builtin)");
    curve->add_option("--profile", c.profile, "constants profile: codata|paper");

    VerifyArgs v;
    CLI::App* verify =
        app.add_subcommand("verify", "Run the built-in oracle suite");
    verify->add_option("--seed", v.seed, "Monte Carlo seed");
    verify->add_flag("--fast", v.fast,
                     "100x fewer realizations, 10x looser Monte Carlo tolerance");
    verify->add_flag("--json", v.json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*heating)
            return run_heating(h);
        if (*table)
            return run_table(t);
        if (*curve)
            return run_curve(c);
        if (*verify)
            return run_verify(v);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const csl::QuadratureError& e) {
        std::cerr << "error: " << e.what()
                  << " (best estimate " << e.best_estimate() << " W, bound "
                  << e.error_bound() << " W)\n";
        return exit_computation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_computation;
    }
    return exit_usage;
}

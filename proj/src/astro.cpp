#include "csl/astro.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace csl {

namespace {

using nlohmann::json;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

// nlohmann reports byte offsets; translate to a line number for diagnostics.
std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n')
            ++line;
    return line;
}

} // namespace

void AstroBody::validate() const {
    if (name.empty())
        throw std::invalid_argument("body name must not be empty");
    if (!(mass > 0.0))
        throw std::invalid_argument("body '" + name + "': mass must be > 0");
    const bool has_sb = radius.has_value() && temperature.has_value();
    if (!has_sb && !power_per_mass.has_value())
        throw std::invalid_argument(
            "body '" + name +
            "': needs either power_per_mass or both radius and temperature");
    if (radius && !(*radius > 0.0))
        throw std::invalid_argument("body '" + name + "': radius must be > 0");
    // T = 0 is a valid limit (no emission).
    if (temperature && !(*temperature >= 0.0))
        throw std::invalid_argument("body '" + name + "': temperature must be >= 0");
    if (power_per_mass && !(*power_per_mass >= 0.0))
        throw std::invalid_argument("body '" + name +
                                    "': power_per_mass must be >= 0");
}

const char* power_path_name(PowerPath p) {
    switch (p) {
    case PowerPath::Auto: return "auto";
    case PowerPath::PowerPerMass: return "power-per-mass";
    case PowerPath::StefanBoltzmann: return "stefan-boltzmann";
    }
    return "?";
}

double radiated_power(const AstroBody& body, const PhysConstants& pc,
                      PowerPath path) {
    body.validate();
    const bool has_sb = body.radius.has_value() && body.temperature.has_value();
    const bool use_ppm =
        path == PowerPath::PowerPerMass ||
        (path == PowerPath::Auto && body.power_per_mass.has_value());

    if (use_ppm) {
        if (!body.power_per_mass)
            throw std::runtime_error("body '" + body.name +
                                     "' has no power_per_mass entry");
        return *body.power_per_mass * body.mass;
    }
    if (!has_sb)
        throw std::runtime_error("body '" + body.name +
                                 "' has no radius/temperature entry");
    const double r = *body.radius;
    const double t = *body.temperature;
    return 4.0 * M_PI * r * r * pc.sigma_sb * t * t * t * t;
}

double lambda_over_rc2(const AstroBody& body, const PhysConstants& pc,
                       PowerPath path) {
    const double ratio = radiated_power(body, pc, path) / body.mass;
    const double m0_over_hbar = pc.m0 / pc.hbar;
    return 4.0 / 3.0 * m0_over_hbar * m0_over_hbar * ratio;
}

double bound_lambda(const AstroBody& body, double rc, const PhysConstants& pc,
                    PowerPath path) {
    if (!(rc > 0.0))
        throw std::invalid_argument("bound_lambda requires rc > 0");
    return lambda_over_rc2(body, pc, path) * rc * rc;
}

BoundCurve exclusion_curve(const AstroBody& body, double rc_min, double rc_max,
                           std::size_t n_points, const PhysConstants& pc,
                           PowerPath path) {
    if (!(rc_min > 0.0) || !(rc_min < rc_max))
        throw std::invalid_argument("exclusion_curve requires 0 < rc_min < rc_max");
    if (n_points < 2)
        throw std::invalid_argument("exclusion_curve requires n_points >= 2");

    const double ratio = lambda_over_rc2(body, pc, path);
    const double log_lo = std::log(rc_min);
    const double log_hi = std::log(rc_max);

    BoundCurve curve;
    curve.body_name = body.name;
    curve.constants_profile = pc.profile_name();
    curve.generated_from =
        path != PowerPath::Auto
            ? path
            : (body.power_per_mass ? PowerPath::PowerPerMass
                                   : PowerPath::StefanBoltzmann);
    curve.points.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        double rc;
        if (i == 0)
            rc = rc_min;
        else if (i == n_points - 1)
            rc = rc_max;
        else {
            const double f =
                static_cast<double>(i) / static_cast<double>(n_points - 1);
            rc = std::exp(log_lo + f * (log_hi - log_lo));
        }
        curve.points.emplace_back(rc, ratio * rc * rc);
    }
    return curve;
}

std::vector<BoundTableRow> bound_table(const std::vector<AstroBody>& catalog,
                                       const PhysConstants& pc) {
    const auto& refs = published_lambda_over_rc2();
    std::vector<BoundTableRow> rows;
    rows.reserve(catalog.size());
    for (const AstroBody& body : catalog) {
        BoundTableRow row;
        row.name = body.name;
        try {
            const double power = radiated_power(body, pc);
            row.power_per_mass = power / body.mass;
            row.lambda_over_rc2 = lambda_over_rc2(body, pc);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        const auto it = std::find_if(refs.begin(), refs.end(), [&](const auto& r) {
            return lower(r.first) == lower(body.name);
        });
        if (it != refs.end())
            row.reference = it->second;
        rows.push_back(std::move(row));
    }
    return rows;
}

const std::vector<std::pair<std::string, double>>& published_lambda_over_rc2() {
    static const std::vector<std::pair<std::string, double>> values = {
        {"Mercury", 1.57e8},  {"Venus", 4.62e6},   {"Earth", 6.60e6},
        {"Moon", 5.12e7},     {"Mars", 8.10e6},    {"Jupiter", 9.14e4},
        {"Saturn", 6.40e4},   {"Uranus", 2.00e4},  {"Neptune", 6.57e3},
        {"Pluto", 4.98e4},    {"Sun", 6.29e10},    {"PSR J1840-1419", 9.43e7},
    };
    return values;
}

std::vector<AstroBody> builtin_catalog() {
    // Power-per-mass ratios are the published reference values; masses are
    // standard fact-sheet numbers and only convert ratios to absolute power.
    // The pulsar carries both representations: the published ratio and the
    // blackbody parameters (R = 10 km, T_eff = 0.28 MK) it was derived from.
    auto ppm = [](std::string name, double mass, double ratio) {
        AstroBody b;
        b.name = std::move(name);
        b.mass = mass;
        b.power_per_mass = ratio;
        return b;
    };
    std::vector<AstroBody> cat = {
        ppm("Mercury", 3.3010e23, 4.74e-7),
        ppm("Venus", 4.8673e24, 1.40e-8),
        ppm("Earth", 5.9722e24, 2.00e-8),
        ppm("Moon", 7.346e22, 1.55e-7),
        ppm("Mars", 6.4169e23, 2.45e-8),
        ppm("Jupiter", 1.89813e27, 2.76e-10),
        ppm("Saturn", 5.6832e26, 1.94e-10),
        ppm("Uranus", 8.6811e25, 6.03e-11),
        ppm("Neptune", 1.02409e26, 1.99e-11),
        ppm("Pluto", 1.303e22, 1.50e-10),
        ppm("Sun", 1.9885e30, 1.90e-4),
    };
    AstroBody ns;
    ns.name = "PSR J1840-1419";
    ns.mass = 2.0e30;
    ns.radius = 1.0e4;
    ns.temperature = 2.8e5;
    ns.power_per_mass = 2.85e-7;
    cat.push_back(std::move(ns));
    return cat;
}

std::vector<AstroBody> load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open catalog: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ":" +
                                 std::to_string(line_of_byte(text, e.byte)) +
                                 ": " + e.what());
    }
    if (!doc.is_array())
        throw std::runtime_error(path + ": catalog must be a JSON array of bodies");

    std::vector<AstroBody> catalog;
    catalog.reserve(doc.size());
    for (const auto& item : doc) {
        AstroBody b;
        try {
            b.name = item.at("name").get<std::string>();
            b.mass = item.at("mass_kg").get<double>();
            if (item.contains("radius_m"))
                b.radius = item["radius_m"].get<double>();
            if (item.contains("temperature_K"))
                b.temperature = item["temperature_K"].get<double>();
            if (item.contains("power_per_mass_W_per_kg"))
                b.power_per_mass = item["power_per_mass_W_per_kg"].get<double>();
        } catch (const json::exception& e) {
            throw std::runtime_error(path + ": malformed body entry: " + e.what());
        }
        b.validate();
        catalog.push_back(std::move(b));
    }
    return catalog;
}

const AstroBody& find_body(const std::vector<AstroBody>& catalog,
                           const std::string& name) {
    const std::string needle = lower(name);
    for (const AstroBody& b : catalog)
        if (lower(b.name) == needle)
            return b;

    std::ostringstream msg;
    msg << "unknown body '" << name << "'; catalog contains:";
    for (const AstroBody& b : catalog)
        msg << " '" << b.name << "'";
    throw std::runtime_error(msg.str());
}

std::vector<OverlayCurve> load_overlays(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open overlay file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ":" +
                                 std::to_string(line_of_byte(text, e.byte)) +
                                 ": " + e.what());
    }
    if (!doc.is_array())
        throw std::runtime_error(path + ": overlay file must be a JSON array");

    std::vector<OverlayCurve> overlays;
    for (const auto& item : doc) {
        OverlayCurve ov;
        try {
            ov.name = item.at("name").get<std::string>();
            for (const auto& pt : item.at("points")) {
                ov.points.emplace_back(pt.at(0).get<double>(),
                                       pt.at(1).get<double>());
            }
        } catch (const json::exception& e) {
            throw std::runtime_error(path + ": malformed overlay entry: " + e.what());
        }
        overlays.push_back(std::move(ov));
    }
    return overlays;
}

} // namespace csl

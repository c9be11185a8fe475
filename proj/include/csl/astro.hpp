#ifndef CSL_ASTRO_HPP
#define CSL_ASTRO_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csl/constants.hpp"

namespace csl {

/// Astrophysical body. Radiated power comes either from a measured
/// power-per-mass ratio or from blackbody surface emission (radius and
/// effective temperature); power_per_mass takes precedence when present.
struct AstroBody {
    std::string name;
    double mass = 0.0; // kg
    std::optional<double> radius;         // m
    std::optional<double> temperature;    // K
    std::optional<double> power_per_mass; // W/kg

    void validate() const; // throws std::invalid_argument
};

enum class PowerPath { Auto, PowerPerMass, StefanBoltzmann };

const char* power_path_name(PowerPath p);

/// Total radiated power [W]: power_per_mass * mass, or 4 pi R^2 sigma T^4
/// for a spherical blackbody. Throws std::runtime_error naming the body if
/// the requested data path is unavailable.
double radiated_power(const AstroBody& body, const PhysConstants& pc,
                      PowerPath path = PowerPath::Auto);

/// Collapse-rate bound per rc^2 [1/(s m^2)] from the thermal balance
/// P_rad = P_CSL:  lambda / rc^2 = (4/3) (m0/hbar)^2 P_rad / M.
double lambda_over_rc2(const AstroBody& body, const PhysConstants& pc,
                       PowerPath path = PowerPath::Auto);

/// Upper bound on the collapse rate at correlation length rc [1/s].
double bound_lambda(const AstroBody& body, double rc, const PhysConstants& pc,
                    PowerPath path = PowerPath::Auto);

/// Sampled exclusion boundary lambda_max(rc), a pure rc^2 power law.
struct BoundCurve {
    std::string body_name;
    std::vector<std::pair<double, double>> points; // (rc [m], lambda_max [1/s])
    std::string constants_profile;
    PowerPath generated_from = PowerPath::Auto;
};

// Logarithmically spaced rc grid in [rc_min, rc_max] with n_points >= 2.
BoundCurve exclusion_curve(const AstroBody& body, double rc_min, double rc_max,
                           std::size_t n_points, const PhysConstants& pc,
                           PowerPath path = PowerPath::Auto);

struct BoundTableRow {
    std::string name;
    double power_per_mass = 0.0;   // W/kg, as used for the bound
    double lambda_over_rc2 = 0.0;  // 1/(s m^2)
    std::optional<double> reference; // published lambda/rc^2, when known
    std::string error;             // per-row failure, empty on success
    bool ok() const { return error.empty(); }
};

/// Bound ratios for every catalog body; rows that cannot be computed carry
/// an error message instead of aborting the table.
std::vector<BoundTableRow> bound_table(const std::vector<AstroBody>& catalog,
                                       const PhysConstants& pc);

/// Published reference values of lambda/rc^2 [1/(s m^2)] for the shipped
/// catalog bodies, keyed by name. Used for the --compare column.
const std::vector<std::pair<std::string, double>>& published_lambda_over_rc2();

// The twelve-body catalog shipped with the tool (solar-system bodies, the
// Sun, the Moon, and the pulsar PSR J1840-1419).
std::vector<AstroBody> builtin_catalog();

// JSON catalog: array of {name, mass_kg, radius_m?, temperature_K?,
// power_per_mass_W_per_kg?}. Parse errors are fatal and carry line numbers.
std::vector<AstroBody> load_catalog(const std::string& path);

const AstroBody& find_body(const std::vector<AstroBody>& catalog,
                           const std::string& name); // case-insensitive

/// Static overlay polylines (named (rc, lambda) curves from external
/// sources), passed through to plot exports and never computed here.
struct OverlayCurve {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

std::vector<OverlayCurve> load_overlays(const std::string& path);

} // namespace csl

#endif

#ifndef CSL_CONSTANTS_HPP
#define CSL_CONSTANTS_HPP

#include <string_view>

namespace csl {

// CODATA 2018 recommended values, SI.
inline constexpr double hbar_si          = 1.054571817e-34;   // J s
inline constexpr double sigma_sb_codata  = 5.670374419e-8;    // W m^-2 K^-4
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double proton_mass      = 1.67262192369e-27; // kg
inline constexpr double neutron_mass     = 1.67492749804e-27; // kg

enum class ConstantsProfile { Codata, Paper };

/// Constants bundle passed explicitly into every top-level computation.
///
/// Two profiles are provided: full-precision CODATA values, and a "paper"
/// profile using the rounded Stefan constant (5.6e-8) and nucleon mass
/// (1.66054e-27 kg) that published reference bounds were derived with.
struct PhysConstants {
    double hbar;     // J s
    double sigma_sb; // W m^-2 K^-4
    double m0;       // kg, nucleon reference mass in the CSL mass coupling
    ConstantsProfile profile;

    static PhysConstants codata(double nucleon_mass = atomic_mass_unit);
    static PhysConstants paper();
    // Accepts "codata" or "paper".
    static PhysConstants from_name(std::string_view name);

    const char* profile_name() const;
};

/// Collapse-model parameters: rate lambda [1/s] and correlation length rc [m].
/// Construction enforces lambda >= 0 and rc > 0.
struct CollapseParams {
    double lambda;
    double rc;
    CollapseParams(double lambda_, double rc_);
};

// gamma = lambda (sqrt(4 pi) rc)^3, the white-noise collapse strength [m^3/s].
double white_collapse_strength(const CollapseParams& p);

// Finite-time representation of the energy-conserving delta:
// sin(dw t/2) / (pi dw), with the analytic limit t/(2 pi) at dw = 0.
// It satisfies  int_0^t exp(i dw s) ds = 2 pi exp(i dw t/2) delta_t(dw).
double finite_time_delta(double delta_omega, double t);

} // namespace csl

#endif

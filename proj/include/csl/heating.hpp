#ifndef CSL_HEATING_HPP
#define CSL_HEATING_HPP

#include <cstddef>

#include "csl/constants.hpp"
#include "csl/noise.hpp"

namespace csl {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
    double norm2() const { return x * x + y * y + z * z; }
};

enum class OccupationModel { ZeroTemperatureStep, SingleMomentum };

/// Free gas of identical fermions: constituent mass m_A, total mass, and
/// the initial-momentum occupation. The zero-temperature step occupation is
/// the normalized density p(k) = 3 k^2 / k_F^3 on [0, k_F].
struct FermiGas {
    double constituent_mass = 0.0; // kg
    double total_mass = 0.0;       // kg
    OccupationModel occupation = OccupationModel::SingleMomentum;
    double fermi_k = 0.0;          // 1/m, ZeroTemperatureStep
    double momentum = 0.0;         // 1/m, SingleMomentum

    // k_fermi == 0 degenerates to a single particle at rest.
    static FermiGas degenerate(double m_a, double k_fermi, double m_total);
    static FermiGas single_momentum(double m_a, double k, double m_total);

    double particle_count() const { return total_mass / constituent_mass; }
};

enum class HeatingMethod { ClosedFormWhite, ColoredQuadrature, DiscreteBoxSum };

struct HeatingResult {
    double power = 0.0;              // W
    double per_particle_power = 0.0; // W
    HeatingMethod method = HeatingMethod::ClosedFormWhite;
    double quadrature_error = 0.0;   // W, 0 for the closed form
};

const char* heating_method_name(HeatingMethod m);

// Energy transfer frequency for momentum kick q on initial momentum k_i:
// (hbar / 2 m_A) (q^2 + 2 k_i . q).
double transition_frequency(const Vec3& q, const Vec3& k_i, double m_a,
                            double hbar = hbar_si);

/// White-noise closed form: P = (3/4) hbar^2 lambda M / (m0^2 rc^2).
/// The total power is independent of the constituent mass; it only sets the
/// per-particle split and defaults to m0 when not given.
HeatingResult heating_power_white(double total_mass, const CollapseParams& p,
                                  const PhysConstants& pc,
                                  double constituent_mass = 0.0);

struct HeatingQuadrature {
    double rel_tol = 1e-8;       // on the per-particle power
    double q_max_over_rc = 8.0;  // Gaussian-envelope truncation of |q|
    std::size_t max_intervals = 4096;
};

/// General colored-noise heating power of the gas,
///   P/N = (m_A/m0)^2 (2 pi)^-3 < int d3q  hbar wbar e^{-q^2 rc^2} gamma(wbar) >,
/// averaged over the occupation. The 3D q-integral reduces by azimuthal
/// symmetry to (|q|, mu = cos theta) and the occupation average adds a third
/// level; all three are adaptive Gauss-Kronrod with nested tolerances.
/// Throws QuadratureError (best estimate and bound attached) on
/// non-convergence at the requested tolerance.
HeatingResult heating_power_colored(const FermiGas& gas, const NoiseSpectrum& spec,
                                    const CollapseParams& p, const PhysConstants& pc,
                                    const HeatingQuadrature& cfg = {});

struct BoxSumOptions {
    double q_max_over_rc = 8.0;      // truncation ball radius around p, units 1/rc
    bool include_pauli_term = false; // subtract the occupied-final-state term
    bool occupation_average = false; // average p over the filled Fermi sea
    double fermi_k = 0.0;            // 1/m, used by the two options above
};

struct BoxSumResult {
    double power = 0.0;            // W
    double truncation_bound = 0.0; // W, bound on the discarded |k - p| > q_max modes
    double pauli_term = 0.0;       // W, the subtracted blocking term (if requested)
};

/// Discrete box-mode counterpart of the white-noise heating rate for one
/// initial momentum p in a periodic box of side L:
///   (gamma / L^3) sum_k exp(-(p-k)^2 rc^2) (E_k - E_p),  k = (2 pi / L) n.
/// Converges to 3 hbar^2 lambda / (4 m rc^2) as L grows. The sum runs over
/// a ball |k - p| <= q_max; the Gaussian-tail bound on the discarded modes
/// is reported. Boxes smaller than 10 rc are rejected.
///
/// With occupation_average the initial momentum is averaged uniformly over
/// the grid states inside the Fermi sphere (the p argument is ignored);
/// with include_pauli_term, transitions into occupied final states are
/// removed and the subtracted term is reported separately.
BoxSumResult discrete_box_sum(const Vec3& p, double box_side,
                              const CollapseParams& params, double constituent_mass,
                              const PhysConstants& pc, const BoxSumOptions& opt = {});

} // namespace csl

#endif

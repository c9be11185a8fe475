#ifndef CSL_NOISE_HPP
#define CSL_NOISE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace csl {

enum class SpectrumKind { White, GaussianCutoff, Lorentzian, Tabulated };

/// Frequency-dependent collapse strength gamma(omega) [m^3/s], even in omega
/// and nonnegative. Analytic variants are even by construction; tabulated
/// data is stored on a nonnegative grid and queried through |omega|.
class NoiseSpectrum {
  public:
    struct Sample {
        double gamma = 0.0;
        bool extrapolated = false; // tabulated query outside the grid range
    };

    static NoiseSpectrum white(double gamma0);
    static NoiseSpectrum gaussian_cutoff(double gamma0, double omega_cutoff);
    static NoiseSpectrum lorentzian(double gamma0, double omega_cutoff);
    // Grid of (omega >= 0, gamma >= 0) pairs, omega strictly increasing;
    // values are linearly interpolated in |omega|.
    static NoiseSpectrum tabulated(std::vector<double> omega, std::vector<double> gamma);
    // Two-column CSV (omega_rad_per_s, gamma_m3_per_s) with a header row.
    static NoiseSpectrum tabulated_from_csv(const std::string& path);

    Sample evaluate(double omega) const;
    double operator()(double omega) const { return evaluate(omega).gamma; }

    SpectrumKind kind() const { return kind_; }
    double gamma0() const { return gamma0_; }
    double omega_cutoff() const; // GaussianCutoff / Lorentzian only
    // Representative magnitude of gamma (peak value), for tolerance scaling.
    double strength_scale() const;

    // Largest |omega| the spectrum represents faithfully: the grid range for
    // tabulated data, infinity otherwise.
    double max_resolved_omega() const;
    // Frequency scale above which gamma is negligible (used for sampling-rate
    // checks); infinity for the white spectrum.
    double effective_cutoff() const;

    const char* kind_name() const;

  private:
    NoiseSpectrum() = default;
    SpectrumKind kind_ = SpectrumKind::White;
    double gamma0_ = 0.0;
    double omega_c_ = 0.0;
    std::vector<double> grid_omega_;
    std::vector<double> grid_gamma_;
};

// Normalized Gaussian mass-smearing kernel, exp(-r^2/2 rc^2)/(sqrt(2 pi) rc)^3.
double smearing_kernel_g(double r, double rc);
// Normalized noise-correlation kernel, exp(-r^2/4 rc^2)/(sqrt(4 pi) rc)^3.
double smearing_kernel_f(double r, double rc);

/// One scalar noise mode sampled on a uniform time grid.
struct NoiseTrajectory {
    double dt = 0.0;
    std::vector<double> samples;
    std::uint64_t seed = 0;
};

// Name of the generator scheme, recorded in outputs for reproducibility.
const char* noise_generator_name();

/// Stationary real Gaussian process whose spectral density is gamma(omega):
/// independent Gaussian Fourier amplitudes with variance proportional to
/// gamma(omega_k), assembled with Hermitian symmetry and inverse-FFT'd.
/// Internally synthesized on a power-of-two grid of at least n_samples
/// points and truncated. Rejects under-resolved spectra (dt * cutoff >= 0.1).
NoiseTrajectory synthesize_noise(const NoiseSpectrum& spec, double dt,
                                 std::size_t n_samples, std::uint64_t seed);

struct CorrelatorReport {
    double omega = 0.0;       // probe frequency actually used (grid-aligned)
    double empirical = 0.0;   // E[|int_0^t e^{i omega s} w(s) ds|^2] / t
    double target = 0.0;      // gamma(omega)
    double rel_error = 0.0;
    double std_error = 0.0;   // standard error of the empirical mean
    std::size_t realizations = 0;
    bool converged = false;   // |empirical - target| <= 5 std_error
};

/// Monte Carlo check of the correlator contract: the mean squared windowed
/// Fourier integral of the synthesized noise, divided by t, must reproduce
/// gamma(omega). The probe is snapped to the nearest synthesis grid
/// frequency (multiples of 2 pi / t) where the estimator is unbiased.
CorrelatorReport verify_correlator(const NoiseSpectrum& spec, double omega_probe,
                                   double t, std::size_t n_realizations,
                                   std::uint64_t seed);

/// Same check for several probe frequencies, sharing the synthesized
/// trajectories across probes (each estimate stays unbiased).
std::vector<CorrelatorReport> verify_correlator_grid(
    const NoiseSpectrum& spec, const std::vector<double>& omega_probes, double t,
    std::size_t n_realizations, std::uint64_t seed);

} // namespace csl

#endif

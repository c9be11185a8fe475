#include "csl/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "csl/fft.hpp"

namespace csl {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void check_nonneg_strength(double gamma0) {
    if (!(gamma0 >= 0.0))
        throw std::invalid_argument("spectrum strength gamma0 must be >= 0");
}

void check_cutoff(double omega_c) {
    if (!(omega_c > 0.0))
        throw std::invalid_argument("spectrum cutoff frequency must be > 0");
}

std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed + 0x9E3779B97F4A7C15ull * (stream + 1));
}

// Standard normals from mt19937_64 via Box-Muller on 53-bit uniforms; the
// whole chain is pinned so trajectories are bit-identical across platforms.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 =
            (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; // (0,1]
        const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53; // [0,1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace

NoiseSpectrum NoiseSpectrum::white(double gamma0) {
    check_nonneg_strength(gamma0);
    NoiseSpectrum s;
    s.kind_ = SpectrumKind::White;
    s.gamma0_ = gamma0;
    return s;
}

NoiseSpectrum NoiseSpectrum::gaussian_cutoff(double gamma0, double omega_cutoff) {
    check_nonneg_strength(gamma0);
    check_cutoff(omega_cutoff);
    NoiseSpectrum s;
    s.kind_ = SpectrumKind::GaussianCutoff;
    s.gamma0_ = gamma0;
    s.omega_c_ = omega_cutoff;
    return s;
}

NoiseSpectrum NoiseSpectrum::lorentzian(double gamma0, double omega_cutoff) {
    check_nonneg_strength(gamma0);
    check_cutoff(omega_cutoff);
    NoiseSpectrum s;
    s.kind_ = SpectrumKind::Lorentzian;
    s.gamma0_ = gamma0;
    s.omega_c_ = omega_cutoff;
    return s;
}

NoiseSpectrum NoiseSpectrum::tabulated(std::vector<double> omega,
                                       std::vector<double> gamma) {
    if (omega.size() != gamma.size())
        throw std::invalid_argument("tabulated spectrum: omega/gamma size mismatch");
    if (omega.size() < 2)
        throw std::invalid_argument("tabulated spectrum needs at least 2 grid points");
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (!(omega[i] >= 0.0))
            throw std::invalid_argument("tabulated spectrum: omega must be >= 0");
        if (i > 0 && !(omega[i] > omega[i - 1]))
            throw std::invalid_argument(
                "tabulated spectrum: omega grid must be strictly increasing");
        if (!(gamma[i] >= 0.0))
            throw std::invalid_argument("tabulated spectrum: gamma must be >= 0");
    }
    NoiseSpectrum s;
    s.kind_ = SpectrumKind::Tabulated;
    s.gamma0_ = gamma.front();
    s.grid_omega_ = std::move(omega);
    s.grid_gamma_ = std::move(gamma);
    return s;
}

NoiseSpectrum NoiseSpectrum::tabulated_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open spectrum file: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty file (header row required)");
    {
        // The first row must be a header, not data.
        std::istringstream probe(line);
        double a = 0.0;
        if (probe >> a)
            throw std::runtime_error(path + ":1: header row required");
    }

    std::vector<double> w, g;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double wi = 0.0, gi = 0.0;
        if (!(row >> wi >> gi))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected two numeric columns");
        w.push_back(wi);
        g.push_back(gi);
    }
    try {
        return tabulated(std::move(w), std::move(g));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

NoiseSpectrum::Sample NoiseSpectrum::evaluate(double omega) const {
    const double w = std::abs(omega);
    switch (kind_) {
    case SpectrumKind::White:
        return {gamma0_, false};
    case SpectrumKind::GaussianCutoff: {
        const double x = w / omega_c_;
        return {gamma0_ * std::exp(-x * x), false};
    }
    case SpectrumKind::Lorentzian:
        return {gamma0_ * omega_c_ * omega_c_ / (w * w + omega_c_ * omega_c_), false};
    case SpectrumKind::Tabulated: {
        if (w < grid_omega_.front() || w > grid_omega_.back())
            return {0.0, true};
        const auto it =
            std::upper_bound(grid_omega_.begin(), grid_omega_.end(), w);
        const std::size_t hi = std::min<std::size_t>(
            static_cast<std::size_t>(it - grid_omega_.begin()),
            grid_omega_.size() - 1);
        const std::size_t lo = hi - 1;
        const double f =
            (w - grid_omega_[lo]) / (grid_omega_[hi] - grid_omega_[lo]);
        return {grid_gamma_[lo] + f * (grid_gamma_[hi] - grid_gamma_[lo]), false};
    }
    }
    return {0.0, true};
}

double NoiseSpectrum::omega_cutoff() const {
    if (kind_ != SpectrumKind::GaussianCutoff && kind_ != SpectrumKind::Lorentzian)
        throw std::logic_error("omega_cutoff() is defined for cutoff spectra only");
    return omega_c_;
}

double NoiseSpectrum::max_resolved_omega() const {
    return kind_ == SpectrumKind::Tabulated ? grid_omega_.back() : inf;
}

double NoiseSpectrum::strength_scale() const {
    if (kind_ == SpectrumKind::Tabulated)
        return *std::max_element(grid_gamma_.begin(), grid_gamma_.end());
    return gamma0_;
}

double NoiseSpectrum::effective_cutoff() const {
    switch (kind_) {
    case SpectrumKind::White:
        return inf;
    case SpectrumKind::GaussianCutoff:
    case SpectrumKind::Lorentzian:
        return omega_c_;
    case SpectrumKind::Tabulated: {
        const double peak =
            *std::max_element(grid_gamma_.begin(), grid_gamma_.end());
        if (peak <= 0.0)
            return grid_omega_.front();
        double w = grid_omega_.front();
        for (std::size_t i = 0; i < grid_omega_.size(); ++i)
            if (grid_gamma_[i] > 1e-6 * peak)
                w = grid_omega_[i];
        return w;
    }
    }
    return inf;
}

const char* NoiseSpectrum::kind_name() const {
    switch (kind_) {
    case SpectrumKind::White: return "white";
    case SpectrumKind::GaussianCutoff: return "gaussian-cutoff";
    case SpectrumKind::Lorentzian: return "lorentzian";
    case SpectrumKind::Tabulated: return "tabulated";
    }
    return "?";
}

double smearing_kernel_g(double r, double rc) {
    if (!(rc > 0.0))
        throw std::invalid_argument("smearing kernel requires rc > 0");
    const double norm = std::pow(std::sqrt(2.0 * M_PI) * rc, 3.0);
    return std::exp(-r * r / (2.0 * rc * rc)) / norm;
}

double smearing_kernel_f(double r, double rc) {
    if (!(rc > 0.0))
        throw std::invalid_argument("smearing kernel requires rc > 0");
    const double norm = std::pow(std::sqrt(4.0 * M_PI) * rc, 3.0);
    return std::exp(-r * r / (4.0 * rc * rc)) / norm;
}

const char* noise_generator_name() {
    return "mt19937_64/splitmix64-substreams/box-muller";
}

NoiseTrajectory synthesize_noise(const NoiseSpectrum& spec, double dt,
                                 std::size_t n_samples, std::uint64_t seed) {
    if (!(dt > 0.0))
        throw std::invalid_argument("synthesize_noise requires dt > 0");
    if (n_samples < 2)
        throw std::invalid_argument("synthesize_noise requires n_samples >= 2");
    const double cutoff = spec.effective_cutoff();
    if (std::isfinite(cutoff) && dt * cutoff >= 0.1) {
        std::ostringstream msg;
        msg << "under-resolved spectrum: dt * cutoff = " << dt * cutoff
            << " (need < 0.1); reduce dt below " << 0.1 / cutoff << " s";
        throw std::invalid_argument(msg.str());
    }

    const std::size_t n = next_power_of_two(n_samples);
    const double domega = 2.0 * M_PI / (static_cast<double>(n) * dt);

    GaussianStream gauss(substream_seed(seed, 0));
    std::vector<std::complex<double>> amp(n);

    auto sigma = [&](std::size_t k) {
        const double w = domega * static_cast<double>(std::min(k, n - k));
        return std::sqrt(static_cast<double>(n) * spec(w) / dt);
    };

    amp[0] = sigma(0) * gauss.next();
    const double rt2inv = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 1; k < n / 2; ++k) {
        const double s = sigma(k) * rt2inv;
        const std::complex<double> z(s * gauss.next(), s * gauss.next());
        amp[k] = z;
        amp[n - k] = std::conj(z);
    }
    amp[n / 2] = sigma(n / 2) * gauss.next();

    fft(amp, /*inverse=*/true);

    NoiseTrajectory traj;
    traj.dt = dt;
    traj.seed = seed;
    traj.samples.resize(n_samples);
    for (std::size_t j = 0; j < n_samples; ++j)
        traj.samples[j] = amp[j].real();
    return traj;
}

std::vector<CorrelatorReport> verify_correlator_grid(
    const NoiseSpectrum& spec, const std::vector<double>& omega_probes, double t,
    std::size_t n_realizations, std::uint64_t seed) {
    if (!(t > 0.0))
        throw std::invalid_argument("verify_correlator requires t > 0");
    if (n_realizations < 2)
        throw std::invalid_argument("verify_correlator requires n_realizations >= 2");
    if (omega_probes.empty())
        throw std::invalid_argument("verify_correlator requires at least one probe");

    const double cutoff = spec.effective_cutoff();
    const double omega_top =
        std::abs(*std::max_element(omega_probes.begin(), omega_probes.end(),
                                   [](double a, double b) {
                                       return std::abs(a) < std::abs(b);
                                   }));
    double dt = t / 16.0;
    if (std::isfinite(cutoff))
        dt = std::min(dt, 0.05 / cutoff);
    if (omega_top != 0.0)
        dt = std::min(dt, 0.25 * M_PI / omega_top);

    const std::size_t n =
        next_power_of_two(static_cast<std::size_t>(std::ceil(t / dt)));
    if (n > (std::size_t{1} << 22))
        throw std::invalid_argument(
            "verify_correlator: probe window too long for the required sampling "
            "rate (> 2^22 samples)");
    dt = t / static_cast<double>(n);

    // Snap the probes to the synthesis frequency grid, where the windowed
    // estimator is unbiased.
    const double domega = 2.0 * M_PI / t;
    std::vector<double> omegas(omega_probes.size());
    for (std::size_t i = 0; i < omega_probes.size(); ++i)
        omegas[i] = domega * std::round(std::abs(omega_probes[i]) / domega);

    std::vector<double> mean(omegas.size(), 0.0);
    std::vector<double> m2(omegas.size(), 0.0);
    for (std::size_t r = 0; r < n_realizations; ++r) {
        const NoiseTrajectory traj =
            synthesize_noise(spec, dt, n, substream_seed(seed, r + 1));

        for (std::size_t i = 0; i < omegas.size(); ++i) {
            // z = dt * sum_j w_j exp(i omega j dt), by phase recurrence.
            const double omega = omegas[i];
            const std::complex<double> step(std::cos(omega * dt),
                                            std::sin(omega * dt));
            std::complex<double> phase(1.0, 0.0);
            std::complex<double> z(0.0, 0.0);
            for (std::size_t j = 0; j < traj.samples.size(); ++j) {
                z += traj.samples[j] * phase;
                phase *= step;
                if ((j & 0xFFF) == 0xFFF)
                    phase /= std::abs(phase);
            }
            z *= dt;

            const double v = std::norm(z) / t;
            const double delta = v - mean[i];
            mean[i] += delta / static_cast<double>(r + 1);
            m2[i] += delta * (v - mean[i]);
        }
    }

    std::vector<CorrelatorReport> reports(omegas.size());
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        CorrelatorReport& rep = reports[i];
        rep.omega = omegas[i];
        rep.empirical = mean[i];
        rep.target = spec(omegas[i]);
        rep.std_error = std::sqrt(
            m2[i] / (static_cast<double>(n_realizations - 1) *
                     static_cast<double>(n_realizations)));
        rep.rel_error = rep.target != 0.0
                            ? (rep.empirical - rep.target) / rep.target
                            : (rep.empirical == 0.0 ? 0.0 : inf);
        rep.realizations = n_realizations;
        rep.converged =
            std::abs(rep.empirical - rep.target) <= 5.0 * rep.std_error;
    }
    return reports;
}

CorrelatorReport verify_correlator(const NoiseSpectrum& spec, double omega_probe,
                                   double t, std::size_t n_realizations,
                                   std::uint64_t seed) {
    return verify_correlator_grid(spec, {omega_probe}, t, n_realizations,
                                  seed)[0];
}

} // namespace csl

#include "csl/heating.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "csl/quadrature.hpp"

namespace csl {

namespace {

void check_gas(const FermiGas& g) {
    if (!(g.constituent_mass > 0.0))
        throw std::invalid_argument("constituent mass must be > 0");
    if (!(g.total_mass >= g.constituent_mass))
        throw std::invalid_argument("total mass must be >= constituent mass");
    if (!(g.fermi_k >= 0.0) || !(g.momentum >= 0.0))
        throw std::invalid_argument("momenta must be >= 0");
}

struct LevelStats {
    double worst_rel = 0.0;
    bool converged = true;
    // scale_hint: natural magnitude to measure the error against (defaults
    // to the integral's own value).
    void note(const QuadratureResult& r, double scale_hint = 0.0) {
        const double scale =
            std::max({std::abs(r.value), std::abs(scale_hint), 1e-300});
        worst_rel = std::max(worst_rel, r.error / scale);
        converged = converged && r.converged;
    }
};

} // namespace

FermiGas FermiGas::degenerate(double m_a, double k_fermi, double m_total) {
    if (!(k_fermi >= 0.0))
        throw std::invalid_argument("Fermi wavenumber must be >= 0");
    FermiGas g;
    g.constituent_mass = m_a;
    g.total_mass = m_total;
    if (k_fermi > 0.0) {
        g.occupation = OccupationModel::ZeroTemperatureStep;
        g.fermi_k = k_fermi;
    } else {
        g.occupation = OccupationModel::SingleMomentum;
        g.momentum = 0.0;
    }
    check_gas(g);
    return g;
}

FermiGas FermiGas::single_momentum(double m_a, double k, double m_total) {
    FermiGas g;
    g.constituent_mass = m_a;
    g.total_mass = m_total;
    g.occupation = OccupationModel::SingleMomentum;
    g.momentum = k;
    check_gas(g);
    return g;
}

const char* heating_method_name(HeatingMethod m) {
    switch (m) {
    case HeatingMethod::ClosedFormWhite: return "closed-form-white";
    case HeatingMethod::ColoredQuadrature: return "colored-quadrature";
    case HeatingMethod::DiscreteBoxSum: return "discrete-box-sum";
    }
    return "?";
}

double transition_frequency(const Vec3& q, const Vec3& k_i, double m_a, double hbar) {
    if (!(m_a > 0.0))
        throw std::invalid_argument("transition_frequency requires m_a > 0");
    const double dot = q.x * k_i.x + q.y * k_i.y + q.z * k_i.z;
    return hbar / (2.0 * m_a) * (q.norm2() + 2.0 * dot);
}

HeatingResult heating_power_white(double total_mass, const CollapseParams& p,
                                  const PhysConstants& pc, double constituent_mass) {
    if (!(total_mass > 0.0))
        throw std::invalid_argument("total mass must be > 0");
    const double m_a = constituent_mass > 0.0 ? constituent_mass : pc.m0;
    HeatingResult r;
    r.power = 0.75 * pc.hbar * pc.hbar * p.lambda * total_mass /
              (pc.m0 * pc.m0 * p.rc * p.rc);
    r.per_particle_power = r.power * m_a / total_mass;
    r.method = HeatingMethod::ClosedFormWhite;
    r.quadrature_error = 0.0;
    return r;
}

HeatingResult heating_power_colored(const FermiGas& gas, const NoiseSpectrum& spec,
                                    const CollapseParams& p, const PhysConstants& pc,
                                    const HeatingQuadrature& cfg) {
    check_gas(gas);
    if (!(cfg.rel_tol > 0.0) || cfg.rel_tol > 1e-2)
        throw std::invalid_argument("heating quadrature rel_tol must be in (0, 1e-2]");
    if (!(cfg.q_max_over_rc > 0.0))
        throw std::invalid_argument("q_max_over_rc must be > 0");

    const double a = pc.hbar / (2.0 * gas.constituent_mass);
    const double q_max = cfg.q_max_over_rc / p.rc;
    const double k_top = gas.occupation == OccupationModel::ZeroTemperatureStep
                             ? gas.fermi_k
                             : gas.momentum;

    if (spec.kind() == SpectrumKind::Tabulated) {
        const double wbar_max = a * (q_max * q_max + 2.0 * k_top * q_max);
        if (wbar_max > spec.max_resolved_omega()) {
            std::ostringstream msg;
            msg << "tabulated spectrum covers |omega| <= " << spec.max_resolved_omega()
                << " rad/s but the heating integrand reaches " << wbar_max
                << " rad/s; extend the table";
            throw std::invalid_argument(msg.str());
        }
    }

    LevelStats inner_stats, mid_stats, outer_stats;
    const double mu_rel = cfg.rel_tol * 1e-2;
    const double q_rel = cfg.rel_tol * 1e-1;

    const double rc2 = p.rc * p.rc;
    const double strength = spec.strength_scale();

    // Natural magnitude of the q-integral for a momentum-k particle, from
    // the flat-spectrum envelope; used as an absolute tolerance floor so
    // that strongly suppressed spectra (integrals far below this scale)
    // terminate instead of chasing an unreachable relative tolerance.
    auto q_scale = [&](double k) {
        return pc.hbar * a * strength *
               (3.0 * std::sqrt(M_PI) / (8.0 * p.rc) + k) /
               (rc2 * rc2);
    };

    auto q_integral = [&](double k) {
        auto q_integrand = [&](double q) {
            // The +-mu contributions are integrated as a pair: the odd part
            // of wbar cancels analytically, so the pairing removes the large
            // cancelling 2kq term from the quadrature's error scale.
            auto pair_integrand = [&](double mu) {
                const double wp = a * (q * q + 2.0 * k * q * mu);
                const double wm = a * (q * q - 2.0 * k * q * mu);
                return pc.hbar * (wp * spec(wp) + wm * spec(wm));
            };
            const double mu_scale =
                pc.hbar * a * (q * q + 2.0 * k * q) * strength;
            QuadratureResult mu_res;
            if (k * q == 0.0) {
                mu_res.value = pair_integrand(0.0);
                mu_res.converged = true;
            } else {
                // Absolute floor at the integrand's natural magnitude keeps
                // nearly-cancelling angular integrals from exhausting the
                // interval budget; the q^2 weight suppresses it downstream.
                QuadratureConfig mu_cfg{mu_rel, 0.0, cfg.max_intervals};
                mu_cfg.abs_tol = mu_rel * mu_scale;
                mu_res = integrate_adaptive(pair_integrand, 0.0, 1.0, mu_cfg);
            }
            inner_stats.note(mu_res, mu_scale);
            return q * q * std::exp(-q * q * rc2) * mu_res.value;
        };
        QuadratureConfig q_cfg{q_rel, q_rel * q_scale(k), cfg.max_intervals};
        const QuadratureResult q_res = integrate_adaptive(q_integrand, 0.0, q_max, q_cfg);
        mid_stats.note(q_res, q_scale(k));
        return q_res;
    };

    double occupation_avg = 0.0;
    double outer_error = 0.0;
    if (gas.occupation == OccupationModel::SingleMomentum) {
        const QuadratureResult r = q_integral(gas.momentum);
        occupation_avg = r.value;
        outer_error = r.error;
    } else {
        const double kf3 = gas.fermi_k * gas.fermi_k * gas.fermi_k;
        auto k_integrand = [&](double k) {
            return 3.0 * k * k / kf3 * q_integral(k).value;
        };
        QuadratureConfig k_cfg{cfg.rel_tol, cfg.rel_tol * q_scale(gas.fermi_k),
                               cfg.max_intervals};
        const QuadratureResult r =
            integrate_adaptive(k_integrand, 0.0, gas.fermi_k, k_cfg);
        outer_stats.note(r, q_scale(gas.fermi_k));
        occupation_avg = r.value;
        outer_error = r.error;
    }

    const double mass_ratio = gas.constituent_mass / pc.m0;
    const double prefactor = mass_ratio * mass_ratio / (4.0 * M_PI * M_PI);
    const double per_particle = prefactor * occupation_avg;
    const double n_particles = gas.particle_count();

    HeatingResult res;
    res.method = HeatingMethod::ColoredQuadrature;
    res.per_particle_power = per_particle;
    res.power = per_particle * n_particles;
    const double combined_rel =
        inner_stats.worst_rel + mid_stats.worst_rel + outer_stats.worst_rel;
    res.quadrature_error =
        prefactor * n_particles * outer_error +
        std::abs(res.power) * (inner_stats.worst_rel + mid_stats.worst_rel);

    if (!inner_stats.converged || !mid_stats.converged || !outer_stats.converged) {
        std::ostringstream msg;
        msg << "colored heating quadrature did not reach rel_tol = " << cfg.rel_tol
            << " (combined relative error estimate " << combined_rel << ")";
        throw QuadratureError(msg.str(), res.power, res.quadrature_error);
    }
    return res;
}

namespace {

// exp(-a u^2) tail moments: int_Q^inf u^3 e^{-a u^2} du and the u^4 one.
double tail_u3(double q, double a) {
    return std::exp(-a * q * q) * (q * q / (2.0 * a) + 1.0 / (2.0 * a * a));
}

double tail_u4(double q, double a) {
    const double sa = std::sqrt(a);
    return 3.0 / (8.0 * a * a) * std::sqrt(M_PI / a) * std::erfc(sa * q) +
           std::exp(-a * q * q) * (q * q * q / (2.0 * a) + 3.0 * q / (4.0 * a * a));
}

struct AxisGrid {
    long n_lo = 0;
    long n_hi = 0;
    std::vector<double> weight; // exp(-(h n - p)^2 rc^2), n = n_lo..n_hi
    std::vector<double> coord;  // h n
};

AxisGrid make_axis(double p, double h, double q_max, double rc2) {
    AxisGrid g;
    g.n_lo = static_cast<long>(std::ceil((p - q_max) / h));
    g.n_hi = static_cast<long>(std::floor((p + q_max) / h));
    const std::size_t m = static_cast<std::size_t>(g.n_hi - g.n_lo + 1);
    g.weight.resize(m);
    g.coord.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double k = h * static_cast<double>(g.n_lo + static_cast<long>(i));
        const double d = k - p;
        g.coord[i] = k;
        g.weight[i] = std::exp(-d * d * rc2);
    }
    return g;
}

// Kernel sum for one initial momentum p:
//   sum over grid k in the ball |k - p| <= q_max of w(k-p) (k^2 - p^2),
// optionally restricted to |k| > k_block (blocked part returned separately).
// The z axis is eliminated with prefix sums, leaving an O(N^2) sweep.
struct KernelSums {
    double full = 0.0;    // sum of w (k^2 - p^2) over the ball
    double blocked = 0.0; // same restricted to |k| <= k_block
};

KernelSums kernel_sums(const Vec3& p, double h, double q_max, double rc2,
                       double k_block) {
    const AxisGrid gx = make_axis(p.x, h, q_max, rc2);
    const AxisGrid gy = make_axis(p.y, h, q_max, rc2);
    const AxisGrid gz = make_axis(p.z, h, q_max, rc2);

    // Prefix sums over z of w and w k_z^2 (cum[i+1] accumulates entry i).
    const std::size_t mz = gz.weight.size();
    std::vector<double> cum0(mz + 1, 0.0), cum2(mz + 1, 0.0);
    for (std::size_t i = 0; i < mz; ++i) {
        cum0[i + 1] = cum0[i] + gz.weight[i];
        cum2[i + 1] = cum2[i] + gz.weight[i] * gz.coord[i] * gz.coord[i];
    }

    const double q2 = q_max * q_max;
    const double p2 = p.norm2();
    const double kb2 = k_block * k_block;

    auto range_sums = [&](double z_lo, double z_hi, double& s0, double& s2) {
        long lo = static_cast<long>(std::ceil(z_lo / h));
        long hi = static_cast<long>(std::floor(z_hi / h));
        lo = std::max(lo, gz.n_lo);
        hi = std::min(hi, gz.n_hi);
        if (lo > hi) {
            s0 = 0.0;
            s2 = 0.0;
            return;
        }
        const std::size_t a = static_cast<std::size_t>(lo - gz.n_lo);
        const std::size_t b = static_cast<std::size_t>(hi - gz.n_lo) + 1;
        s0 = cum0[b] - cum0[a];
        s2 = cum2[b] - cum2[a];
    };

    long double acc_full = 0.0L;
    long double acc_blocked = 0.0L;

    for (std::size_t i = 0; i < gx.weight.size(); ++i) {
        const double kx = gx.coord[i];
        const double dx2 = (kx - p.x) * (kx - p.x);
        if (dx2 > q2)
            continue;
        for (std::size_t j = 0; j < gy.weight.size(); ++j) {
            const double ky = gy.coord[j];
            const double dy2 = (ky - p.y) * (ky - p.y);
            const double r2 = q2 - dx2 - dy2;
            if (r2 < 0.0)
                continue;
            const double r = std::sqrt(r2);
            const double wxy = gx.weight[i] * gy.weight[j];
            const double kxy2 = kx * kx + ky * ky;

            double s0 = 0.0, s2 = 0.0;
            range_sums(p.z - r, p.z + r, s0, s2);
            acc_full += static_cast<long double>(wxy) * ((kxy2 - p2) * s0 + s2);

            if (k_block > 0.0) {
                const double srem = kb2 - kxy2;
                if (srem >= 0.0) {
                    const double sz = std::sqrt(srem);
                    // Intersection of the truncation ball with the Fermi sphere.
                    double b0 = 0.0, b2 = 0.0;
                    range_sums(std::max(p.z - r, -sz), std::min(p.z + r, sz), b0, b2);
                    acc_blocked +=
                        static_cast<long double>(wxy) * ((kxy2 - p2) * b0 + b2);
                }
            }
        }
    }

    return {static_cast<double>(acc_full), static_cast<double>(acc_blocked)};
}

} // namespace

BoxSumResult discrete_box_sum(const Vec3& p, double box_side,
                              const CollapseParams& params, double constituent_mass,
                              const PhysConstants& pc, const BoxSumOptions& opt) {
    if (!(constituent_mass > 0.0))
        throw std::invalid_argument("constituent mass must be > 0");
    if (!(box_side >= 10.0 * params.rc)) {
        std::ostringstream msg;
        msg << "box side " << box_side << " m is below 10 rc = " << 10.0 * params.rc
            << " m; the mode grid is too coarse";
        throw std::invalid_argument(msg.str());
    }
    if (!(opt.q_max_over_rc > 0.0))
        throw std::invalid_argument("q_max_over_rc must be > 0");
    if (!(opt.fermi_k >= 0.0))
        throw std::invalid_argument("fermi_k must be >= 0");
    if (opt.include_pauli_term && !opt.occupation_average && !(opt.fermi_k > 0.0))
        throw std::invalid_argument("include_pauli_term requires fermi_k > 0");

    const double h = 2.0 * M_PI / box_side;
    const double q_max = opt.q_max_over_rc / params.rc;
    const double rc2 = params.rc * params.rc;
    const double gamma = white_collapse_strength(params);
    const double energy_scale = pc.hbar * pc.hbar / (2.0 * constituent_mass);
    const double pref =
        gamma / (box_side * box_side * box_side) * energy_scale;
    const double k_block = opt.include_pauli_term ? opt.fermi_k : 0.0;

    double sum_full = 0.0;
    double sum_blocked = 0.0;
    double p_norm_max = 0.0;

    if (opt.occupation_average) {
        // Uniform average over the grid states inside the Fermi sphere.
        const long n_f = static_cast<long>(std::floor(opt.fermi_k / h));
        const double side = 2.0 * static_cast<double>(n_f) + 1.0;
        if (side * side * side > 4e5)
            throw std::invalid_argument(
                "occupation average over more than ~2e5 grid states requested; "
                "reduce fermi_k or the box size");
        const double kf2 = opt.fermi_k * opt.fermi_k;
        std::vector<Vec3> occupied;
        for (long nx = -n_f; nx <= n_f; ++nx)
            for (long ny = -n_f; ny <= n_f; ++ny)
                for (long nz = -n_f; nz <= n_f; ++nz) {
                    const Vec3 k{h * static_cast<double>(nx),
                                 h * static_cast<double>(ny),
                                 h * static_cast<double>(nz)};
                    if (k.norm2() <= kf2)
                        occupied.push_back(k);
                }

        long double acc_full = 0.0L, acc_blocked = 0.0L;
        for (const Vec3& pi : occupied) {
            const KernelSums s = kernel_sums(pi, h, q_max, rc2, k_block);
            acc_full += s.full;
            acc_blocked += s.blocked;
        }
        const double inv_n = 1.0 / static_cast<double>(occupied.size());
        sum_full = static_cast<double>(acc_full) * inv_n;
        sum_blocked = static_cast<double>(acc_blocked) * inv_n;
        p_norm_max = opt.fermi_k;
    } else {
        const KernelSums s = kernel_sums(p, h, q_max, rc2, k_block);
        sum_full = s.full;
        sum_blocked = s.blocked;
        p_norm_max = std::sqrt(p.norm2());
    }

    // Gaussian-tail bound on the discarded |k - p| > q_max modes, from the
    // continuum envelope |k^2 - p^2| <= u^2 + 2|p|u with u = |k - p|; the
    // factor 2 covers grid effects.
    const double tail =
        gamma * energy_scale / (2.0 * M_PI * M_PI) *
        (tail_u4(q_max, rc2) + 2.0 * p_norm_max * tail_u3(q_max, rc2)) * 2.0;

    BoxSumResult res;
    res.power = pref * (sum_full - sum_blocked);
    res.pauli_term = pref * sum_blocked;
    res.truncation_bound = tail;
    return res;
}

} // namespace csl

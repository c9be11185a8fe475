#include "csl/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "csl/constants.hpp"
#include "csl/heating.hpp"
#include "csl/noise.hpp"
#include "csl/quadrature.hpp"

namespace csl {

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

OracleCheck make_check(std::string name, double measured, double target,
                       double discrepancy, double tolerance) {
    OracleCheck c;
    c.name = std::move(name);
    c.detail = "measured=" + fmt(measured) + " target=" + fmt(target);
    c.discrepancy = discrepancy;
    c.tolerance = tolerance;
    c.pass = discrepancy <= tolerance;
    return c;
}

// Oscillatory integrals of the finite-time delta are summed panel by panel
// (one half-period of sin(w t/2) each) instead of letting the adaptive rule
// chase thousands of sign changes globally.
template <class F>
double integrate_panels(F&& f, double a, double b, double panel) {
    const QuadratureConfig cfg{1e-12, 0.0, 64};
    double sum = 0.0, comp = 0.0;
    double x = a;
    while (x < b) {
        const double hi = std::min(x + panel, b);
        const double v = integrate_adaptive(f, x, hi, cfg).value;
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        x = hi;
    }
    return sum;
}

OracleCheck check_delta_normalization() {
    const double t = 1.0;
    const std::size_t periods = 2000;
    const double width = 2.0 * M_PI / t; // half-period of sin(w t / 2)
    const double w_max = static_cast<double>(periods) * width;

    auto f = [t](double w) { return finite_time_delta(w, t); };
    const double core = 2.0 * integrate_panels(f, 0.0, w_max, width);
    // Tail of (2/pi) Si(x): pi/2 - Si(x) = cos(x)/x + sin(x)/x^2 + O(x^-3).
    const double x = 0.5 * w_max * t;
    const double tail = 2.0 / M_PI * (std::cos(x) / x + std::sin(x) / (x * x));
    const double total = core + tail;
    return make_check("finite-delta-normalization", total, 1.0,
                      std::abs(total - 1.0), 1e-6);
}

OracleCheck check_delta_evenness(std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(-1e4, 1e4);
    const double t = 3.7;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double w = u(eng);
        worst = std::max(worst, std::abs(finite_time_delta(w, t) -
                                         finite_time_delta(-w, t)));
    }
    return make_check("finite-delta-evenness", worst, 0.0, worst, 1e-18);
}

OracleCheck check_delta_squared_identity() {
    // f = exp(-w^2/2) with unit width; t = 1000 / width.
    const double t = 1e3;
    const double width = 2.0 * M_PI / t;
    auto gauss = [](double w) { return std::exp(-0.5 * w * w); };

    auto lhs_f = [&](double w) {
        const double d = finite_time_delta(w, t);
        return d * d * gauss(w);
    };
    auto rhs_f = [&](double w) { return finite_time_delta(w, t) * gauss(w); };

    const double lhs = 2.0 * integrate_panels(lhs_f, 0.0, 8.0, width);
    const double rhs =
        t / (2.0 * M_PI) * 2.0 * integrate_panels(rhs_f, 0.0, 8.0, width);
    const double rel = std::abs(lhs - rhs) / std::abs(rhs);
    return make_check("finite-delta-squared-identity", lhs, rhs, rel, 1e-2);
}

OracleCheck check_box_sum_convergence(const PhysConstants& pc) {
    const CollapseParams cp(1e-16, 1e-7);
    const double m = 1.675e-27;
    const double limit =
        3.0 * pc.hbar * pc.hbar * cp.lambda / (4.0 * m * cp.rc * cp.rc);
    const BoxSumResult r = discrete_box_sum({}, 200.0 * cp.rc, cp, m, pc);
    const double rel = std::abs(r.power - limit) / limit;
    return make_check("box-sum-convergence-200rc", r.power, limit, rel, 1e-2);
}

OracleCheck check_box_sum_p_independence(const PhysConstants& pc) {
    const CollapseParams cp(1e-16, 1e-7);
    const double m = 1.675e-27;
    const double limit =
        3.0 * pc.hbar * pc.hbar * cp.lambda / (4.0 * m * cp.rc * cp.rc);
    const Vec3 p{1e9 / std::sqrt(3.0), 1e9 / std::sqrt(3.0), 1e9 / std::sqrt(3.0)};
    const BoxSumResult r = discrete_box_sum(p, 200.0 * cp.rc, cp, m, pc);
    const double rel = std::abs(r.power - limit) / limit;
    return make_check("box-sum-momentum-independence", r.power, limit, rel, 1e-2);
}

OracleCheck check_pauli_cancellation(const PhysConstants& pc) {
    const CollapseParams cp(1e-16, 1e-7);
    const double m = 1.675e-27;
    const double box = 20.0 * cp.rc;
    BoxSumOptions opt;
    opt.occupation_average = true;
    opt.include_pauli_term = true;
    opt.fermi_k = 6.0 * 2.0 * M_PI / box;
    const BoxSumResult r = discrete_box_sum({}, box, cp, m, pc, opt);
    const double rel = std::abs(r.pauli_term) / std::abs(r.power);
    return make_check("pauli-blocking-cancellation", r.pauli_term, 0.0, rel, 1e-10);
}

void add_white_limit_checks(std::vector<OracleCheck>& out,
                            const PhysConstants& pc, bool fast) {
    struct Tuple {
        double m_a, k_f, lambda, rc;
    };
    const std::vector<Tuple> tuples = {
        {atomic_mass_unit, 0.0, 1e-16, 1e-7},
        {neutron_mass, 1e9, 1e-16, 1e-7},
        {10.0 * atomic_mass_unit, 1e8, 1e-12, 1e-6},
    };
    const std::size_t count = fast ? 1 : tuples.size();
    for (std::size_t i = 0; i < count; ++i) {
        const Tuple& tp = tuples[i];
        const CollapseParams cp(tp.lambda, tp.rc);
        const FermiGas gas = FermiGas::degenerate(tp.m_a, tp.k_f, 1.0);
        const NoiseSpectrum flat = NoiseSpectrum::white(white_collapse_strength(cp));
        const HeatingResult colored = heating_power_colored(gas, flat, cp, pc);
        const HeatingResult closed = heating_power_white(1.0, cp, pc);
        const double rel = std::abs(colored.power - closed.power) / closed.power;
        out.push_back(make_check("white-limit-equivalence-" + std::to_string(i + 1),
                                 colored.power, closed.power, rel, 1e-6));
    }
}

void add_correlator_checks(std::vector<OracleCheck>& out, std::uint64_t seed,
                           bool fast) {
    const std::size_t n_real = fast ? 40 : 4000;
    const double tol = fast ? 0.5 : 0.05;

    {
        const NoiseSpectrum spec = NoiseSpectrum::white(1.0);
        const CorrelatorReport r = verify_correlator(spec, 0.0, 0.5, n_real, seed);
        out.push_back(make_check("correlator-white-dc", r.empirical, r.target,
                                 std::abs(r.rel_error), tol));
    }
    {
        const NoiseSpectrum spec = NoiseSpectrum::gaussian_cutoff(1.0, 1e3);
        const CorrelatorReport r = verify_correlator(spec, 1e3, 0.5, n_real, seed);
        out.push_back(make_check("correlator-gaussian-at-cutoff", r.empirical,
                                 r.target, std::abs(r.rel_error), tol));
    }
}

} // namespace

std::vector<OracleCheck> verification_suite(const VerifyOptions& opt) {
    const PhysConstants pc = PhysConstants::codata();
    std::vector<OracleCheck> checks;
    checks.push_back(check_delta_normalization());
    checks.push_back(check_delta_evenness(opt.seed));
    checks.push_back(check_delta_squared_identity());
    checks.push_back(check_box_sum_convergence(pc));
    checks.push_back(check_box_sum_p_independence(pc));
    checks.push_back(check_pauli_cancellation(pc));
    add_white_limit_checks(checks, pc, opt.fast);
    add_correlator_checks(checks, opt.seed, opt.fast);
    return checks;
}

} // namespace csl

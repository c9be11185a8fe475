#include "csl/constants.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace csl {

namespace {

void check_positive(double v, const char* what) {
    if (!(v > 0.0))
        throw std::invalid_argument(std::string(what) + " must be strictly positive");
}

} // namespace

PhysConstants PhysConstants::codata(double nucleon_mass) {
    check_positive(nucleon_mass, "nucleon mass");
    return {hbar_si, sigma_sb_codata, nucleon_mass, ConstantsProfile::Codata};
}

PhysConstants PhysConstants::paper() {
    return {hbar_si, 5.6e-8, 1.66054e-27, ConstantsProfile::Paper};
}

PhysConstants PhysConstants::from_name(std::string_view name) {
    if (name == "codata") return codata();
    if (name == "paper") return paper();
    throw std::invalid_argument("unknown constants profile '" + std::string(name) +
                                "' (expected 'codata' or 'paper')");
}

const char* PhysConstants::profile_name() const {
    return profile == ConstantsProfile::Codata ? "codata" : "paper";
}

CollapseParams::CollapseParams(double lambda_, double rc_) : lambda(lambda_), rc(rc_) {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("collapse rate lambda must be >= 0");
    check_positive(rc, "correlation length rc");
}

double white_collapse_strength(const CollapseParams& p) {
    const double s = std::sqrt(4.0 * M_PI) * p.rc;
    return p.lambda * s * s * s;
}

double finite_time_delta(double delta_omega, double t) {
    if (!(t > 0.0))
        throw std::invalid_argument("finite_time_delta requires t > 0");
    const double x = 0.5 * delta_omega * t;
    // Below |x| ~ 1e-4 the direct quotient loses accuracy; use the series
    // sin(x)/x = 1 - x^2/6 + O(x^4).
    if (std::abs(x) < 1e-4)
        return t / (2.0 * M_PI) * (1.0 - x * x / 6.0);
    return std::sin(x) / (M_PI * delta_omega);
}

} // namespace csl

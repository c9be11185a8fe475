#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "csl/constants.hpp"
#include "csl/quadrature.hpp"
#include "support/approx.hpp"

using namespace csl;

TEST_CASE("constants profiles") {
    const PhysConstants c = PhysConstants::codata();
    CHECK(c.hbar == 1.054571817e-34);
    CHECK(c.sigma_sb == 5.670374419e-8);
    CHECK(c.m0 == 1.66053906660e-27);

    const PhysConstants p = PhysConstants::paper();
    CHECK(p.sigma_sb == 5.6e-8);
    CHECK(p.m0 == 1.66054e-27);
    CHECK(p.hbar == c.hbar);

    CHECK(PhysConstants::from_name("codata").profile == ConstantsProfile::Codata);
    CHECK(PhysConstants::from_name("paper").profile == ConstantsProfile::Paper);
    CHECK_THROWS_AS(PhysConstants::from_name("x"), std::invalid_argument);

    // m0 is selectable in the codata profile.
    CHECK(PhysConstants::codata(proton_mass).m0 == proton_mass);
    CHECK(PhysConstants::codata(neutron_mass).m0 == neutron_mass);
    CHECK_THROWS_AS(PhysConstants::codata(-1.0), std::invalid_argument);
}

TEST_CASE("collapse parameter validation") {
    CHECK_NOTHROW(CollapseParams(0.0, 1e-7));
    CHECK_THROWS_AS(CollapseParams(-1e-16, 1e-7), std::invalid_argument);
    CHECK_THROWS_AS(CollapseParams(1e-16, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CollapseParams(1e-16, -1.0), std::invalid_argument);
}

TEST_CASE("white collapse strength") {
    CHECK(white_collapse_strength(CollapseParams(0.0, 1e-7)) == 0.0);

    // lambda (sqrt(4 pi) rc)^3 by direct arithmetic.
    const double expected = 1e-16 * std::pow(std::sqrt(4.0 * M_PI) * 1e-7, 3.0);
    CHECK(expected == rel_approx(4.454662397465366e-36, 1e-12));
    CHECK(white_collapse_strength(CollapseParams(1e-16, 1e-7)) ==
          rel_approx(4.454662397465366e-36, 1e-12));

    // Linear in lambda.
    CHECK(white_collapse_strength(CollapseParams(1e-8, 1e-7)) ==
          rel_approx(4.454662397465366e-28, 1e-12));
}

TEST_CASE("finite-time delta values") {
    CHECK(finite_time_delta(0.0, 1.0) ==
          rel_approx(1.0 / (2.0 * M_PI), 1e-14));
    CHECK(std::abs(finite_time_delta(2.0 * M_PI, 1.0)) < 1e-16);
    CHECK(finite_time_delta(1.0, 10.0) ==
          rel_approx(std::sin(5.0) / M_PI, 1e-14));
    CHECK(std::sin(5.0) / M_PI ==
          rel_approx(-0.30523507672689765, 1e-12));
    CHECK_THROWS_AS(finite_time_delta(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(finite_time_delta(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("finite-time delta is even and continuous at zero") {
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> u(-1e5, 1e5);
    for (int i = 0; i < 2000; ++i) {
        const double w = u(eng);
        CHECK(finite_time_delta(w, 2.5) == finite_time_delta(-w, 2.5));
    }
    // Series branch joins the direct branch smoothly.
    const double t = 17.0;
    const double eps = 2e-4 / t;
    CHECK(finite_time_delta(eps, t) ==
          rel_approx(std::sin(0.5 * eps * t) / (M_PI * eps), 1e-10));
}

TEST_CASE("finite-time delta integrates to one") {
    // Panel-wise integration over +-W plus the asymptotic Si tail.
    for (const double t : {1.0, 1e3}) {
        const double panel = 2.0 * M_PI / t;
        const double w_max = 1500.0 * panel;
        auto f = [t](double w) { return finite_time_delta(w, t); };
        double total = 0.0;
        const QuadratureConfig cfg{1e-12, 0.0, 64};
        for (int m = 0; m < 1500; ++m)
            total += integrate_adaptive(f, m * panel, (m + 1) * panel, cfg).value;
        total *= 2.0;
        const double x = 0.5 * w_max * t;
        total += 2.0 / M_PI * (std::cos(x) / x + std::sin(x) / (x * x));
        CHECK(total == rel_approx(1.0, 1e-6));
    }
}

TEST_CASE("squared-delta identity against the plain delta integral") {
    // int dw [delta_t(w)]^2 f(w) ~ (t/2pi) int dw delta_t(w) f(w) for smooth f.
    const double t = 1e3; // t * width(f) = 1e3
    auto gauss = [](double w) { return std::exp(-0.5 * w * w); };
    auto lhs_f = [&](double w) {
        const double d = finite_time_delta(w, t);
        return d * d * gauss(w);
    };
    auto rhs_f = [&](double w) { return finite_time_delta(w, t) * gauss(w); };

    const double panel = 2.0 * M_PI / t;
    const QuadratureConfig cfg{1e-12, 0.0, 64};
    double lhs = 0.0, rhs = 0.0;
    for (double x = 0.0; x < 8.0; x += panel) {
        lhs += integrate_adaptive(lhs_f, x, x + panel, cfg).value;
        rhs += integrate_adaptive(rhs_f, x, x + panel, cfg).value;
    }
    lhs *= 2.0;
    rhs *= 2.0 * t / (2.0 * M_PI);
    CHECK(lhs == rel_approx(rhs, 1e-2));
}

// Test-only reference integrator, independent of the library's quadrature:
// composite Simpson with interval doubling until two refinements agree.
#ifndef CSL_TESTS_REFERENCE_INTEGRATION_HPP
#define CSL_TESTS_REFERENCE_INTEGRATION_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace testsupport {

template <class F>
double simpson(F&& f, double a, double b, std::size_t n) {
    // n subintervals, even.
    const double h = (b - a) / static_cast<double>(n);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i)
        sum += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

template <class F>
double simpson_refine(F&& f, double a, double b, double rel_tol = 1e-10,
                      int max_doublings = 22) {
    std::size_t n = 64;
    double prev = simpson(f, a, b, n);
    for (int i = 0; i < max_doublings; ++i) {
        n *= 2;
        const double cur = simpson(f, a, b, n);
        if (std::abs(cur - prev) <=
            rel_tol * std::max(std::abs(cur), 1e-300))
            return cur;
        prev = cur;
    }
    throw std::runtime_error("simpson_refine did not converge");
}

} // namespace testsupport

#endif

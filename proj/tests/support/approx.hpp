// doctest's Approx adds a unit absolute scale, which swallows comparisons of
// values far below 1; rel_approx() is the pure relative version.
#ifndef CSL_TESTS_APPROX_HPP
#define CSL_TESTS_APPROX_HPP

#include <doctest.h>

inline doctest::Approx rel_approx(double value, double rel_eps) {
    return doctest::Approx(value).epsilon(rel_eps).scale(0.0);
}

#endif

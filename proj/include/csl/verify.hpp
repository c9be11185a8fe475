#ifndef CSL_VERIFY_HPP
#define CSL_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace csl {

struct OracleCheck {
    std::string name;
    std::string detail;  // measured-vs-target summary
    double discrepancy = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyOptions {
    std::uint64_t seed = 42;
    // Cuts Monte Carlo realization counts 100x and loosens the Monte Carlo
    // tolerances 10x; deterministic oracles are unchanged.
    bool fast = false;
};

/// Built-in oracle suite: finite-time-delta identities, discrete box-mode
/// convergence and momentum independence, Pauli-blocking cancellation,
/// white-limit equivalence of the colored quadrature, and the correlator
/// Monte Carlo for the white and Gaussian-cutoff spectra.
std::vector<OracleCheck> verification_suite(const VerifyOptions& opt = {});

} // namespace csl

#endif

#pragma once

// Riemann zeta and its first two derivatives at real s >= 2 by the
// Euler-Maclaurin formula, differentiated term by term in s.

#include "gpfsum/dd.hpp"

#include <array>

namespace gpfsum {

struct EulerMaclaurinConfig {
    int cutoff = 64;           // direct sum covers n < cutoff
    int bernoulli_terms = 10;  // B_2 .. B_{2*bernoulli_terms}
    double target_eps = 1e-32; // bound on the last Bernoulli correction

    /// Throws InvalidArgument unless cutoff >= 16, 1 <= bernoulli_terms <= 15
    /// and target_eps >= 1e-32.
    void validate() const;
};

/// B_{2j} for j = 1..15 at index j; index 0 holds B_0 = 1.
const std::array<DD, 16>& bernoulli_table();

struct ZetaDerivatives {
    DD value;  // zeta(s)
    DD d1;     // zeta'(s)
    DD d2;     // zeta''(s)
    double last_term = 0.0;  // largest |last Bernoulli correction| over the three orders
};

/// All three orders at once.  Throws PreconditionError for s < 2 and
/// ComputationError when the last Bernoulli correction exceeds target_eps.
ZetaDerivatives zeta_derivatives(double s, const EulerMaclaurinConfig& cfg = {});

/// zeta(s), zeta'(s) or zeta''(s) for order 0, 1, 2.
DD zeta_em(double s, int order, const EulerMaclaurinConfig& cfg = {});

} // namespace gpfsum

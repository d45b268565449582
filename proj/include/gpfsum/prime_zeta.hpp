#pragma once

// Prime zeta P(s) = sum_p p^-s and its first two derivatives.  Primes up to
// split_x are summed directly; the rest comes from the Moebius-inverted
// logarithm of the partial zeta function zeta(s) * prod_{p<=x} (1 - p^-s).

#include "gpfsum/dd.hpp"
#include "gpfsum/zeta.hpp"

#include <cstdint>
#include <vector>

namespace gpfsum {

struct PrimeZetaSplit {
    std::uint64_t split_x = 1000;  // primes <= split_x are summed directly
    int k_max = 60;                // Moebius series truncation

    /// Throws InvalidArgument unless split_x >= 2 and 1 <= k_max <= 10^6.
    void validate() const;
};

struct DerivedConstants {
    DD Cb;  // 1 - e^gamma P'(2)
    DD Ca;  // 1 + e^(2 gamma) (2 P''(2) - P''(3))
};

int mobius(std::uint64_t k);

/// Evaluator that keeps the direct-part primes and their logarithms so that
/// several (s, order) requests share them.
class PrimeZeta {
public:
    explicit PrimeZeta(PrimeZetaSplit cfg = {}, EulerMaclaurinConfig zeta_cfg = {});

    /// P(s), P'(s) or P''(s) for order 0, 1, 2 and s >= 2.  Throws
    /// ComputationError when the Moebius tail beyond k_max exceeds 1e-32
    /// (the message names the k_max that would suffice).
    DD evaluate(double s, int order) const;

    /// Magnitude envelope for the k-th Moebius term of the given order.
    double term_envelope(double s, int order, int k) const;

    /// Moebius series terms k = 1..k_max for inspection (zero where mu(k) = 0).
    std::vector<DD> series_terms(double s, int order) const;

    const PrimeZetaSplit& config() const { return cfg_; }

private:
    DD direct_part(double s, int order) const;
    DD series_term(double s, int order, int k) const;
    int required_k_max(double s, int order) const;
    DD inverse_power(std::size_t i, double t) const;

    PrimeZetaSplit cfg_;
    EulerMaclaurinConfig zeta_cfg_;
    std::vector<double> primes_;
    std::vector<DD> log_primes_;
};

DD prime_zeta(double s, const PrimeZetaSplit& cfg = {});
DD prime_zeta_d1(double s, const PrimeZetaSplit& cfg = {});
DD prime_zeta_d2(double s, const PrimeZetaSplit& cfg = {});

DerivedConstants derived_constants(const PrimeZetaSplit& cfg = {});

} // namespace gpfsum

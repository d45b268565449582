#pragma once

// Brute-force checks at desk scale: direct partial sums of
//   Sa_n = sum_{k<=n} d(k)/(k G(k)),   Sb_n = sum_{k<=n} 1/(k G(k)),
// the smooth-number identities behind the prime transformation, and the
// three-parameter fit a - b n^(-c) of the Sa_n trend.

#include "gpfsum/dd.hpp"

#include <cstdint>
#include <vector>

namespace gpfsum {

struct PartialSumPoint {
    std::uint64_t n = 0;
    DD sa;
    DD sb;
};

struct PartialSumSeries {
    std::vector<PartialSumPoint> checkpoints;
    std::uint64_t N_max = 0;
};

inline constexpr std::uint64_t kOracleDefaultCap = 10'000'000;
inline constexpr std::uint64_t kOracleStretchCap = 100'000'000;
/// Integers per factor block; also the whole-table size for the first block.
inline constexpr std::uint64_t kOracleBlock = 10'000'000;

/// Sums over n <= N, recording both series at every requested n (which
/// must lie in [1, N]; duplicates are merged, order is irrelevant).
/// Throws ComputationError when N > max_n; max_n itself cannot exceed
/// kOracleStretchCap.
PartialSumSeries partial_sums(std::uint64_t N, std::vector<std::uint64_t> checkpoints,
                              std::uint64_t max_n = kOracleDefaultCap);

struct SmoothIdentityReport {
    std::uint64_t p = 0;
    unsigned depth = 0;
    std::uint64_t terms = 0;  // enumerated n with G(n) = p and every exponent <= depth

    // sum 1/n over G(n) = p against M(p)/p.
    DD enumerated;
    DD tail;
    DD expected;
    double discrepancy = 0.0;

    // sum d(n)/n over G(n) = p against M(p)^2 (1 - ((p-1)/p)^2).
    DD enumerated_d;
    DD tail_d;
    DD expected_d;
    double discrepancy_d = 0.0;

    // Per-prime increments of the raw engine sums against the identities
    // divided by p.
    double engine_b_discrepancy = 0.0;
    double engine_a_discrepancy = 0.0;
};

/// p in {2, 3, 5, 7}; 1 <= depth <= 200 and at most 10^8 enumerated terms.
SmoothIdentityReport smooth_identity_check(std::uint64_t p, unsigned depth);

struct FitPoint {
    double n;
    double value;
};

struct FitModel {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double residual_norm = 0.0;

    double value(double n) const;
};

/// Least squares for value ~ a - b n^(-c) with c in (0.05, 0.6): a scan plus
/// golden-section refinement over c, with (a, b) solved in closed form.
/// Needs >= 4 points spanning >= 3 decades of n.
FitModel fit_asymptote(const std::vector<FitPoint>& points);

} // namespace gpfsum

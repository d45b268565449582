#pragma once

// Range check of the explicit Mertens-product inequality
//   e^g ln x (1 - 0.0189/ln^3 x) < prod_{p<=x} p/(p-1) < e^g ln x (1 + 0.0561/ln^3 x)
// for x >= 51841229, and Chebyshev's theta(x) = sum_{p<=x} ln p.

#include "gpfsum/dd.hpp"
#include "gpfsum/engine.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gpfsum {

/// sum_{p<=x} ln p; x >= 2.
DD theta(std::uint64_t x, const EngineOptions& options = {});

inline constexpr double kLowerCoefficient = 0.0189;
inline constexpr double kUpperCoefficient = 0.0561;

/// Margins in units of e^g ln x: 1 + 0.0561/ln^3 x - M/(e^g ln x) and
/// M/(e^g ln x) - (1 - 0.0189/ln^3 x).  Positive means the inequality holds.
DD upper_margin(double x, DD product);
DD lower_margin(double x, DD product);

struct MarginSample {
    std::uint64_t p = 0;
    std::uint64_t successor = 0;
    double upper = 0.0;  // at x = p
    double lower = 0.0;  // as x -> successor from below
};

struct BoundsViolation {
    std::string side;   // "upper" or "lower"
    std::uint64_t x = 0;  // for the lower side, the supremum of the failing interval
    double margin = 0.0;
};

struct BoundsReport {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::uint64_t primes_checked = 0;
    double min_lower_margin = INFINITY;
    std::uint64_t argmin_lower = 0;
    double min_upper_margin = INFINITY;
    std::uint64_t argmin_upper = 0;
    std::uint64_t violations = 0;  // failing checks, counting each side separately
    std::optional<BoundsViolation> first_violation;
    std::optional<BoundsViolation> last_violation;
    std::vector<MarginSample> first_samples;  // the first few checked primes
    DD product_at_hi;  // prod over p <= hi; 0 for an empty range
};

inline constexpr std::size_t kReportedSamples = 10;

/// Checks every x in [lo, hi]: at each prime p the upper side at x = p and
/// the lower side at x -> p+ (the next prime, even when it exceeds hi); a
/// composite lo also gets the stretch [lo, first prime).  lo > hi yields an
/// empty report; lo below 51841229 is refused.
BoundsReport check_mertens_bounds(std::uint64_t lo, std::uint64_t hi, const EngineOptions& options = {});

} // namespace gpfsum

#pragma once

// Segmented sieve of Eratosthenes over odd numbers, plus the whole-array
// factor tables used by the brute-force oracle.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gpfsum {

/// Inclusive prime range [lo, hi] and the bitmap size (bytes) of one sieve
/// segment.  Each bit covers one odd number, so a segment spans
/// 16 * segment_size integers.
struct SegmentPlan {
    std::uint64_t lo = 2;
    std::uint64_t hi = 2;
    std::size_t segment_size = std::size_t{1} << 18;

    static constexpr std::size_t kMinSegment = std::size_t{1} << 16;
    static constexpr std::size_t kMaxSegment = std::size_t{1} << 26;

    /// Throws InvalidArgument unless 2 <= lo <= hi and segment_size is a
    /// power of two in [2^16, 2^26].
    void validate() const;
};

std::uint64_t isqrt(std::uint64_t n);

/// Primes <= limit in ascending order (empty for limit < 2).
std::vector<std::uint64_t> base_primes(std::uint64_t limit);

/// Holds the base primes needed to sieve any range ending at or below
/// max_hi.  Immutable after construction; for_each_prime may be called
/// concurrently from several threads.
class PrimeSieve {
public:
    explicit PrimeSieve(std::uint64_t max_hi);

    std::uint64_t max_hi() const { return max_hi_; }
    std::span<const std::uint64_t> base() const { return base_; }

    /// Calls visitor(p) for every prime p in [plan.lo, plan.hi], ascending.
    /// Returns the number of primes visited.
    template <class Visitor>
    std::uint64_t for_each_prime(const SegmentPlan& plan, Visitor&& visitor) const;

private:
    // Clears composite bits of the odd numbers first, first+2, ... covered
    // by `bits` (nbits entries) whose largest element is last.
    void sieve_segment(std::uint64_t first, std::uint64_t last, std::uint64_t* bits,
                       std::size_t nbits) const;
    void check_plan(const SegmentPlan& plan) const;

    std::uint64_t max_hi_;
    std::vector<std::uint64_t> base_;
};

/// Convenience wrapper: builds the base primes for plan.hi and sieves.
template <class Visitor>
std::uint64_t for_each_prime(const SegmentPlan& plan, Visitor&& visitor) {
    plan.validate();
    const PrimeSieve sieve(plan.hi);
    return sieve.for_each_prime(plan, std::forward<Visitor>(visitor));
}

template <class Visitor>
std::uint64_t PrimeSieve::for_each_prime(const SegmentPlan& plan, Visitor&& visitor) const {
    check_plan(plan);
    std::uint64_t visited = 0;
    if (plan.lo <= 2) {
        visitor(std::uint64_t{2});
        ++visited;
    }
    std::uint64_t first = plan.lo < 3 ? 3 : (plan.lo | 1);
    if (first > plan.hi) return visited;

    const std::size_t span_bits = plan.segment_size * 8;
    std::vector<std::uint64_t> bits(span_bits / 64);
    while (first <= plan.hi) {
        const std::uint64_t remaining = (plan.hi - first) / 2 + 1;
        const std::size_t nbits = remaining < span_bits ? static_cast<std::size_t>(remaining) : span_bits;
        const std::uint64_t last = first + 2 * (nbits - 1);
        sieve_segment(first, last, bits.data(), nbits);
        const std::size_t words = (nbits + 63) / 64;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t word = bits[w];
            while (word != 0) {
                const int b = std::countr_zero(word);
                word &= word - 1;
                visitor(first + 2 * (64 * static_cast<std::uint64_t>(w) + static_cast<std::uint64_t>(b)));
                ++visited;
            }
        }
        if (last >= plan.hi) break;
        first = last + 2;
    }
    return visited;
}

inline constexpr std::uint64_t kDefaultTableCap = 200'000'000;

/// G(n), the greatest prime factor, for 0 <= n <= N; entry 1 is 1 and entry
/// 0 is unused.  Throws ComputationError when N exceeds max_entries.
std::vector<std::uint32_t> gpf_table(std::uint64_t N, std::uint64_t max_entries = kDefaultTableCap);

/// d(n), the divisor count, for 0 <= n <= N by harmonic increments.
std::vector<std::uint32_t> divisor_count_table(std::uint64_t N,
                                               std::uint64_t max_entries = kDefaultTableCap);

/// G(n) and d(n) for n in [lo, hi] (index n - lo), by trial division with
/// the base primes up to sqrt(hi).  Used for block-wise oracle sums.
struct FactorBlock {
    std::uint64_t lo = 1;
    std::vector<std::uint32_t> gpf;
    std::vector<std::uint32_t> dcount;
};
FactorBlock factor_block(std::uint64_t lo, std::uint64_t hi);

} // namespace gpfsum

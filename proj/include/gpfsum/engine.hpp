#pragma once

// Streaming evaluation of
//   Sb = 1 + sum_p M(p)/p^2,          M(p) = prod_{p'<=p} p'/(p'-1),
//   Sa = 1 + sum_p (2-1/p) M(p)^2/p^2,
// either raw (a lower bound) or accelerated: the known constant Cb (Ca)
// plus sum_{p<=x} of the cancelled terms M(p) - e^g ln p
// (M(p)^2 - e^2g ln^2 p) plus a proven remainder interval.
//
// The prime range is cut into fixed reduction blocks of 2^24 integers.
// A block's statistics depend only on its own primes (products are taken
// relative to the block start), so blocks can be sieved by any number of
// workers and are then folded in block order.  Results are bit-identical
// for every thread count and sieve segment size.

#include "gpfsum/dd.hpp"
#include "gpfsum/sieve.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace gpfsum {

enum class SeriesKind { sa, sb };
enum class SumMode { raw, accelerated };

std::string to_string(SeriesKind k);
std::string to_string(SumMode m);

/// Smallest x for which the remainder bounds and the Mertens-product
/// inequality are established.
inline constexpr std::uint64_t kRemainderThreshold = 51'841'229;
inline constexpr std::uint64_t kLemmaThreshold = 50'000'000;

inline constexpr unsigned kBlockBits = 24;
inline constexpr std::uint64_t kBlockSpan = std::uint64_t{1} << kBlockBits;
/// Maximum number of incremental log1p steps between fresh logarithms.
inline constexpr std::uint64_t kReanchorInterval = std::uint64_t{1} << 20;

struct Interval {
    DD lo;
    DD hi;
};

struct Enclosure {
    DD lo;
    DD hi;

    bool contains(DD v) const { return lo <= v && v <= hi; }
    DD width() const { return hi - lo; }
};

/// Running state of prod p/(p-1) over the prime stream.
struct MertensState {
    std::uint64_t p_last = 0;
    DD product{1.0};
    DD ln_p;
    std::uint64_t ln_anchor_count = 0;  // incremental steps since the last fresh log
};

/// Statistics of one reduction block.  `product` and the two raw sums use
/// the local product L(p) = prod over block primes <= p, so they do not
/// depend on anything before the block.
struct BlockStats {
    std::uint64_t first_prime = 0;
    std::uint64_t last_prime = 0;
    std::uint64_t count = 0;
    DD product{1.0};  // L at the block end
    DD raw_b;         // sum L(p) / p^2
    DD raw_a;         // sum (2 - 1/p) L(p)^2 / p^2
    DD log_b;         // sum ln p / p^2
    DD log_a;         // sum (2 - 1/p) ln^2 p / p^2
    DD theta;         // sum ln p
    DD ln_last;
    std::uint64_t since_anchor = 0;
    double max_ln_drift = 0.0;  // worst relative gap between incremental and fresh ln p
};

/// Block statistics folded over a prefix of the block grid.
struct StreamTotals {
    std::uint64_t x_processed = 1;  // every prime <= x_processed has been consumed
    std::uint64_t blocks_done = 0;
    std::uint64_t primes = 0;
    MertensState mertens;
    DD raw_b;  // sum M(p) / p^2
    DD raw_a;  // sum (2 - 1/p) M(p)^2 / p^2
    DD log_b;
    DD log_a;
    DD theta;
    double max_ln_drift = 0.0;

    /// Appends the next block (in grid order).
    void absorb(const BlockStats& block, std::uint64_t block_end);
};

struct EngineOptions {
    unsigned threads = 1;
    std::size_t segment_size = std::size_t{1} << 18;
    std::optional<std::filesystem::path> checkpoint;
    bool resume = false;
    unsigned checkpoint_every = 16;                   // blocks between checkpoint writes
    std::optional<std::uint64_t> stop_after_blocks;  // stop early (leaves a checkpoint)

    /// Throws InvalidArgument for zero threads or a bad segment size.
    void validate() const;
};

/// Number of reduction blocks needed to cover [2, x].
std::uint64_t block_count(std::uint64_t x);

/// Statistics of block `index` truncated at x.
BlockStats process_block(const PrimeSieve& sieve, std::uint64_t index, std::uint64_t x,
                         std::size_t segment_size);

/// Local products (L at block end) of blocks [0, count) truncated at x.
std::vector<DD> block_products(std::uint64_t x, std::uint64_t count, const EngineOptions& options);

/// Runs every block of [2, x] (resuming from a checkpoint when asked) and
/// folds them.  The result is partial when stop_after_blocks cut it short.
StreamTotals accumulate(std::uint64_t x, SeriesKind kind, SumMode mode, const EngineOptions& options,
                        bool* resumed = nullptr);

/// prod_{p<=x} p/(p-1).
DD mertens_product(std::uint64_t x, const EngineOptions& options = {});

/// (-0.034/(x ln^3 x), 0.1/(x ln^3 x)) rounded outward; x >= 51841229.
Interval rb_bounds(std::uint64_t x);

/// (-0.24/(x ln^2 x), 0.72/(x ln^2 x)) rounded outward; x >= 51841229.
Interval ra_bounds(std::uint64_t x);

/// Upper bound for sum_{p>x} 1/(p^2 ln^m p):
///   1/(x ln^(m+1) x) * (1 - (m+1)/ln x + ((m+3/2)/ln x)^2),  x >= 5e7, m > 0.
DD tail_lemma(std::uint64_t x, double m);

struct SumResult {
    SeriesKind kind = SeriesKind::sb;
    SumMode mode = SumMode::accelerated;
    std::uint64_t x = 0;
    std::uint64_t primes_used = 0;
    std::uint64_t p_last = 0;
    DD partial;    // raw: 1 + sum; accelerated: the cancelled sum over p <= x
    DD constant;   // Cb or Ca; zero in raw mode
    DD remainder_lo;
    DD remainder_hi;
    DD numerical_slack;  // bound on accumulated rounding, added on both sides
    std::optional<Enclosure> enclosure;  // absent while the run is incomplete
    double max_ln_drift = 0.0;
    bool complete = false;
    bool resumed = false;
    std::uint64_t blocks_done = 0;
    std::uint64_t blocks_total = 0;
    std::int64_t elapsed_ms = 0;

    DD center() const { return constant + partial; }
};

SumResult run_sb(std::uint64_t x, SumMode mode, DD Cb, const EngineOptions& options = {});
SumResult run_sa(std::uint64_t x, SumMode mode, DD Ca, const EngineOptions& options = {});

/// Builds the result from already folded totals (shared by run_sa/run_sb).
SumResult make_result(SeriesKind kind, SumMode mode, std::uint64_t x, DD constant,
                      const StreamTotals& totals, bool complete);

/// Longest decimal prefix shared by both endpoints after truncation toward
/// zero; empty when nothing is certified.  Raw enclosures have an infinite
/// upper end and certify nothing.
std::string certified_digits(const Enclosure& e);

} // namespace gpfsum

#include "gpfsum/sieve.hpp"

#include "gpfsum/error.hpp"

#include <string>

namespace gpfsum {

void SegmentPlan::validate() const {
    if (lo < 2 || lo > hi) {
        throw InvalidArgument("segment plan requires 2 <= lo <= hi");
    }
    if (segment_size < kMinSegment || segment_size > kMaxSegment || !std::has_single_bit(segment_size)) {
        throw InvalidArgument("segment size must be a power of two between 2^16 and 2^26 bytes");
    }
}

std::uint64_t isqrt(std::uint64_t n) {
    using wide = unsigned __int128;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    if (r > 0xffffffffull) r = 0xffffffffull;
    while (r > 0 && wide(r) * r > n) --r;
    while (wide(r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<std::uint64_t> base_primes(std::uint64_t limit) {
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i * i <= limit; ++i) {
        if (composite[i]) continue;
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) primes.push_back(i);
    }
    return primes;
}

PrimeSieve::PrimeSieve(std::uint64_t max_hi) : max_hi_(max_hi), base_(base_primes(isqrt(max_hi))) {}

void PrimeSieve::check_plan(const SegmentPlan& plan) const {
    plan.validate();
    if (plan.hi > max_hi_) {
        throw InvalidArgument("segment plan exceeds the sieve's base-prime range");
    }
}

void PrimeSieve::sieve_segment(std::uint64_t first, std::uint64_t last, std::uint64_t* bits,
                               std::size_t nbits) const {
    const std::size_t words = (nbits + 63) / 64;
    for (std::size_t w = 0; w < words; ++w) bits[w] = ~std::uint64_t{0};
    if (nbits % 64 != 0) bits[words - 1] = (std::uint64_t{1} << (nbits % 64)) - 1;

    for (std::size_t k = 1; k < base_.size(); ++k) {
        const std::uint64_t p = base_[k];
        const std::uint64_t pp = p * p;
        if (pp > last) break;
        std::uint64_t m = (first + p - 1) / p * p;
        if ((m & 1) == 0) m += p;
        if (m < pp) m = pp;
        for (std::uint64_t i = (m - first) / 2; i < nbits; i += p) {
            bits[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
        }
    }
}

namespace {

void check_table_size(std::uint64_t N, std::uint64_t max_entries) {
    if (N < 1) throw InvalidArgument("table size must be at least 1");
    if (N > max_entries) {
        throw ComputationError("table of " + std::to_string(N) + " entries exceeds the memory cap of " +
                               std::to_string(max_entries) + "; use the block-wise oracle instead");
    }
}

} // namespace

std::vector<std::uint32_t> gpf_table(std::uint64_t N, std::uint64_t max_entries) {
    check_table_size(N, max_entries);
    std::vector<std::uint32_t> gpf(N + 1, 0);
    gpf[1] = 1;
    for (std::uint64_t i = 2; i <= N; ++i) {
        if (gpf[i] != 0) continue;
        for (std::uint64_t j = i; j <= N; j += i) gpf[j] = static_cast<std::uint32_t>(i);
    }
    return gpf;
}

std::vector<std::uint32_t> divisor_count_table(std::uint64_t N, std::uint64_t max_entries) {
    check_table_size(N, max_entries);
    std::vector<std::uint32_t> d(N + 1, 0);
    for (std::uint64_t i = 1; i <= N; ++i) {
        for (std::uint64_t j = i; j <= N; j += i) ++d[j];
    }
    return d;
}

FactorBlock factor_block(std::uint64_t lo, std::uint64_t hi) {
    if (lo < 1 || lo > hi) throw InvalidArgument("factor block requires 1 <= lo <= hi");
    const auto n = static_cast<std::size_t>(hi - lo + 1);
    FactorBlock out;
    out.lo = lo;
    out.gpf.assign(n, 1);
    out.dcount.assign(n, 1);
    std::vector<std::uint64_t> rest(n);
    for (std::size_t i = 0; i < n; ++i) rest[i] = lo + i;

    for (std::uint64_t p : base_primes(isqrt(hi))) {
        for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
            const auto i = static_cast<std::size_t>(m - lo);
            std::uint32_t e = 0;
            do {
                rest[i] /= p;
                ++e;
            } while (rest[i] % p == 0);
            out.dcount[i] *= e + 1;
            out.gpf[i] = static_cast<std::uint32_t>(p);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (rest[i] > 1) {
            out.gpf[i] = static_cast<std::uint32_t>(rest[i]);
            out.dcount[i] *= 2;
        }
    }
    return out;
}

} // namespace gpfsum

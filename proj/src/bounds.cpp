#include "gpfsum/bounds.hpp"

#include "gpfsum/error.hpp"
#include "gpfsum/sieve.hpp"
#include "ordered_pool.hpp"

#include <algorithm>

namespace gpfsum {

DD theta(std::uint64_t x, const EngineOptions& options) {
    if (x < 2) throw InvalidArgument("theta needs x >= 2");
    return accumulate(x, SeriesKind::sb, SumMode::raw, options).theta;
}

namespace {

const DD& lower_coefficient() {
    static const DD c = from_decimal("0.0189");
    return c;
}

const DD& upper_coefficient() {
    static const DD c = from_decimal("0.0561");
    return c;
}

DD scaled(double x, DD product, DD& inv_cube) {
    const DD ln_x = log(x);
    inv_cube = DD(1.0) / (sqr(ln_x) * ln_x);
    return product / (constants().exp_gamma * ln_x);
}

// Lookahead beyond a range end when searching for the next prime.
constexpr std::uint64_t kSuccessorReach = std::uint64_t{1} << 20;

std::uint64_t next_prime_after(const PrimeSieve& sieve, std::uint64_t n, std::size_t segment_size) {
    for (std::uint64_t width = 4096; width <= kSuccessorReach; width *= 2) {
        std::uint64_t found = 0;
        const SegmentPlan plan{n + 1, n + width, segment_size};
        sieve.for_each_prime(plan, [&](std::uint64_t p) {
            if (found == 0) found = p;
        });
        if (found != 0) return found;
    }
    throw ComputationError("no prime found within 2^20 of " + std::to_string(n));
}

struct BlockMargins {
    std::uint64_t checked = 0;
    double min_lower = INFINITY;
    std::uint64_t argmin_lower = 0;
    double min_upper = INFINITY;
    std::uint64_t argmin_upper = 0;
    std::uint64_t violations = 0;
    std::optional<BoundsViolation> first_violation;
    std::optional<BoundsViolation> last_violation;
    std::vector<MarginSample> samples;
    DD product_at_end;
};

class MarginScanner {
public:
    explicit MarginScanner(BlockMargins& out) : out_(out) {}

    // Checks the stretch [start, successor) on which the product equals m;
    // start is a prime, or lo for the stretch before the first prime.
    void check(std::uint64_t start, std::uint64_t successor, DD m, bool is_prime) {
        const double up = upper_margin(static_cast<double>(start), m).to_double();
        const double low = lower_margin(static_cast<double>(successor), m).to_double();
        if (is_prime) ++out_.checked;
        if (up < out_.min_upper) {
            out_.min_upper = up;
            out_.argmin_upper = start;
        }
        if (low < out_.min_lower) {
            out_.min_lower = low;
            out_.argmin_lower = successor;
        }
        if (!(up > 0.0)) record(BoundsViolation{"upper", start, up});
        if (!(low > 0.0)) record(BoundsViolation{"lower", successor, low});
        if (is_prime && out_.samples.size() < kReportedSamples) {
            out_.samples.push_back({start, successor, up, low});
        }
    }

private:
    void record(const BoundsViolation& v) {
        ++out_.violations;
        if (!out_.first_violation) out_.first_violation = v;
        out_.last_violation = v;
    }

    BlockMargins& out_;
};

std::uint64_t grid_begin(std::uint64_t index) { return std::max<std::uint64_t>(2, index << kBlockBits); }
std::uint64_t grid_end(std::uint64_t index) { return ((index + 1) << kBlockBits) - 1; }

} // namespace

DD upper_margin(double x, DD product) {
    DD inv_cube;
    const DD r = scaled(x, product, inv_cube);
    return DD(1.0) + upper_coefficient() * inv_cube - r;
}

DD lower_margin(double x, DD product) {
    DD inv_cube;
    const DD r = scaled(x, product, inv_cube);
    return r - (DD(1.0) - lower_coefficient() * inv_cube);
}

BoundsReport check_mertens_bounds(std::uint64_t lo, std::uint64_t hi, const EngineOptions& options) {
    options.validate();
    if (lo < kRemainderThreshold) {
        throw PreconditionError("the Mertens-product inequality is only established for x >= " +
                                std::to_string(kRemainderThreshold) + " (got lo = " + std::to_string(lo) + ")");
    }
    BoundsReport rep;
    rep.lo = lo;
    rep.hi = hi;
    rep.product_at_hi = DD(0.0);
    if (lo > hi) return rep;

    const std::uint64_t first_block = lo >> kBlockBits;
    const std::uint64_t last_block = hi >> kBlockBits;

    // Pass 1: local products of every block before the last, folded into prefixes.
    const std::vector<DD> locals = block_products(hi, last_block, options);
    std::vector<DD> prefix(last_block + 1);
    prefix[0] = DD(1.0);
    for (std::uint64_t j = 0; j < last_block; ++j) prefix[j + 1] = prefix[j] * locals[j];

    // Pass 2: every block overlapping [lo, hi] scanned with its exact prefix.
    const PrimeSieve sieve(hi + 2 * kSuccessorReach);
    detail::ordered_parallel(
        first_block, last_block + 1, options.threads,
        [&](std::uint64_t j) {
            BlockMargins out;
            MarginScanner scan(out);
            const std::uint64_t begin = grid_begin(j);
            const std::uint64_t end = std::min(grid_end(j), hi);
            DD local(1.0);
            DD m_prev = prefix[j];
            std::uint64_t pending = 0;  // last prime >= lo awaiting its successor
            DD m_pending;
            bool lo_stretch = begin <= lo;  // this block owns [lo, first prime)
            auto settle = [&](std::uint64_t next) {
                if (pending != 0) {
                    scan.check(pending, next, m_pending, true);
                    pending = 0;
                }
                if (lo_stretch && next >= lo) {
                    if (next > lo) scan.check(lo, next, m_prev, false);
                    lo_stretch = false;
                }
            };
            sieve.for_each_prime(SegmentPlan{begin, end, options.segment_size}, [&](std::uint64_t p) {
                if (p >= lo) settle(p);
                local += local * ratio(1.0, static_cast<double>(p) - 1.0);
                const DD m = prefix[j] * local;
                if (p >= lo) {
                    pending = p;
                    m_pending = m;
                }
                m_prev = m;
            });
            settle(next_prime_after(sieve, end, options.segment_size));
            out.product_at_end = m_prev;
            return out;
        },
        [&](std::uint64_t, const BlockMargins& b) {
            rep.primes_checked += b.checked;
            if (b.min_lower < rep.min_lower_margin) {
                rep.min_lower_margin = b.min_lower;
                rep.argmin_lower = b.argmin_lower;
            }
            if (b.min_upper < rep.min_upper_margin) {
                rep.min_upper_margin = b.min_upper;
                rep.argmin_upper = b.argmin_upper;
            }
            rep.violations += b.violations;
            if (!rep.first_violation) rep.first_violation = b.first_violation;
            if (b.last_violation) rep.last_violation = b.last_violation;
            for (const auto& s : b.samples) {
                if (rep.first_samples.size() < kReportedSamples) rep.first_samples.push_back(s);
            }
            rep.product_at_hi = b.product_at_end;
            return true;
        });
    return rep;
}

} // namespace gpfsum

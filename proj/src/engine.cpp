#include "gpfsum/engine.hpp"

#include "gpfsum/checkpoint.hpp"
#include "gpfsum/error.hpp"
#include "ordered_pool.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace gpfsum {

std::string to_string(SeriesKind k) { return k == SeriesKind::sa ? "sa" : "sb"; }
std::string to_string(SumMode m) { return m == SumMode::raw ? "raw" : "accel"; }

void EngineOptions::validate() const {
    if (threads < 1 || threads > 1024) throw InvalidArgument("thread count must be between 1 and 1024");
    SegmentPlan{2, 2, segment_size}.validate();
    if (checkpoint_every < 1) throw InvalidArgument("checkpoint interval must be at least one block");
}

std::uint64_t block_count(std::uint64_t x) { return x < 2 ? 0 : (x >> kBlockBits) + 1; }

namespace {

std::uint64_t block_end(std::uint64_t index, std::uint64_t x) {
    return std::min(x, ((index + 1) << kBlockBits) - 1);
}

std::uint64_t block_begin(std::uint64_t index) { return std::max<std::uint64_t>(2, index << kBlockBits); }

// Per-prime update shared by the statistics and product-only passes; the
// product recurrence must be identical in both so that prefix products agree
// bit for bit.
inline void advance_product(DD& local, double p) { local += local * ratio(1.0, p - 1.0); }

class BlockKernel {
public:
    explicit BlockKernel(BlockStats& out) : st_(out) {}

    void consume(std::uint64_t prime) {
        const auto p = static_cast<double>(prime);
        if (st_.count == 0) {
            st_.first_prime = prime;
            ln_ = log(p);
        } else {
            const DD r = ratio(p - prev_, prev_);
            if (r.hi > kLog1pMaxArgument) {
                ln_ = log(p);
                since_ = 0;
            } else if (since_ + 1 >= kReanchorInterval) {
                const DD incremental = ln_ + log1p(r);
                ln_ = log(p);
                audit(incremental);
                since_ = 0;
            } else {
                ln_ += log1p(r);
                ++since_;
            }
        }

        const DD inv = ratio(1.0, p);
        const DD inv2 = sqr(inv);
        const DD weight = inv2 * (DD(2.0) - inv);
        advance_product(local_, p);
        st_.raw_b += local_ * inv2;
        st_.raw_a += weight * sqr(local_);
        st_.log_b += ln_ * inv2;
        st_.log_a += weight * sqr(ln_);
        st_.theta += ln_;

        prev_ = p;
        ++st_.count;
        st_.last_prime = prime;
    }

    void finish() {
        st_.product = local_;
        if (st_.count == 0) return;
        if (since_ > 0) {
            const DD incremental = ln_;
            ln_ = log(static_cast<double>(st_.last_prime));
            audit(incremental);
        }
        st_.ln_last = ln_;
        st_.since_anchor = since_;
    }

private:
    void audit(DD incremental) {
        const double drift = std::fabs((incremental - ln_).to_double()) / ln_.hi;
        st_.max_ln_drift = std::max(st_.max_ln_drift, drift);
    }

    BlockStats& st_;
    DD local_{1.0};
    DD ln_;
    double prev_ = 0.0;
    std::uint64_t since_ = 0;
};

double abs_hi(DD v) { return std::fabs(v.hi); }

} // namespace

void StreamTotals::absorb(const BlockStats& block, std::uint64_t end) {
    const DD m = mertens.product;
    raw_b += m * block.raw_b;
    raw_a += sqr(m) * block.raw_a;
    log_b += block.log_b;
    log_a += block.log_a;
    theta += block.theta;
    if (block.count > 0) {
        mertens.product = m * block.product;
        mertens.p_last = block.last_prime;
        mertens.ln_p = block.ln_last;
        mertens.ln_anchor_count = block.since_anchor;
    }
    primes += block.count;
    max_ln_drift = std::max(max_ln_drift, block.max_ln_drift);
    x_processed = end;
    ++blocks_done;
}

BlockStats process_block(const PrimeSieve& sieve, std::uint64_t index, std::uint64_t x,
                         std::size_t segment_size) {
    BlockStats st;
    const std::uint64_t lo = block_begin(index);
    const std::uint64_t hi = block_end(index, x);
    if (lo > hi) return st;
    BlockKernel kernel(st);
    sieve.for_each_prime(SegmentPlan{lo, hi, segment_size}, [&](std::uint64_t p) { kernel.consume(p); });
    kernel.finish();
    return st;
}

std::vector<DD> block_products(std::uint64_t x, std::uint64_t count, const EngineOptions& options) {
    options.validate();
    std::vector<DD> out;
    if (x < 2 || count == 0) return out;
    count = std::min(count, block_count(x));
    out.reserve(count);
    const PrimeSieve sieve(x);
    detail::ordered_parallel(
        0, count, options.threads,
        [&](std::uint64_t index) {
            DD local(1.0);
            const std::uint64_t lo = block_begin(index);
            const std::uint64_t hi = block_end(index, x);
            if (lo <= hi) {
                sieve.for_each_prime(SegmentPlan{lo, hi, options.segment_size},
                                     [&](std::uint64_t p) { advance_product(local, static_cast<double>(p)); });
            }
            return local;
        },
        [&](std::uint64_t, DD product) {
            out.push_back(product);
            return true;
        });
    return out;
}

StreamTotals accumulate(std::uint64_t x, SeriesKind kind, SumMode mode, const EngineOptions& options,
                        bool* resumed) {
    options.validate();
    if (x < 2) throw InvalidArgument("x must be at least 2");
    if (resumed) *resumed = false;

    Checkpoint cp;
    cp.kind = kind;
    cp.mode = mode;
    cp.x_target = x;

    if (options.checkpoint && options.resume && std::filesystem::exists(*options.checkpoint)) {
        Checkpoint loaded = load_checkpoint(*options.checkpoint);
        if (loaded.kind != kind || loaded.mode != mode) {
            throw IoError("checkpoint was written by a " + to_string(loaded.kind) + "/" +
                          to_string(loaded.mode) + " run");
        }
        if (loaded.x_target != x) {
            throw IoError("checkpoint targets x=" + std::to_string(loaded.x_target) + ", not " +
                          std::to_string(x));
        }
        if (loaded.block_bits != kBlockBits) throw IoError("checkpoint uses a different block size");
        cp = loaded;
        if (resumed) *resumed = true;
    } else if (options.checkpoint) {
        save_checkpoint(*options.checkpoint, cp);
    }

    StreamTotals& totals = cp.totals;
    const std::uint64_t nblocks = block_count(x);
    const PrimeSieve sieve(x);
    std::uint64_t processed = 0;
    std::uint64_t since_save = 0;

    detail::ordered_parallel(
        totals.blocks_done, nblocks, options.threads,
        [&](std::uint64_t index) { return process_block(sieve, index, x, options.segment_size); },
        [&](std::uint64_t index, const BlockStats& st) {
            totals.absorb(st, block_end(index, x));
            ++processed;
            ++since_save;
            const bool stop = options.stop_after_blocks && processed >= *options.stop_after_blocks;
            if (options.checkpoint && (stop || since_save >= options.checkpoint_every || index + 1 == nblocks)) {
                save_checkpoint(*options.checkpoint, cp);
                since_save = 0;
            }
            return !stop;
        });
    return totals;
}

DD mertens_product(std::uint64_t x, const EngineOptions& options) {
    if (x < 2) throw InvalidArgument("Mertens product needs x >= 2");
    DD m(1.0);
    for (const DD& local : block_products(x, block_count(x), options)) m = m * local;
    return m;
}

namespace {

void require_threshold(std::uint64_t x, std::uint64_t threshold, const char* what) {
    if (x < threshold) {
        throw PreconditionError(std::string(what) + " is only proven for x >= " + std::to_string(threshold) +
                                " (got x = " + std::to_string(x) + ")");
    }
}

// Widens a computed bound away from zero by far more than its rounding error.
DD outward(DD v) { return v * DD(1.0, 0x1p-80); }

Interval scaled_bounds(std::uint64_t x, int log_power, double lo_milli, double hi_milli) {
    const auto xd = static_cast<double>(x);
    const DD ln_x = log(xd);
    const DD denominator = powi(ln_x, log_power) * xd * 1000.0;
    return {outward(DD(-lo_milli) / denominator), outward(DD(hi_milli) / denominator)};
}

} // namespace

Interval rb_bounds(std::uint64_t x) {
    require_threshold(x, kRemainderThreshold, "the Sb remainder bound");
    return scaled_bounds(x, 3, 34.0, 100.0);
}

Interval ra_bounds(std::uint64_t x) {
    require_threshold(x, kRemainderThreshold, "the Sa remainder bound");
    return scaled_bounds(x, 2, 240.0, 720.0);
}

DD tail_lemma(std::uint64_t x, double m) {
    require_threshold(x, kLemmaThreshold, "the prime tail lemma");
    if (!(m > 0.0) || !std::isfinite(m)) throw PreconditionError("the prime tail lemma needs m > 0");
    const auto xd = static_cast<double>(x);
    const DD ln_x = log(xd);
    const DD bracket = DD(1.0) - (DD(m) + 1.0) / ln_x + sqr((DD(m) + 1.5) / ln_x);
    const DD ln_power = exp((DD(m) + 1.0) * log(ln_x));
    return outward(bracket / (ln_power * xd));
}

SumResult make_result(SeriesKind kind, SumMode mode, std::uint64_t x, DD constant, const StreamTotals& totals,
                      bool complete) {
    const Constants& c = constants();
    SumResult r;
    r.kind = kind;
    r.mode = mode;
    r.x = x;
    r.primes_used = totals.primes;
    r.p_last = totals.mertens.p_last;
    r.max_ln_drift = totals.max_ln_drift;
    r.complete = complete;
    r.blocks_done = totals.blocks_done;
    r.blocks_total = block_count(x);

    const bool sb = kind == SeriesKind::sb;
    const DD raw_sum = sb ? totals.raw_b : totals.raw_a;
    const DD log_sum = (sb ? c.exp_gamma : c.exp_2gamma) * (sb ? totals.log_b : totals.log_a);

    // Each term carries at most ~20 double-word roundings and each running
    // sum one per term; 2^-104 per rounding over-approximates both.
    const double ops = 64.0 + static_cast<double>(totals.primes);
    const double unit = 0x1p-104 * ops;

    if (mode == SumMode::raw) {
        r.partial = DD(1.0) + raw_sum;
        r.numerical_slack = DD(unit * abs_hi(raw_sum));
        if (complete) {
            r.enclosure = Enclosure{r.partial - r.numerical_slack, DD(std::numeric_limits<double>::infinity())};
        }
        return r;
    }

    r.constant = constant;
    r.partial = raw_sum - log_sum;
    // ln p enters log_b linearly and log_a quadratically; the audited drift
    // is doubled to cover the stretch between audit points.
    const double drift = 4.0 * (2.0 * totals.max_ln_drift + 1e-31) * abs_hi(log_sum);
    // The constant is contracted to 1e-24 absolute.
    r.numerical_slack = DD(unit * (abs_hi(raw_sum) + abs_hi(log_sum)) + drift + 1e-24);
    if (complete) {
        const Interval rem = sb ? rb_bounds(x) : ra_bounds(x);
        r.remainder_lo = rem.lo;
        r.remainder_hi = rem.hi;
        const DD center = r.center();
        r.enclosure = Enclosure{center + rem.lo - r.numerical_slack, center + rem.hi + r.numerical_slack};
    }
    return r;
}

namespace {

SumResult run_series(SeriesKind kind, std::uint64_t x, SumMode mode, DD constant, const EngineOptions& options) {
    if (mode == SumMode::accelerated) {
        require_threshold(x, kRemainderThreshold, "accelerated mode");
    }
    const auto start = std::chrono::steady_clock::now();
    bool resumed = false;
    const StreamTotals totals = accumulate(x, kind, mode, options, &resumed);
    SumResult r = make_result(kind, mode, x, constant, totals, totals.blocks_done == block_count(x));
    r.resumed = resumed;
    r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                       .count();
    return r;
}

} // namespace

SumResult run_sb(std::uint64_t x, SumMode mode, DD Cb, const EngineOptions& options) {
    return run_series(SeriesKind::sb, x, mode, Cb, options);
}

SumResult run_sa(std::uint64_t x, SumMode mode, DD Ca, const EngineOptions& options) {
    return run_series(SeriesKind::sa, x, mode, Ca, options);
}

std::string certified_digits(const Enclosure& e) {
    if (!e.lo.is_finite() || !e.hi.is_finite() || e.hi < e.lo) return {};
    if (std::fabs(e.lo.hi) < 1e-5 || std::fabs(e.hi.hi) < 1e-5) return {};
    const std::string lo = to_decimal(e.lo, 30, Rounding::toward_zero);
    const std::string hi = to_decimal(e.hi, 30, Rounding::toward_zero);
    // Only fixed-notation renderings with the same integer part length are
    // comparable digit by digit.
    if (lo.find('e') != std::string::npos || hi.find('e') != std::string::npos) return {};
    if (lo.find('.') != hi.find('.')) return {};
    std::size_t n = 0;
    while (n < lo.size() && n < hi.size() && lo[n] == hi[n]) ++n;
    std::string prefix = lo.substr(0, n);
    while (!prefix.empty() && (prefix.back() == '.' || prefix.back() == '-')) prefix.pop_back();
    return prefix;
}

} // namespace gpfsum

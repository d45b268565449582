#include "gpfsum/oracle.hpp"

#include "gpfsum/engine.hpp"
#include "gpfsum/error.hpp"
#include "gpfsum/sieve.hpp"

#include <algorithm>
#include <cmath>

namespace gpfsum {

PartialSumSeries partial_sums(std::uint64_t N, std::vector<std::uint64_t> checkpoints, std::uint64_t max_n) {
    if (max_n > kOracleStretchCap) {
        throw InvalidArgument("oracle cap cannot exceed " + std::to_string(kOracleStretchCap));
    }
    if (N < 1) throw InvalidArgument("oracle needs N >= 1");
    if (N > max_n) {
        throw ComputationError("oracle N = " + std::to_string(N) + " exceeds the configured cap of " +
                               std::to_string(max_n) + "; raise the cap (at most " +
                               std::to_string(kOracleStretchCap) + ", processed in blocks of " +
                               std::to_string(kOracleBlock) + ")");
    }
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    for (auto n : checkpoints) {
        if (n < 1 || n > N) throw InvalidArgument("checkpoint " + std::to_string(n) + " is outside [1, N]");
    }

    PartialSumSeries out;
    out.N_max = N;
    DD sa, sb;
    auto next = checkpoints.begin();

    auto consume = [&](std::uint64_t n, std::uint32_t g, std::uint32_t d) {
        const DD t = ratio(1.0, static_cast<double>(n)) / static_cast<double>(g);
        sb += t;
        sa += t * static_cast<double>(d);
        if (next != checkpoints.end() && *next == n) {
            out.checkpoints.push_back({n, sa, sb});
            ++next;
        }
    };

    const std::uint64_t first_hi = std::min(N, kOracleBlock);
    {
        const auto gpf = gpf_table(first_hi, kOracleBlock);
        const auto dc = divisor_count_table(first_hi, kOracleBlock);
        for (std::uint64_t n = 1; n <= first_hi; ++n) consume(n, gpf[n], dc[n]);
    }
    for (std::uint64_t lo = first_hi + 1; lo <= N; lo += kOracleBlock) {
        const std::uint64_t hi = std::min(N, lo + kOracleBlock - 1);
        const FactorBlock blk = factor_block(lo, hi);
        for (std::uint64_t n = lo; n <= hi; ++n) {
            const auto i = static_cast<std::size_t>(n - lo);
            consume(n, blk.gpf[i], blk.dcount[i]);
        }
    }
    return out;
}

namespace {

struct PrimeFactor {
    std::vector<DD> inv_powers;  // q^-e for e = 0..depth
    DD T, r;                     // truncated sum of q^-e and its closed-form tail
    DD U, s;                     // the same for (e+1) q^-e
};

PrimeFactor make_factor(double q, unsigned depth, bool top) {
    PrimeFactor f;
    const DD x = ratio(1.0, q);
    f.inv_powers.resize(depth + 1);
    f.inv_powers[0] = DD(1.0);
    for (unsigned e = 1; e <= depth; ++e) f.inv_powers[e] = f.inv_powers[e - 1] * x;
    const unsigned e0 = top ? 1 : 0;
    for (unsigned e = e0; e <= depth; ++e) {
        f.T += f.inv_powers[e];
        f.U += f.inv_powers[e] * static_cast<double>(e + 1);
    }
    // sum_{e>D} x^e = x^(D+1)/(1-x);  sum_{e>D} (e+1) x^e = x^(D+1) ((D+2) - (D+1) x)/(1-x)^2.
    const DD head = f.inv_powers[depth] * x;
    const DD one_minus = DD(1.0) - x;
    f.r = head / one_minus;
    f.s = head * (DD(static_cast<double>(depth) + 2.0) - x * (static_cast<double>(depth) + 1.0)) / sqr(one_minus);
    return f;
}

DD raw_increment(SeriesKind kind, std::uint64_t p, std::uint64_t prev) {
    const DD cur = (kind == SeriesKind::sb ? run_sb(p, SumMode::raw, DD()) : run_sa(p, SumMode::raw, DD())).partial;
    if (prev == 0) return cur - 1.0;
    const DD before =
        (kind == SeriesKind::sb ? run_sb(prev, SumMode::raw, DD()) : run_sa(prev, SumMode::raw, DD())).partial;
    return cur - before;
}

} // namespace

SmoothIdentityReport smooth_identity_check(std::uint64_t p, unsigned depth) {
    if (p != 2 && p != 3 && p != 5 && p != 7) throw InvalidArgument("smooth identity check needs p in {2, 3, 5, 7}");
    if (depth < 1 || depth > 200) throw InvalidArgument("smooth identity depth must be in [1, 200]");

    const auto primes = base_primes(p);
    double count = depth;
    for (std::size_t i = 0; i + 1 < primes.size(); ++i) count *= depth + 1.0;
    if (count > 1e8) throw InvalidArgument("smooth identity enumeration would exceed 10^8 terms");

    std::vector<PrimeFactor> factors;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        factors.push_back(make_factor(static_cast<double>(primes[i]), depth, i + 1 == primes.size()));
    }

    SmoothIdentityReport rep;
    rep.p = p;
    rep.depth = depth;

    // Odometer over exponent vectors; the largest prime starts at exponent 1.
    const std::size_t k = factors.size();
    std::vector<unsigned> e(k, 0);
    e[k - 1] = 1;
    for (;;) {
        DD inv(1.0);
        double d = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            inv = inv * factors[i].inv_powers[e[i]];
            d *= e[i] + 1.0;
        }
        rep.enumerated += inv;
        rep.enumerated_d += inv * d;
        ++rep.terms;

        std::size_t i = 0;
        while (i < k && e[i] == depth) {
            e[i] = (i + 1 == k) ? 1 : 0;
            ++i;
        }
        if (i == k) break;
        ++e[i];
    }

    DD full(1.0), trunc(1.0), full_d(1.0), trunc_d(1.0);
    for (const auto& f : factors) {
        full = full * (f.T + f.r);
        trunc = trunc * f.T;
        full_d = full_d * (f.U + f.s);
        trunc_d = trunc_d * f.U;
    }
    rep.tail = full - trunc;
    rep.tail_d = full_d - trunc_d;

    const auto pd = static_cast<double>(p);
    const DD m = mertens_product(p);
    rep.expected = m / pd;
    const DD q = ratio(pd - 1.0, pd);
    rep.expected_d = sqr(m) * (DD(1.0) - sqr(q));
    rep.discrepancy = std::fabs((rep.enumerated + rep.tail - rep.expected).to_double());
    rep.discrepancy_d = std::fabs((rep.enumerated_d + rep.tail_d - rep.expected_d).to_double());

    const std::uint64_t prev = primes.size() > 1 ? primes[primes.size() - 2] : 0;
    const DD inc_b = raw_increment(SeriesKind::sb, p, prev);
    const DD inc_a = raw_increment(SeriesKind::sa, p, prev);
    rep.engine_b_discrepancy = std::fabs((inc_b - (rep.enumerated + rep.tail) / pd).to_double());
    rep.engine_a_discrepancy = std::fabs((inc_a - (rep.enumerated_d + rep.tail_d) / pd).to_double());
    return rep;
}

double FitModel::value(double n) const { return a - b * std::pow(n, -c); }

namespace {

struct LinearFit {
    double a, b, rss;
};

// Closed-form least squares for y ~ a - b u, centred for stability.
LinearFit solve_linear(const std::vector<FitPoint>& pts, double c) {
    const double m = static_cast<double>(pts.size());
    double ubar = 0, ybar = 0;
    for (const auto& pt : pts) {
        ubar += std::pow(pt.n, -c);
        ybar += pt.value;
    }
    ubar /= m;
    ybar /= m;
    double suu = 0, suy = 0;
    for (const auto& pt : pts) {
        const double du = std::pow(pt.n, -c) - ubar;
        suu += du * du;
        suy += du * (pt.value - ybar);
    }
    if (!(suu > 0)) throw ComputationError("fit is degenerate: the basis n^(-c) is constant");
    const double b = -suy / suu;
    const double a = ybar + b * ubar;
    double rss = 0;
    for (const auto& pt : pts) {
        const double r = pt.value - (a - b * std::pow(pt.n, -c));
        rss += r * r;
    }
    return {a, b, rss};
}

} // namespace

FitModel fit_asymptote(const std::vector<FitPoint>& points) {
    if (points.size() < 4) throw InvalidArgument("fit needs at least 4 points");
    double lo = points.front().n, hi = points.front().n;
    for (const auto& pt : points) {
        if (!(pt.n >= 1.0) || !std::isfinite(pt.value)) throw InvalidArgument("fit points need n >= 1 and finite values");
        lo = std::min(lo, pt.n);
        hi = std::max(hi, pt.n);
    }
    if (std::log10(hi / lo) < 3.0 - 1e-12) throw InvalidArgument("fit points must span at least 3 decades of n");

    constexpr double kLo = 0.05, kHi = 0.6;
    constexpr int kScan = 220;
    int best = 0;
    double best_rss = INFINITY;
    for (int i = 0; i <= kScan; ++i) {
        const double c = kLo + (kHi - kLo) * i / kScan;
        const double rss = solve_linear(points, c).rss;
        if (rss < best_rss) {
            best_rss = rss;
            best = i;
        }
    }
    double a = kLo + (kHi - kLo) * std::max(best - 1, 0) / kScan;
    double b = kLo + (kHi - kLo) * std::min(best + 1, kScan) / kScan;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c1 = b - g * (b - a), c2 = a + g * (b - a);
    double f1 = solve_linear(points, c1).rss, f2 = solve_linear(points, c2).rss;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        if (f1 <= f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - g * (b - a);
            f1 = solve_linear(points, c1).rss;
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + g * (b - a);
            f2 = solve_linear(points, c2).rss;
        }
    }
    const double c = f1 <= f2 ? c1 : c2;
    const LinearFit lf = solve_linear(points, c);
    if (!(lf.b > 0.0)) throw ComputationError("fit produced a non-positive amplitude b; data are not a rising trend");
    return FitModel{lf.a, lf.b, c, std::sqrt(lf.rss)};
}

} // namespace gpfsum

#include "gpfsum/engine.hpp"
#include "gpfsum/error.hpp"
#include "gpfsum/oracle.hpp"
#include "gpfsum/sieve.hpp"

#include "mpfr_oracle.hpp"

#include <doctest.h>

#include <cmath>

using gpfsum::DD;
using gpfsum::FitPoint;
using oracle::Big;

namespace {

// G(n) and d(n) by trial division.
std::pair<std::uint64_t, std::uint64_t> factor(std::uint64_t n) {
    std::uint64_t g = 1, d = 1;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        std::uint64_t e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
            g = q;
        }
        d *= e + 1;
    }
    if (n > 1) {
        g = n;
        d *= 2;
    }
    return {g, d};
}

} // namespace

TEST_CASE("tiny partial sums by hand") {
    const auto s = gpfsum::partial_sums(2, {1, 2});
    REQUIRE(s.checkpoints.size() == 2);
    CHECK(s.checkpoints[0].sa == DD(1.0));
    CHECK(s.checkpoints[1].sa == DD(1.5));
    CHECK(s.checkpoints[1].sb == DD(1.25));
    CHECK(s.N_max == 2);
}

TEST_CASE("partial sums agree with trial division in 256-bit arithmetic") {
    const std::uint64_t N = 100'000;
    Big sa(0.0), sb(0.0);
    for (std::uint64_t n = 1; n <= N; ++n) {
        const auto [g, d] = factor(n);
        const Big t = Big(1.0) / (Big(static_cast<double>(n)) * Big(static_cast<double>(g)));
        sb = sb + t;
        sa = sa + t * Big(static_cast<double>(d));
    }
    const auto s = gpfsum::partial_sums(N, {N});
    CHECK(oracle::abs_diff(Big(s.checkpoints[0].sa), sa) < 1e-26);
    CHECK(oracle::abs_diff(Big(s.checkpoints[0].sb), sb) < 1e-26);
}

TEST_CASE("printed partial sums") {
    const auto s = gpfsum::partial_sums(3'000'000, {100, 1000, 10'000, 100'000, 1'000'000, 3'000'000});
    const auto& c = s.checkpoints;
    REQUIRE(c.size() == 6);
    CHECK(std::fabs(c[0].sa.hi - 4.816507) <= 1e-6);
    CHECK(std::fabs(c[1].sa.hi - 6.149878) <= 1e-6);
    CHECK(std::fabs(c[2].sa.hi - 6.961411) <= 1e-6);
    // Values of an independent float64 sieve with exactly rounded summation.
    CHECK(std::fabs(c[3].sa.hi - 7.4348008019) <= 1e-9);
    CHECK(std::fabs(c[4].sa.hi - 7.7094215926) <= 1e-9);
    CHECK(std::fabs(c[5].sb.hi - 2.2505789) <= 5e-8);
    CHECK(gpfsum::to_decimal(c[5].sb, 8, gpfsum::Rounding::toward_zero) == "2.2505789");

    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(c[i].sb <= c[i].sa);
        if (i > 0) {
            CHECK(c[i - 1].sa < c[i].sa);
            CHECK(c[i - 1].sb < c[i].sb);
        }
    }
}

TEST_CASE("block-wise tables continue the whole-table sums exactly") {
    const std::uint64_t N = gpfsum::kOracleBlock + 400'000;
    const auto s = gpfsum::partial_sums(N, {gpfsum::kOracleBlock, N}, 20'000'000);
    const auto gpf = gpfsum::gpf_table(N);
    const auto dc = gpfsum::divisor_count_table(N);
    DD sa, sb;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const DD t = gpfsum::ratio(1.0, static_cast<double>(n)) / static_cast<double>(gpf[n]);
        sb += t;
        sa += t * static_cast<double>(dc[n]);
        if (n == gpfsum::kOracleBlock) {
            CHECK(s.checkpoints[0].sa == sa);
            CHECK(s.checkpoints[0].sb == sb);
        }
    }
    CHECK(s.checkpoints[1].sa == sa);
    CHECK(s.checkpoints[1].sb == sb);
}

TEST_CASE("oracle limits") {
    CHECK_THROWS_AS(gpfsum::partial_sums(gpfsum::kOracleDefaultCap + 1, {}), gpfsum::ComputationError);
    CHECK_THROWS_AS(gpfsum::partial_sums(100, {}, gpfsum::kOracleStretchCap + 1), gpfsum::InvalidArgument);
    CHECK_THROWS_AS(gpfsum::partial_sums(100, {101}), gpfsum::InvalidArgument);
    CHECK_THROWS_AS(gpfsum::partial_sums(0, {}), gpfsum::InvalidArgument);
    try {
        gpfsum::partial_sums(20'000'000, {});
        FAIL("expected the cap to refuse");
    } catch (const gpfsum::ComputationError& e) {
        CHECK(std::string(e.what()).find("raise the cap") != std::string::npos);
    }
    const auto merged = gpfsum::partial_sums(10, {10, 5, 5});
    CHECK(merged.checkpoints.size() == 2);
    CHECK(merged.checkpoints[0].n == 5);
}

TEST_CASE("engine raw sums bound the smooth part of the direct sums") {
    const std::uint64_t N = 1'000'000;
    const auto gpf = gpfsum::gpf_table(N);
    for (std::uint64_t x : {3ull, 10ull, 100ull, 1000ull}) {
        DD smooth;
        for (std::uint64_t n = 1; n <= N; ++n) {
            if (gpf[n] <= x) smooth += gpfsum::ratio(1.0, static_cast<double>(n)) / static_cast<double>(gpf[n]);
        }
        CAPTURE(x);
        CHECK(smooth < gpfsum::run_sb(x, gpfsum::SumMode::raw, DD()).partial);
    }

    // {2,3}-smooth n up to 2^30 already reach 11/6 to within 1e-6.
    const double limit = 1073741824.0;
    DD sum;
    for (double a = 1; a <= limit; a *= 2) {
        for (double n = a; n <= limit; n *= 3) {
            const double g = n == 1 ? 1 : (std::fmod(n, 3.0) == 0 ? 3 : 2);
            sum += gpfsum::ratio(1.0, n) / g;
        }
    }
    const DD gap = gpfsum::run_sb(3, gpfsum::SumMode::raw, DD()).partial - sum;
    CHECK(gap.hi > 0.0);
    CHECK(gap.hi < 1e-6);
}

TEST_CASE("smooth-number identities") {
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        CAPTURE(p);
        const auto r = gpfsum::smooth_identity_check(p, 60);
        CHECK(r.discrepancy <= 1e-25);
        CHECK(r.discrepancy_d <= 1e-25);
        CHECK(r.engine_b_discrepancy <= 1e-25);
        CHECK(r.engine_a_discrepancy <= 1e-25);
        CHECK(r.tail.hi >= 0.0);
        CHECK(r.tail.hi < 1e-15);
    }
    const auto two = gpfsum::smooth_identity_check(2, 60);
    CHECK(two.expected == DD(1.0));
    CHECK(two.terms == 60);
    CHECK(gpfsum::smooth_identity_check(3, 30).expected == DD(1.0));
    const auto five = gpfsum::smooth_identity_check(5, 40);
    CHECK(five.expected == DD(0.75));
    CHECK(five.terms == 40ull * 41 * 41);

    const auto seven = gpfsum::smooth_identity_check(7, 30);
    CHECK(seven.discrepancy <= 1e-24);

    CHECK_THROWS_AS(gpfsum::smooth_identity_check(11, 10), gpfsum::InvalidArgument);
    CHECK_THROWS_AS(gpfsum::smooth_identity_check(2, 0), gpfsum::InvalidArgument);
    CHECK_THROWS_AS(gpfsum::smooth_identity_check(7, 200), gpfsum::InvalidArgument);
}

TEST_CASE("fit recovers exact model data") {
    std::vector<FitPoint> pts;
    for (double n : {1e2, 1e3, 1e4, 1e5, 1e6, 1e7}) pts.push_back({n, 8.0 - 9.0 * std::pow(n, -0.25)});
    const auto m = gpfsum::fit_asymptote(pts);
    CHECK(std::fabs(m.a - 8.0) < 1e-10);
    CHECK(std::fabs(m.b - 9.0) < 1e-10);
    CHECK(std::fabs(m.c - 0.25) < 1e-10);
    CHECK(m.residual_norm < 1e-12);
}

TEST_CASE("fit of the printed table") {
    const std::vector<FitPoint> pts = {{1e2, 4.816507}, {1e3, 6.149878},  {1e4, 6.961411},
                                       {1e5, 7.4338008}, {1e6, 7.7094259}, {1e7, 7.870104}};
    const auto m = gpfsum::fit_asymptote(pts);
    CHECK(std::fabs(m.a / 8.115653 - 1) < 0.01);
    CHECK(std::fabs(m.b / 9.327239 - 1) < 0.01);
    CHECK(std::fabs(m.c / 0.226343 - 1) < 0.01);
    CHECK(m.b > 0);
    CHECK(m.c > 0);
    CHECK(m.c < 1);
    CHECK(std::fabs(m.value(2.7e8) - (m.a - 0.1)) < 0.05);
}

TEST_CASE("fit input validation") {
    CHECK_THROWS_AS(gpfsum::fit_asymptote({{1e2, 1}, {1e3, 2}, {1e5, 3}}), gpfsum::InvalidArgument);
    CHECK_THROWS_AS(gpfsum::fit_asymptote({{1e2, 1}, {1e3, 2}, {1e3, 3}, {1e4, 4}}), gpfsum::InvalidArgument);
    CHECK_THROWS_AS(gpfsum::fit_asymptote({{1e2, 5}, {1e3, 5}, {1e4, 5}, {1e5, 5}}), gpfsum::ComputationError);
    CHECK_THROWS_AS(gpfsum::fit_asymptote({{1e2, 8}, {1e3, 7}, {1e4, 6}, {1e5, 5}}), gpfsum::ComputationError);
}

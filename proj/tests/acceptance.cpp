// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance --criterion N    (N = 1..9)
//   acceptance                  (all of them)

#include "gpfsum/bounds.hpp"
#include "gpfsum/cli.hpp"
#include "gpfsum/engine.hpp"
#include "gpfsum/oracle.hpp"
#include "gpfsum/prime_zeta.hpp"

#include "mpfr_oracle.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

using gpfsum::DD;
using gpfsum::SeriesKind;
using gpfsum::SumMode;
using oracle::Big;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "NOT ") + what;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

std::string fmt(DD v, int digits = 17) { return gpfsum::to_decimal(v, digits); }

double abs_dd(DD v) { return std::fabs(v.to_double()); }

unsigned workers() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

Outcome constants() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = gpfsum::derived_constants();
    const double t = seconds_since(t0);
    const double eb = abs_dd(c.Cb - gpfsum::from_decimal("1.8782309744528944880253707"));
    const double ea = abs_dd(c.Ca - gpfsum::from_decimal("5.229250296762544252981860349634"));
    o.require(eb <= 1e-24, "|Cb - 1.8782309744528944880253707| = " + fmt(eb) + " <= 1e-24");
    o.require(ea <= 1e-24, "|Ca - 5.229250296762544252981860349634| = " + fmt(ea) + " <= 1e-24");
    o.require(t < 60.0, "runtime " + fmt(t) + " s < 60 s");
    return o;
}

Outcome second_derivative_table() {
    Outcome o;
    const char* table[] = {"0.7415978549828050030239403275450375", "0.1499805843420868545613264915839837",
                           "0.0515291349877069852843053881647288", "0.0211008945931815396107750284303329",
                           "0.0093659030058415755113780509464443"};
    const gpfsum::PrimeZeta wide(gpfsum::PrimeZetaSplit{1000, 60});
    const gpfsum::PrimeZeta narrow(gpfsum::PrimeZetaSplit{50, 60});
    double worst = 0.0, split = 0.0;
    for (int s = 2; s <= 6; ++s) {
        const DD v = wide.evaluate(s, 2);
        worst = std::max(worst, abs_dd(v - gpfsum::from_decimal(table[s - 2])));
        split = std::max(split, abs_dd(v - narrow.evaluate(s, 2)));
    }
    o.require(worst <= 1e-30, "max |P''(s) - table|, s = 2..6, is " + fmt(worst) + " <= 1e-30");
    o.require(split <= 1e-27, "split 50 vs 1000 differ by " + fmt(split) + " <= 1e-27");
    return o;
}

Outcome partial_sum_table() {
    Outcome o;
    struct Row {
        std::uint64_t n;
        bool sa;
        const char* printed;
        double tol;
    };
    const Row rows[] = {{100, true, "4.816507", 1e-6},      {1000, true, "6.149878", 1e-6},
                        {10000, true, "6.961411", 1e-6},    {100000, true, "7.4338008", 1e-7},
                        {1000000, true, "7.7094259", 1e-7}, {3000000, false, "2.2505789", 5e-8}};
    std::vector<std::uint64_t> ns;
    for (const auto& r : rows) ns.push_back(r.n);
    const auto t0 = std::chrono::steady_clock::now();
    const auto series = gpfsum::partial_sums(3'000'000, ns);
    const double t = seconds_since(t0);
    for (std::size_t i = 0; i < std::size(rows); ++i) {
        const auto& r = rows[i];
        const auto& p = series.checkpoints[i];
        const DD got = r.sa ? p.sa : p.sb;
        const double err = abs_dd(got - gpfsum::from_decimal(r.printed));
        o.require(err <= r.tol * (1 + 1e-12), std::string(r.sa ? "Sa_" : "Sb_") + std::to_string(r.n) + " = " +
                                                   fmt(got, 11) + " vs " + r.printed + " within " + fmt(r.tol));
    }
    o.require(t <= 120.0, "runtime " + fmt(t) + " s <= 120 s");
    return o;
}

Outcome full_sb() {
    Outcome o;
    const auto c = gpfsum::derived_constants();
    gpfsum::EngineOptions opts;
    opts.threads = workers();
    const auto r = gpfsum::run_sb(86'028'161, SumMode::accelerated, c.Cb, opts);
    const DD value = gpfsum::from_decimal("2.254435359519071");
    o.require(r.enclosure.has_value(), "run complete");
    if (!r.enclosure) return o;
    o.require(r.enclosure->contains(value), "[" + fmt(r.enclosure->lo) + ", " + fmt(r.enclosure->hi) +
                                                "] contains 2.254435359519071");
    o.require(r.enclosure->width() <= DD(3e-13), "width " + fmt(r.enclosure->width().to_double()) + " <= 3e-13");
    o.require(r.elapsed_ms <= 300'000, "runtime " + fmt(r.elapsed_ms / 1000.0) + " s <= 300 s");
    return o;
}

Outcome full_sa() {
    Outcome o;
    const auto c = gpfsum::derived_constants();
    gpfsum::EngineOptions opts;
    opts.threads = workers();
    const auto r = gpfsum::run_sa(2'576'983'867, SumMode::accelerated, c.Ca, opts);
    o.require(r.enclosure.has_value(), "run complete");
    if (!r.enclosure) return o;
    const DD value = gpfsum::from_decimal("8.115653111459203");
    o.require(r.enclosure->contains(value), "[" + fmt(r.enclosure->lo) + ", " + fmt(r.enclosure->hi) +
                                                "] contains 8.115653111459203");
    o.require(r.enclosure->width() <= DD(9e-13), "width " + fmt(r.enclosure->width().to_double()) + " <= 9e-13");
    const double limit = opts.threads >= 8 ? 600.0 : 2700.0;
    o.require(r.elapsed_ms <= limit * 1000, "runtime " + fmt(r.elapsed_ms / 1000.0) + " s <= " + fmt(limit) + " s (" +
                                                std::to_string(opts.threads) + " workers)");

    const auto small = gpfsum::run_sa(100'000'000, SumMode::accelerated, c.Ca, opts);
    o.require(small.enclosure.has_value(), "x = 1e8 run complete");
    if (!small.enclosure) return o;
    o.require(small.enclosure->contains(gpfsum::from_decimal("8.115653111459")),
              "x = 1e8 enclosure [" + fmt(small.enclosure->lo) + ", " + fmt(small.enclosure->hi) +
                  "] contains 8.115653111459");
    o.require(small.enclosure->width() > r.enclosure->width(),
              "x = 1e8 enclosure is wider (" + fmt(small.enclosure->width().to_double()) + ")");
    return o;
}

Outcome cross_form() {
    Outcome o;
    const auto c = gpfsum::derived_constants();
    const auto& k = gpfsum::constants();
    const gpfsum::PrimeZeta pz;

    const std::uint64_t xb = 1'000'000, xa = 100'000;
    Big sum_b(0.0), sum_a(0.0);
    gpfsum::for_each_prime(gpfsum::SegmentPlan{2, xb}, [&](std::uint64_t p) {
        const Big bp(static_cast<double>(p));
        const Big l = oracle::big_log(bp);
        sum_b = sum_b + l / (bp * bp);
        if (p <= xa) sum_a = sum_a + (Big(2.0) - Big(1.0) / bp) * l * l / (bp * bp);
    });

    const auto tb = gpfsum::accumulate(xb, SeriesKind::sb, SumMode::accelerated, {});
    const auto acc_b = gpfsum::make_result(SeriesKind::sb, SumMode::accelerated, xb, c.Cb, tb, false);
    const auto raw_b = gpfsum::run_sb(xb, SumMode::raw, DD());
    const Big rhs_b = Big(k.exp_gamma) * (Big(DD(0.0) - pz.evaluate(2.0, 1)) - sum_b);
    const double eb = oracle::abs_diff(Big(acc_b.center()) - Big(raw_b.partial), rhs_b);
    o.require(eb <= 1e-20, "Sb identity at x = 1e6 off by " + fmt(eb) + " <= 1e-20");

    const auto ta = gpfsum::accumulate(xa, SeriesKind::sa, SumMode::accelerated, {});
    const auto acc_a = gpfsum::make_result(SeriesKind::sa, SumMode::accelerated, xa, c.Ca, ta, false);
    const auto raw_a = gpfsum::run_sa(xa, SumMode::raw, DD());
    const Big combo = Big(2.0) * Big(pz.evaluate(2.0, 2)) - Big(pz.evaluate(3.0, 2));
    const Big rhs_a = Big(k.exp_2gamma) * (combo - sum_a);
    const double ea = oracle::abs_diff(Big(acc_a.center()) - Big(raw_a.partial), rhs_a);
    o.require(ea <= 1e-20, "Sa identity at x = 1e5 off by " + fmt(ea) + " <= 1e-20");
    return o;
}

Outcome bounds_check() {
    Outcome o;
    gpfsum::EngineOptions opts;
    opts.threads = workers();
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = gpfsum::check_mertens_bounds(gpfsum::kRemainderThreshold, 100'000'000, opts);
    const double t = seconds_since(t0);
    std::string where;
    if (r.first_violation) {
        where = " (first: " + r.first_violation->side + " side at x = " + std::to_string(r.first_violation->x) +
                ", last at x = " + std::to_string(r.last_violation->x) + ")";
    }
    o.require(r.violations == 0, "zero violations over " + std::to_string(r.primes_checked) + " primes, found " +
                                     std::to_string(r.violations) + where);
    o.require(t <= 180.0, "runtime " + fmt(t) + " s <= 180 s");
    return o;
}

Outcome determinism() {
    Outcome o;
    const std::vector<std::vector<std::string>> commands = {
        {"sb", "--x", "86028161"}, {"check-bounds", "--from", "51841229", "--to", "100000000"}};
    for (const auto& base : commands) {
        std::string reference;
        bool same = true;
        int runs = 0;
        for (const char* threads : {"1", "2", "8"}) {
            for (const char* segment : {"262144", "4194304"}) {
                auto args = base;
                args.insert(args.end(), {"--format", "structured", "--threads", threads, "--segment-size", segment});
                std::ostringstream out, err;
                gpfsum::run_cli(args, out, err);
                const std::string stripped = gpfsum::strip_execution(out.str());
                if (runs++ == 0) reference = stripped;
                same = same && stripped == reference && !reference.empty();
            }
        }
        o.require(same, base[0] + " output identical over " + std::to_string(runs) + " runs");
    }
    return o;
}

// A normalized double-word value with random magnitude in [2^-30, 2^31).
DD random_dd(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mant(1.0, 2.0);
    std::uniform_int_distribution<int> ex(-30, 30);
    std::bernoulli_distribution neg(0.5);
    double hi = std::ldexp(mant(rng), ex(rng));
    if (neg(rng)) hi = -hi;
    return gpfsum::eft::fast_two_sum(hi, hi * 0x1p-53 * (mant(rng) - 1.5));
}

Big big_pow(const Big& a, double e) {
    Big r;
    mpfr_pow(r.get(), a.get(), Big(e).get(), MPFR_RNDN);
    return r;
}

Outcome properties() {
    Outcome o;
    std::mt19937_64 rng(20261014);
    const int n = 1'000'000;
    bool normalized = true;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const DD a = random_dd(rng);
        const DD b = random_dd(rng);
        const DD s = a + b, m = a * b, q = a / b;
        normalized = normalized && s.is_normalized() && m.is_normalized() && q.is_normalized();
        const Big ba(a), bb(b);
        worst = std::max({worst, oracle::rel_diff(Big(s), ba + bb), oracle::rel_diff(Big(m), ba * bb),
                          oracle::rel_diff(Big(q), ba / bb)});
    }
    o.require(normalized, "sum, product and quotient normalized on 10^6 random pairs");
    o.require(worst <= 4 * 0x1p-106, "worst relative error " + fmt(worst) + " <= 4u^2");

    double smooth = 0.0;
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        const auto r = gpfsum::smooth_identity_check(p, 60);
        smooth = std::max({smooth, r.discrepancy, r.discrepancy_d, r.engine_b_discrepancy, r.engine_a_discrepancy});
    }
    o.require(smooth <= 1e-25, "smooth identities for p = 2, 3, 5 within " + fmt(smooth) + " <= 1e-25");

    bool bracket = true;
    int cases = 0;
    for (std::uint64_t x : {50'000'000ull, 51'841'229ull, 100'000'000ull, 2'576'983'867ull, 10'000'000'000ull,
                            1'000'000'000'000ull, 1'000'000'000'000'000ull}) {
        for (double m : {0.25, 0.5, 1.0, 2.0, 3.0, 4.0}) {
            const DD t = gpfsum::tail_lemma(x, m);
            const Big bx(static_cast<double>(x));
            const Big cap = Big(1.0) / (bx * big_pow(oracle::big_log(bx), m + 1));
            bracket = bracket && t.hi > 0.0 && Big(t) < cap;
            ++cases;
        }
    }
    o.require(bracket, "0 < tail_lemma(x, m) < 1/(x ln^(m+1) x) on " + std::to_string(cases) + " grid points");
    return o;
}

struct Criterion {
    const char* title;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {"derived constants", constants},
        {"second derivative table", second_derivative_table},
        {"partial sum table", partial_sum_table},
        {"full Sb run", full_sb},
        {"full Sa run", full_sa},
        {"cross-form identity", cross_form},
        {"Mertens product bounds", bounds_check},
        {"determinism", determinism},
        {"property suites", properties},
    };
    return all;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run just this one")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    bool all_pass = true;
    for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) {
        if (only != 0 && i != only) continue;
        const auto& c = criteria()[i - 1];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        all_pass = all_pass && o.pass;
        std::cout << "criterion " << i << " (" << c.title << "): " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
                  << "  [" << fmt(seconds_since(t0)) << " s]" << std::endl;
    }
    return all_pass ? 0 : 1;
}

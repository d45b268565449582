#include "gpfsum/cli.hpp"

#include "gpfsum/bounds.hpp"
#include "gpfsum/error.hpp"
#include "gpfsum/oracle.hpp"
#include "gpfsum/prime_zeta.hpp"

#include "reference.hpp"
#include "report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

namespace gpfsum {

namespace {

using detail::decimal;
using detail::dd_json;
using detail::double_json;
using detail::Json;

struct Common {
    unsigned threads = 1;
    std::size_t segment_size = std::size_t{1} << 18;
    std::string format = "text";
    int digits = 0;  // 0: the command's default

    bool structured() const { return format == "structured"; }
    int digits_or(int fallback) const { return digits > 0 ? digits : fallback; }

    EngineOptions engine() const {
        EngineOptions o;
        o.threads = threads;
        o.segment_size = segment_size;
        return o;
    }
};

struct Check {
    std::string name;
    bool pass = false;
    std::string expected;
    std::string got;
    std::string tolerance;
};

class Stopwatch {
public:
    std::int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

unsigned default_threads() {
    const char* env = std::getenv(kThreadsEnv);
    if (env == nullptr || *env == '\0') return 1;
    const std::string text(env);
    if (text.find_first_not_of("0123456789") != std::string::npos || text.size() > 4) {
        throw InvalidArgument(std::string(kThreadsEnv) + " must be an integer in [1, 1024], got '" + text + "'");
    }
    const unsigned v = static_cast<unsigned>(std::stoul(text));
    if (v < 1 || v > 1024) {
        throw InvalidArgument(std::string(kThreadsEnv) + " must be an integer in [1, 1024], got '" + text + "'");
    }
    return v;
}

double parse_real(const std::string& text, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw InvalidArgument(std::string(what) + ": not a finite number: '" + text + "'");
    }
    return v;
}

const Json& reference(std::initializer_list<const char*> path) {
    const Json* j = &detail::reference_values();
    for (const char* key : path) j = &j->at(key);
    return *j;
}

DD ref_dd(const Json& j) { return from_decimal(j.get<std::string>()); }

/// One unit in the last printed decimal place of `text`.
DD last_digit_unit(const std::string& text) {
    const auto dot = text.find('.');
    const std::size_t places = dot == std::string::npos ? 0 : text.size() - dot - 1;
    return from_decimal("1e-" + std::to_string(places));
}

Check within(std::string name, DD got, DD expected, DD tolerance, int digits) {
    Check c;
    c.name = std::move(name);
    c.pass = abs(got - expected) <= tolerance;
    c.expected = decimal(expected, digits);
    c.got = decimal(got, digits);
    c.tolerance = decimal(tolerance, 2);
    return c;
}

bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Json checks_json(const std::vector<Check>& checks) {
    Json a = Json::array();
    for (const auto& c : checks) {
        Json j;
        j["name"] = c.name;
        j["status"] = c.pass ? "PASS" : "FAIL";
        j["expected"] = c.expected;
        j["got"] = c.got;
        j["tolerance"] = c.tolerance;
        a.push_back(j);
    }
    return a;
}

void row(std::ostream& out, const std::string& label, const std::string& value) {
    out << "  " << label << std::string(label.size() < 20 ? 20 - label.size() : 1, ' ') << value << '\n';
}

void print_checks(std::ostream& out, const std::vector<Check>& checks) {
    for (const auto& c : checks) {
        out << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": got " << c.got;
        if (!c.expected.empty()) out << ", expected " << c.expected;
        if (!c.tolerance.empty()) out << " (tolerance " << c.tolerance << ")";
        out << '\n';
    }
}

Json execution_json(const Common& c, std::int64_t elapsed_ms) {
    Json j;
    j["threads"] = c.threads;
    j["segment_size"] = c.segment_size;
    j["elapsed_ms"] = elapsed_ms;
    return j;
}

/// Writes the envelope and returns the exit status implied by the checks.
int finish(std::ostream& out, const Common& c, const std::string& command, Json config, Json result,
           const std::vector<Check>& checks, Json execution) {
    const bool ok = all_pass(checks);
    if (c.structured()) {
        Json j;
        j["schema"] = "gpfsum.report";
        j["schema_version"] = kReportSchemaVersion;
        j["command"] = command;
        j["config"] = std::move(config);
        j["result"] = std::move(result);
        j["checks"] = checks_json(checks);
        j["status"] = checks.empty() ? "none" : (ok ? "PASS" : "FAIL");
        j["execution"] = std::move(execution);
        out << detail::dump(j);
    }
    return ok ? kExitOk : kExitCheckFailed;
}

// sb / sa ------------------------------------------------------------------

struct SeriesArgs {
    std::uint64_t x = 0;
    std::string mode = "accel";
    std::string checkpoint;
    bool resume = false;
    unsigned checkpoint_every = 16;
    std::uint64_t stop_after_blocks = 0;
};

std::vector<Check> series_checks(const SumResult& r, const Json& ref, int digits) {
    std::vector<Check> checks;
    if (!r.complete || !r.enclosure) return checks;
    const DD value = ref_dd(ref.at("value"));
    const std::string certified_ref = ref.at("certified").get<std::string>();
    const std::string name = r.kind == SeriesKind::sb ? "Sb" : "Sa";

    if (r.mode == SumMode::raw) {
        Check c;
        c.name = "raw sum is below " + certified_ref;
        c.pass = r.partial < from_decimal(certified_ref);
        c.got = decimal(r.partial, digits);
        c.expected = "< " + certified_ref;
        checks.push_back(c);
        return checks;
    }
    const Enclosure& e = *r.enclosure;
    const std::string digits_got = certified_digits(e);
    if (r.x == ref.at("x").get<std::uint64_t>()) {
        Check in;
        in.name = "enclosure contains " + name + " = " + ref.at("value").get<std::string>();
        in.pass = e.contains(value);
        in.got = "[" + decimal(e.lo, digits) + ", " + decimal(e.hi, digits) + "]";
        checks.push_back(in);

        Check cd;
        cd.name = "certified digits begin " + certified_ref;
        cd.pass = digits_got.rfind(certified_ref, 0) == 0;
        cd.got = digits_got.empty() ? "(none)" : digits_got;
        checks.push_back(cd);
    } else {
        // The value is known to lie in [certified, certified + one unit].
        const DD lo = from_decimal(certified_ref);
        const DD hi = lo + last_digit_unit(certified_ref);
        Check c;
        c.name = "enclosure meets [" + certified_ref + ", " + decimal(hi, 14) + "]";
        c.pass = e.lo <= hi && lo <= e.hi;
        c.got = "[" + decimal(e.lo, digits) + ", " + decimal(e.hi, digits) + "]";
        checks.push_back(c);
    }
    return checks;
}

int cmd_series(SeriesKind kind, const SeriesArgs& a, const Common& c, std::ostream& out) {
    if (a.x < 2) throw InvalidArgument("--x must be at least 2");
    if (a.resume && a.checkpoint.empty()) throw InvalidArgument("--resume needs --checkpoint PATH");
    EngineOptions opts = c.engine();
    if (!a.checkpoint.empty()) opts.checkpoint = a.checkpoint;
    opts.resume = a.resume;
    opts.checkpoint_every = a.checkpoint_every;
    if (a.stop_after_blocks > 0) opts.stop_after_blocks = a.stop_after_blocks;
    opts.validate();
    const SumMode mode = a.mode == "raw" ? SumMode::raw : SumMode::accelerated;
    if (mode == SumMode::accelerated && a.x < kRemainderThreshold) {
        throw PreconditionError("accelerated mode needs x >= " + std::to_string(kRemainderThreshold) + " (got " +
                                std::to_string(a.x) + "); use --mode raw for a lower bound");
    }

    DD constant;
    if (mode == SumMode::accelerated) {
        const DerivedConstants k = derived_constants();
        constant = kind == SeriesKind::sb ? k.Cb : k.Ca;
    }
    const SumResult r = kind == SeriesKind::sb ? run_sb(a.x, mode, constant, opts) : run_sa(a.x, mode, constant, opts);
    const int digits = c.digits_or(20);
    const Json& ref = reference({"full_runs", kind == SeriesKind::sb ? "sb" : "sa"});
    const auto checks = series_checks(r, ref, digits);

    if (!c.structured()) {
        out << (kind == SeriesKind::sb ? "Sb" : "Sa") << ' ' << (mode == SumMode::raw ? "raw" : "accelerated")
            << ", x = " << a.x << '\n';
        if (!r.complete) {
            row(out, "status", "incomplete, " + std::to_string(r.blocks_done) + " of " +
                                   std::to_string(r.blocks_total) + " blocks");
            if (opts.checkpoint) row(out, "checkpoint", opts.checkpoint->string());
        }
        row(out, "primes used", std::to_string(r.primes_used));
        row(out, "last prime", std::to_string(r.p_last));
        row(out, mode == SumMode::raw ? "raw sum" : "cancelled sum", decimal(r.partial, digits));
        if (mode == SumMode::accelerated) {
            row(out, "constant", decimal(r.constant, digits));
            row(out, "remainder", "[" + decimal(r.remainder_lo, 6) + ", " + decimal(r.remainder_hi, 6) + "]");
        }
        row(out, "numerical slack", decimal(r.numerical_slack, 3));
        if (r.enclosure) {
            row(out, "enclosure", "[" + decimal(r.enclosure->lo, digits) + ", " + decimal(r.enclosure->hi, digits) + "]");
            if (mode == SumMode::accelerated) {
                row(out, "width", decimal(r.enclosure->width(), 3));
                const std::string cd = certified_digits(*r.enclosure);
                row(out, "certified digits", cd.empty() ? "(none)" : cd);
            }
        }
        row(out, "elapsed", std::to_string(r.elapsed_ms) + " ms" + (r.resumed ? " (resumed)" : ""));
        print_checks(out, checks);
    }

    Json config;
    config["series"] = to_string(kind);
    config["x"] = a.x;
    config["mode"] = to_string(mode);
    Json exec = execution_json(c, r.elapsed_ms);
    exec["resumed"] = r.resumed;
    exec["checkpoint"] = opts.checkpoint ? Json(opts.checkpoint->string()) : Json(nullptr);
    return finish(out, c, to_string(kind), config, detail::sum_result_json(r), checks, exec);
}

// oracle -------------------------------------------------------------------

struct OracleArgs {
    std::uint64_t n = 1'000'000;
    std::uint64_t max_n = kOracleDefaultCap;
};

int cmd_oracle(const OracleArgs& a, const Common& c, std::ostream& out) {
    if (a.n < 1) throw InvalidArgument("--n must be at least 1");
    Stopwatch clock;
    const Json& rows = reference({"partial_sum_table", "rows"});
    std::vector<std::uint64_t> points{a.n};
    for (std::uint64_t p = 10; p <= a.n; p *= 10) points.push_back(p);
    for (const auto& r : rows) {
        const auto n = r.at("n").get<std::uint64_t>();
        if (n <= a.n) points.push_back(n);
    }
    const PartialSumSeries series = partial_sums(a.n, points, a.max_n);
    const int digits = c.digits_or(12);

    std::vector<Check> checks;
    for (const auto& r : rows) {
        const auto n = r.at("n").get<std::uint64_t>();
        if (n > a.n) continue;
        const auto it = std::find_if(series.checkpoints.begin(), series.checkpoints.end(),
                                     [n](const PartialSumPoint& p) { return p.n == n; });
        const std::string which = r.at("series").get<std::string>();
        const std::string printed = r.at("value").get<std::string>();
        const DD tol = r.contains("tolerance") ? ref_dd(r.at("tolerance")) : last_digit_unit(printed);
        const DD got = which == "sa" ? it->sa : it->sb;
        checks.push_back(within((which == "sa" ? "Sa_" : "Sb_") + std::to_string(n), got, from_decimal(printed), tol,
                                digits));
        checks.back().expected = printed;
    }

    std::vector<FitPoint> fit_points;
    for (const auto& p : series.checkpoints) {
        const double n = static_cast<double>(p.n);
        if (p.n >= 100 && std::pow(10.0, std::round(std::log10(n))) == n) fit_points.push_back({n, p.sa.to_double()});
    }
    std::optional<FitModel> fit;
    std::string fit_note;
    try {
        fit = fit_asymptote(fit_points);
    } catch (const Error& e) {
        fit_note = e.what();
    }
    const std::int64_t elapsed = clock.ms();

    if (!c.structured()) {
        out << "direct partial sums up to n = " << a.n << '\n';
        out << "  " << std::string(12, ' ') << "Sa_n" << std::string(digits + 2, ' ') << "Sb_n\n";
        for (const auto& p : series.checkpoints) {
            std::string n = std::to_string(p.n);
            std::string sa = decimal(p.sa, digits);
            out << "  " << n << std::string(n.size() < 12 ? 12 - n.size() : 1, ' ') << sa
                << std::string(sa.size() < static_cast<std::size_t>(digits) + 6 ? digits + 6 - sa.size() : 1, ' ')
                << decimal(p.sb, digits) << '\n';
        }
        print_checks(out, checks);
        if (fit) {
            const Json& rf = reference({"partial_sum_table", "fit"});
            out << "  fit Sa_n ~ a - b n^-c: a = " << decimal(fit->a, 7) << ", b = " << decimal(fit->b, 7)
                << ", c = " << decimal(fit->c, 6) << " (reference a = " << rf.at("a").get<std::string>()
                << ", b = " << rf.at("b").get<std::string>() << ", c = " << rf.at("c").get<std::string>() << ")\n";
        } else {
            out << "  fit skipped: " << fit_note << '\n';
        }
        row(out, "elapsed", std::to_string(elapsed) + " ms");
    }

    Json config;
    config["n"] = a.n;
    config["max_n"] = a.max_n;
    Json result;
    Json pts = Json::array();
    for (const auto& p : series.checkpoints) {
        Json j;
        j["n"] = p.n;
        j["sa"] = dd_json(p.sa);
        j["sb"] = dd_json(p.sb);
        pts.push_back(j);
    }
    result["points"] = pts;
    if (fit) {
        Json f;
        f["a"] = double_json(fit->a);
        f["b"] = double_json(fit->b);
        f["c"] = double_json(fit->c);
        f["residual_norm"] = double_json(fit->residual_norm);
        result["fit"] = f;
    } else {
        result["fit"] = nullptr;
    }
    return finish(out, c, "oracle", config, result, checks, execution_json(c, elapsed));
}

// pz -----------------------------------------------------------------------

struct PzArgs {
    std::string s = "2";
    int order = 2;
    std::uint64_t split = 1000;
    int k_max = 60;
    bool constants = false;
};

int cmd_pz(const PzArgs& a, const Common& c, std::ostream& out) {
    const double s = parse_real(a.s, "--s");
    if (s < 2.0) throw InvalidArgument("--s must be at least 2");
    PrimeZetaSplit cfg;
    cfg.split_x = a.split;
    cfg.k_max = a.k_max;
    cfg.validate();
    Stopwatch clock;
    const PrimeZeta pz(cfg);
    const DD value = pz.evaluate(s, a.order);
    const int digits = c.digits_or(31);
    std::vector<Check> checks;

    if (a.order == 2) {
        const Json& table = reference({"second_derivative_table"});
        for (const auto& r : table.at("rows")) {
            if (r.at("s").get<double>() == s) {
                checks.push_back(within("P''(" + a.s + ")", value, ref_dd(r.at("value")), ref_dd(table.at("tolerance")),
                                        digits));
                checks.back().expected = r.at("value").get<std::string>();
            }
        }
    }
    if (a.order == 1 && s == 2.0) {
        const Json& k = reference({"constants"});
        checks.push_back(within("P'(2)", value, ref_dd(k.at("P1_2")), ref_dd(k.at("tolerance")), digits));
    }
    std::optional<DerivedConstants> derived;
    if (a.constants) {
        derived = derived_constants(cfg);
        const Json& k = reference({"constants"});
        const DD tol = ref_dd(k.at("tolerance"));
        checks.push_back(within("Cb", derived->Cb, ref_dd(k.at("Cb")), tol, digits));
        checks.push_back(within("Ca", derived->Ca, ref_dd(k.at("Ca")), tol, digits));
    }
    const std::int64_t elapsed = clock.ms();

    static const char* const primes[] = {"", "'", "''"};
    if (!c.structured()) {
        out << "P" << primes[a.order] << "(" << a.s << ") = " << decimal(value, digits) << '\n';
        if (derived) {
            row(out, "Cb", decimal(derived->Cb, digits));
            row(out, "Ca", decimal(derived->Ca, digits));
        }
        print_checks(out, checks);
    }

    Json config;
    config["s"] = double_json(s);
    config["order"] = a.order;
    config["split_x"] = a.split;
    config["k_max"] = a.k_max;
    Json result;
    result["value"] = dd_json(value);
    if (derived) {
        result["Cb"] = dd_json(derived->Cb);
        result["Ca"] = dd_json(derived->Ca);
    }
    return finish(out, c, "pz", config, result, checks, execution_json(c, elapsed));
}

// check-bounds -------------------------------------------------------------

struct BoundsArgs {
    std::uint64_t from = kRemainderThreshold;
    std::uint64_t to = 100'000'000;
};

std::string violation_text(const BoundsViolation& v) {
    return v.side + " side at x = " + std::to_string(v.x) + ", margin " + decimal(v.margin, 4);
}

int cmd_check_bounds(const BoundsArgs& a, const Common& c, std::ostream& out) {
    if (a.from > a.to) throw InvalidArgument("--from must not exceed --to");
    EngineOptions opts = c.engine();
    opts.validate();
    Stopwatch clock;
    const BoundsReport r = check_mertens_bounds(a.from, a.to, opts);
    const std::int64_t elapsed = clock.ms();

    Check ok;
    ok.name = "no violations on [" + std::to_string(a.from) + ", " + std::to_string(a.to) + "]";
    ok.pass = r.violations == 0;
    ok.got = std::to_string(r.violations) + " violations";
    const std::vector<Check> checks{ok};

    if (!c.structured()) {
        out << "Mertens product inequality on [" << a.from << ", " << a.to << "]\n";
        row(out, "primes checked", std::to_string(r.primes_checked));
        row(out, "min upper margin", decimal(r.min_upper_margin, 4) + " at x = " + std::to_string(r.argmin_upper));
        row(out, "min lower margin", decimal(r.min_lower_margin, 4) + " as x -> " + std::to_string(r.argmin_lower));
        row(out, "violations", std::to_string(r.violations));
        if (r.first_violation) row(out, "first violation", violation_text(*r.first_violation));
        if (r.last_violation) row(out, "last violation", violation_text(*r.last_violation));
        row(out, "elapsed", std::to_string(elapsed) + " ms");
        print_checks(out, checks);
    }

    Json config;
    config["from"] = a.from;
    config["to"] = a.to;
    return finish(out, c, "check-bounds", config, detail::bounds_report_json(r), checks, execution_json(c, elapsed));
}

// self-test ----------------------------------------------------------------

int cmd_self_test(const Common& c, std::ostream& out) {
    Stopwatch clock;
    std::vector<Check> checks;
    const int digits = c.digits_or(20);

    const Json& k = reference({"constants"});
    const DerivedConstants derived = derived_constants();
    checks.push_back(within("Cb", derived.Cb, ref_dd(k.at("Cb")), ref_dd(k.at("tolerance")), digits));
    checks.push_back(within("Ca", derived.Ca, ref_dd(k.at("Ca")), ref_dd(k.at("tolerance")), digits));

    const PrimeZeta pz;
    const Json& table = reference({"second_derivative_table"});
    for (const auto& r : table.at("rows")) {
        const double s = r.at("s").get<double>();
        checks.push_back(within("P''(" + std::to_string(r.at("s").get<int>()) + ")", pz.evaluate(s, 2),
                                ref_dd(r.at("value")), ref_dd(table.at("tolerance")), 31));
        checks.back().expected = r.at("value").get<std::string>();
    }

    std::vector<std::uint64_t> ns;
    const Json& rows = reference({"partial_sum_table", "rows"});
    const std::uint64_t n_max = 3'000'000;
    for (const auto& r : rows) {
        const auto n = r.at("n").get<std::uint64_t>();
        if (n <= n_max) ns.push_back(n);
    }
    const PartialSumSeries series = partial_sums(n_max, ns);
    for (const auto& r : rows) {
        const auto n = r.at("n").get<std::uint64_t>();
        if (n > n_max) continue;
        const auto& p = *std::find_if(series.checkpoints.begin(), series.checkpoints.end(),
                                      [n](const PartialSumPoint& q) { return q.n == n; });
        const std::string which = r.at("series").get<std::string>();
        const std::string printed = r.at("value").get<std::string>();
        const DD tol = r.contains("tolerance") ? ref_dd(r.at("tolerance")) : last_digit_unit(printed);
        checks.push_back(within((which == "sa" ? "Sa_" : "Sb_") + std::to_string(n), which == "sa" ? p.sa : p.sb,
                                from_decimal(printed), tol, 12));
        checks.back().expected = printed;
    }

    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        const auto rep = smooth_identity_check(p, 60);
        const double worst = std::max({rep.discrepancy, rep.discrepancy_d, rep.engine_b_discrepancy,
                                       rep.engine_a_discrepancy});
        Check s;
        s.name = "smooth identities for G(n) = " + std::to_string(p);
        s.pass = worst <= 1e-25;
        s.got = decimal(worst, 3);
        s.tolerance = "1e-25";
        checks.push_back(s);
    }

    const SumResult tiny = run_sb(3, SumMode::raw, DD());
    checks.push_back(within("raw Sb at x = 3", tiny.partial, ratio(11.0, 6.0), DD(1e-30), 31));

    const Json& cor = reference({"full_runs", "sb"});
    const SumResult sb = run_sb(cor.at("x").get<std::uint64_t>(), SumMode::accelerated, derived.Cb, c.engine());
    for (auto& ch : series_checks(sb, cor, digits)) checks.push_back(std::move(ch));
    const std::int64_t elapsed = clock.ms();

    if (!c.structured()) {
        out << "self-test\n";
        print_checks(out, checks);
        const auto failed = std::count_if(checks.begin(), checks.end(), [](const Check& ch) { return !ch.pass; });
        row(out, "summary", std::to_string(checks.size() - failed) + " passed, " + std::to_string(failed) + " failed");
        row(out, "elapsed", std::to_string(elapsed) + " ms");
    }
    Json result;
    result["checks_run"] = checks.size();
    return finish(out, c, "self-test", Json::object(), result, checks, execution_json(c, elapsed));
}

// parsing ------------------------------------------------------------------

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--threads", c.threads, "worker threads (default from " + std::string(kThreadsEnv) + " or 1)")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--segment-size", c.segment_size, "sieve segment length");
    sub->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    sub->add_option("--digits", c.digits, "significant digits in text output")->check(CLI::Range(1, 31));
}

void add_series_options(CLI::App* sub, SeriesArgs& a) {
    sub->add_option("--x", a.x, "sum over primes p <= x");
    sub->add_option("--mode", a.mode, "raw or accel")->check(CLI::IsMember({"raw", "accel"}));
    sub->add_option("--checkpoint", a.checkpoint, "checkpoint file");
    sub->add_flag("--resume", a.resume, "continue from --checkpoint");
    sub->add_option("--checkpoint-every", a.checkpoint_every)->group("")->check(CLI::Range(1u, 1u << 20));
    sub->add_option("--stop-after-blocks", a.stop_after_blocks)->group("");
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Common common;
    common.threads = default_threads();

    CLI::App app{"Prime sums weighted by greatest prime factors"};
    app.name("gpfsum");
    app.require_subcommand(1);

    SeriesArgs sb_args, sa_args;
    sb_args.x = 86'028'161;
    sa_args.x = 2'576'983'867;
    auto* sb = app.add_subcommand("sb", "enclose Sb = sum 1/(n G(n))");
    add_series_options(sb, sb_args);
    add_common(sb, common);
    auto* sa = app.add_subcommand("sa", "enclose Sa = sum d(n)/(n G(n))");
    add_series_options(sa, sa_args);
    add_common(sa, common);

    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "direct partial sums against the reference table");
    oracle->add_option("--n", oracle_args.n, "sum over n <= N");
    oracle->add_option("--max-n", oracle_args.max_n, "memory guard (at most 10^8)");
    add_common(oracle, common);

    PzArgs pz_args;
    auto* pz = app.add_subcommand("pz", "prime zeta function and derivatives");
    pz->add_option("--s", pz_args.s, "argument, at least 2");
    pz->add_option("--order", pz_args.order, "0, 1 or 2")->check(CLI::Range(0, 2));
    pz->add_option("--split", pz_args.split, "primes up to this are summed directly");
    pz->add_option("--k-max", pz_args.k_max, "Moebius series terms");
    pz->add_flag("--constants", pz_args.constants, "also derive Cb and Ca");
    add_common(pz, common);

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("check-bounds", "check the Mertens product inequality at every prime");
    bounds->add_option("--from", bounds_args.from);
    bounds->add_option("--to", bounds_args.to);
    add_common(bounds, common);

    auto* self = app.add_subcommand("self-test", "compare against the embedded reference values");
    add_common(self, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidArgs;
    }

    if (sb->parsed()) return cmd_series(SeriesKind::sb, sb_args, common, out);
    if (sa->parsed()) return cmd_series(SeriesKind::sa, sa_args, common, out);
    if (oracle->parsed()) return cmd_oracle(oracle_args, common, out);
    if (pz->parsed()) return cmd_pz(pz_args, common, out);
    if (bounds->parsed()) return cmd_check_bounds(bounds_args, common, out);
    return cmd_self_test(common, out);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidArgs;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitComputation;
    }
}

std::string rerender_report(std::string_view report) {
    try {
        return detail::dump(Json::parse(report));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("not a structured report: ") + e.what());
    }
}

std::string strip_execution(std::string_view report) {
    try {
        Json j = Json::parse(report);
        j.erase("execution");
        return detail::dump(j);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("not a structured report: ") + e.what());
    }
}

} // namespace gpfsum

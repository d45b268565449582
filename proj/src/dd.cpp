#include "gpfsum/dd.hpp"

#include "gpfsum/error.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace gpfsum {

namespace {

using boost::multiprecision::cpp_int;

constexpr int kMaxSeriesTerms = 40;

// 1/n! for n = 0..18 (n! is exact in binary64 up to 18!).
const std::array<DD, 19>& inverse_factorials() {
    static const std::array<DD, 19> table = [] {
        std::array<DD, 19> t{};
        double f = 1.0;
        for (int n = 0; n < 19; ++n) {
            if (n > 0) f *= n;
            t[n] = ratio(1.0, f);
        }
        return t;
    }();
    return table;
}

// (-1)^(k+1) / k for k = 1..kMaxSeriesTerms, index k.
const std::array<DD, kMaxSeriesTerms + 1>& alternating_reciprocals() {
    static const std::array<DD, kMaxSeriesTerms + 1> table = [] {
        std::array<DD, kMaxSeriesTerms + 1> t{};
        for (int k = 1; k <= kMaxSeriesTerms; ++k) {
            t[k] = ratio(k % 2 == 1 ? 1.0 : -1.0, static_cast<double>(k));
        }
        return t;
    }();
    return table;
}

// v = mantissa * 2^exponent with an integer mantissa; v must be finite.
void split_double(double v, cpp_int& mantissa, int& exponent) {
    if (v == 0.0) {
        mantissa = 0;
        exponent = 0;
        return;
    }
    int e = 0;
    const double m = std::frexp(v, &e);
    mantissa = static_cast<long long>(std::ldexp(m, 53));
    exponent = e - 53;
}

cpp_int pow10(int n) {
    cpp_int r = 1;
    for (int i = 0; i < n; ++i) r *= 10;
    return r;
}

} // namespace

DD powi(DD base, long long n) {
    if (n < 0) {
        base = DD(1.0) / base;
        n = -n;
    }
    DD result(1.0);
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base = sqr(base);
    }
    return result;
}

DD exp(DD x) {
    if (!x.is_finite()) {
        if (x.hi == -std::numeric_limits<double>::infinity()) return DD(0.0);
        return DD(std::numeric_limits<double>::quiet_NaN());
    }
    if (x.hi > 709.75) return DD(std::numeric_limits<double>::infinity());
    if (x.hi < -745.0) return DD(0.0);

    const DD& ln2 = constants().ln2;
    const double k = std::nearbyint(x.hi / ln2.hi);
    DD r = ldexp(x - ln2 * k, -10);

    // expm1(r), |r| <= 3.4e-4: ten Taylor terms are well past 2^-110.
    const auto& inv_fact = inverse_factorials();
    DD t = r * inv_fact[10];
    for (int n = 9; n >= 1; --n) {
        t = (t + inv_fact[n]) * r;
    }
    for (int i = 0; i < 10; ++i) {
        // e^(2r) - 1 = (e^r - 1)(e^r - 1 + 2)
        t = ldexp(t, 1) + sqr(t);
    }
    return ldexp(t + 1.0, static_cast<int>(k));
}

DD log(DD x) {
    if (!(x.hi > 0.0) || !x.is_finite()) {
        return DD(x.hi == 0.0 ? -std::numeric_limits<double>::infinity()
                              : std::numeric_limits<double>::quiet_NaN());
    }
    const double y0 = std::log(x.hi);
    const DD d = x * exp(DD(-y0)) - 1.0;
    return DD(y0) + (d - ldexp(sqr(d), -1));
}

DD log(double x) { return log(DD(x)); }

DD log1p(DD r) {
    const double a = std::fabs(r.hi);
    if (!(a <= kLog1pMaxArgument)) {
        throw PreconditionError("log1p argument outside |r| <= 2^-10");
    }
    if (a == 0.0) return DD(0.0);

    // Smallest n with a^n / ((n+1)(1-a)) <= 2^-110.
    int n = 1;
    double an = a;
    while (an / ((n + 1) * (1.0 - a)) > 0x1p-110) {
        ++n;
        an *= a;
    }
    const auto& c = alternating_reciprocals();
    DD s = c[n];
    for (int k = n - 1; k >= 1; --k) {
        s = s * r + c[k];
    }
    return s * r;
}

std::string to_decimal(DD x, int digits, Rounding mode) {
    if (digits < 1 || digits > 31) {
        throw InvalidArgument("decimal rendering supports 1..31 digits");
    }
    if (!x.is_finite()) {
        throw ComputationError("cannot render a non-finite value");
    }

    cpp_int mh, ml;
    int eh = 0, el = 0;
    split_double(x.hi, mh, eh);
    split_double(x.lo, ml, el);
    if (ml == 0) el = eh;
    if (mh == 0) eh = el;
    const int e2 = std::min(eh, el);
    cpp_int m = (mh << (eh - e2)) + (ml << (el - e2));

    std::string sign;
    if (m < 0) {
        sign = "-";
        m = -m;
    }

    std::string body;
    int k = 0;  // decimal exponent of the leading digit
    if (m == 0) {
        body.assign(static_cast<std::size_t>(digits), '0');
    } else {
        k = static_cast<int>(std::floor(std::log10(std::fabs(x.hi))));
        const cpp_int lower = pow10(digits - 1);
        const cpp_int upper = lower * 10;
        cpp_int q;
        for (int attempt = 0; attempt < 8; ++attempt) {
            const int t = digits - 1 - k;
            cpp_int num = m;
            cpp_int den = 1;
            if (e2 >= 0) num <<= e2; else den <<= -e2;
            if (t >= 0) num *= pow10(t); else den *= pow10(-t);
            q = num / den;
            const cpp_int rem = num - q * den;
            if (q < lower) { --k; continue; }
            if (q >= upper) { ++k; continue; }
            if (mode == Rounding::nearest) {
                const cpp_int twice = rem * 2;
                if (twice > den || (twice == den && (q & 1) != 0)) ++q;
            }
            if (q == upper) {
                q = lower;
                ++k;
            }
            break;
        }
        body = q.str();
    }

    std::string out = sign;
    if (k >= -5 && k <= 20) {
        if (k >= 0) {
            const auto int_len = static_cast<std::size_t>(k + 1);
            if (body.size() <= int_len) {
                out += body + std::string(int_len - body.size(), '0');
            } else {
                out += body.substr(0, int_len) + "." + body.substr(int_len);
            }
        } else {
            out += "0." + std::string(static_cast<std::size_t>(-k - 1), '0') + body;
        }
    } else {
        out += body.substr(0, 1);
        if (body.size() > 1) out += "." + body.substr(1);
        char exp_buf[16];
        std::snprintf(exp_buf, sizeof exp_buf, "e%c%02d", k < 0 ? '-' : '+', k < 0 ? -k : k);
        out += exp_buf;
    }
    return out;
}

DD from_decimal(std::string_view text) {
    using Wide = boost::multiprecision::number<
        boost::multiprecision::cpp_bin_float<120>, boost::multiprecision::et_off>;
    Wide v;
    try {
        v = Wide(std::string(text));
    } catch (const std::exception&) {
        throw InvalidArgument("not a decimal literal: " + std::string(text));
    }
    const double hi = v.convert_to<double>();
    if (!std::isfinite(hi)) throw InvalidArgument("decimal literal out of range");
    const double lo = Wide(v - Wide(hi)).convert_to<double>();
    return eft::fast_two_sum(hi, lo);
}

std::string hex_bits(double v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
    return buf;
}

double from_hex_bits(std::string_view text) {
    if (text.size() != 16) throw InvalidArgument("hex bit pattern must have 16 digits");
    for (char ch : text) {
        if (!((ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f'))) {
            throw InvalidArgument("hex bit pattern must be lowercase hexadecimal");
        }
    }
    std::uint64_t bits = 0;
    std::from_chars(text.data(), text.data() + text.size(), bits, 16);
    return std::bit_cast<double>(bits);
}

const Constants& constants() {
    static const Constants c{
        from_decimal("0.577215664901532860606512090082402431042159336"),
        from_decimal("1.78107241799019798523650410310717954916964521"),
        from_decimal("3.17221895812545052772791340906947497712295774"),
        from_decimal("0.693147180559945309417232121458176568075500134"),
    };
    return c;
}

} // namespace gpfsum

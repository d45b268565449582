#pragma once

// Double-word arithmetic: a real number carried as the unevaluated sum of
// two binary64 values.  Kernels follow the error-free transformation
// algorithms of Joldes, Muller and Popescu (ACM TOMS 44, 2017); the
// division is the three-quotient variant used by the QD library.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace gpfsum {

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DD() = default;
    constexpr DD(double h) : hi(h) {}  // NOLINT: implicit widening is intended
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    constexpr double to_double() const { return hi + lo; }
    bool is_finite() const { return std::isfinite(hi) && std::isfinite(lo); }
    /// True when hi == RN(hi + lo), i.e. |lo| <= ulp(hi)/2.
    bool is_normalized() const { return hi + lo == hi; }
};

namespace eft {

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

// Requires |a| >= |b| (or a == 0).
inline DD fast_two_sum(double a, double b) {
    const double s = a + b;
    const double e = b - (s - a);
    return {s, e};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    const double e = std::fma(a, b, -p);
    return {p, e};
}

} // namespace eft

// AccurateDWPlusDW, relative error <= 3u^2 + 13u^3.
inline DD operator+(DD x, DD y) {
    const DD s = eft::two_sum(x.hi, y.hi);
    const DD t = eft::two_sum(x.lo, y.lo);
    const double c = s.lo + t.hi;
    const DD v = eft::fast_two_sum(s.hi, c);
    const double w = t.lo + v.lo;
    return eft::fast_two_sum(v.hi, w);
}

// DWPlusFP, relative error <= 2u^2.
inline DD operator+(DD x, double y) {
    const DD s = eft::two_sum(x.hi, y);
    const double v = x.lo + s.lo;
    return eft::fast_two_sum(s.hi, v);
}
inline DD operator+(double x, DD y) { return y + x; }

inline DD operator-(DD x) { return {-x.hi, -x.lo}; }
inline DD operator-(DD x, DD y) { return x + (-y); }
inline DD operator-(DD x, double y) { return x + (-y); }
inline DD operator-(double x, DD y) { return (-y) + x; }

// DWTimesDW3, relative error <= 4u^2.
inline DD operator*(DD x, DD y) {
    const DD c = eft::two_prod(x.hi, y.hi);
    const double tl0 = x.lo * y.lo;
    const double tl1 = std::fma(x.hi, y.lo, tl0);
    const double cl2 = std::fma(x.lo, y.hi, tl1);
    const double cl3 = c.lo + cl2;
    return eft::fast_two_sum(c.hi, cl3);
}

// DWTimesFP3, relative error <= 2u^2.
inline DD operator*(DD x, double y) {
    const DD c = eft::two_prod(x.hi, y);
    const double cl3 = std::fma(x.lo, y, c.lo);
    return eft::fast_two_sum(c.hi, cl3);
}
inline DD operator*(double x, DD y) { return y * x; }

// DWDivFP3, relative error <= 3u^2.
inline DD operator/(DD x, double y) {
    const double th = x.hi / y;
    const DD p = eft::two_prod(th, y);
    const double dh = x.hi - p.hi;
    const double dl = x.lo - p.lo;
    const double d = dh + dl;
    const double tl = d / y;
    return eft::fast_two_sum(th, tl);
}

inline DD operator/(DD x, DD y) {
    const double q1 = x.hi / y.hi;
    DD r = x - y * q1;
    const double q2 = r.hi / y.hi;
    r = r - y * q2;
    const double q3 = r.hi / y.hi;
    return eft::fast_two_sum(q1, q2) + q3;
}
inline DD operator/(double x, DD y) { return DD(x) / y; }

inline DD& operator+=(DD& a, DD b) { return a = a + b; }
inline DD& operator+=(DD& a, double b) { return a = a + b; }
inline DD& operator-=(DD& a, DD b) { return a = a - b; }
inline DD& operator-=(DD& a, double b) { return a = a - b; }
inline DD& operator*=(DD& a, DD b) { return a = a * b; }
inline DD& operator*=(DD& a, double b) { return a = a * b; }
inline DD& operator/=(DD& a, DD b) { return a = a / b; }
inline DD& operator/=(DD& a, double b) { return a = a / b; }

inline bool operator==(DD a, DD b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(DD a, DD b) { return !(a == b); }
inline bool operator<(DD a, DD b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(DD a, DD b) { return b < a; }
inline bool operator<=(DD a, DD b) { return !(b < a); }
inline bool operator>=(DD a, DD b) { return !(a < b); }

inline DD abs(DD a) { return a.hi < 0.0 ? -a : a; }
inline DD ldexp(DD a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }
inline DD sqr(DD a) { return a * a; }

/// a / b for binary64 a, b, correct to about u^2; exact rational when a and b
/// are integers below 2^53.
inline DD ratio(double a, double b) {
    const double q = a / b;
    const double r = std::fma(-q, b, a);
    return eft::fast_two_sum(q, r / b);
}

/// Integer power by binary exponentiation; n may be negative.
DD powi(DD base, long long n);

/// e^x.  Argument reduced by ln 2 and 2^-10, Taylor core, expm1 squaring.
DD exp(DD x);

/// Natural logarithm for x > 0 (one log1p-corrected Newton step on exp).
DD log(DD x);
DD log(double x);

/// ln(1 + r) for |r| <= 2^-10 by the alternating Taylor series, truncated
/// once the remainder bound |r|^(n+1) / ((n+1)(1-|r|)) drops below
/// 2^-110 |r|.  Throws PreconditionError for larger |r|.
DD log1p(DD r);

inline constexpr double kLog1pMaxArgument = 0x1p-10;

enum class Rounding { nearest, toward_zero };

/// Decimal rendering of hi + lo with `digits` significant digits (1..31),
/// computed from the exact binary value.  Fixed notation for decimal
/// exponents in [-5, 20], scientific otherwise.
std::string to_decimal(DD x, int digits, Rounding mode = Rounding::nearest);

/// Parses a decimal literal (optional sign, fraction, exponent) to the
/// nearest double-word value.
DD from_decimal(std::string_view text);

/// Lowercase 16-digit hexadecimal bit pattern of a binary64 value.
std::string hex_bits(double v);
double from_hex_bits(std::string_view text);

struct Constants {
    DD gamma;       // Euler-Mascheroni
    DD exp_gamma;   // e^gamma
    DD exp_2gamma;  // e^(2 gamma)
    DD ln2;
};

/// Compiled-in constants, parsed once from 45-digit literals.
const Constants& constants();

} // namespace gpfsum

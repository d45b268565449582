#include "gpfsum/zeta.hpp"

#include "gpfsum/error.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace gpfsum {

void EulerMaclaurinConfig::validate() const {
    if (cutoff < 16) throw InvalidArgument("Euler-Maclaurin cutoff must be at least 16");
    if (bernoulli_terms < 1 || bernoulli_terms > 15) {
        throw InvalidArgument("Euler-Maclaurin uses between 1 and 15 Bernoulli terms");
    }
    if (!(target_eps >= 1e-32)) throw InvalidArgument("Euler-Maclaurin target_eps must be >= 1e-32");
}

const std::array<DD, 16>& bernoulli_table() {
    static const std::array<DD, 16> table = [] {
        // Numerator / denominator of B_{2j}; all exact in binary64.
        constexpr double num[16] = {1.0,         1.0,        -1.0,          1.0,
                                    -1.0,        5.0,        -691.0,        7.0,
                                    -3617.0,     43867.0,    -174611.0,     854513.0,
                                    -236364091.0, 8553103.0, -23749461029.0, 8615841276005.0};
        constexpr double den[16] = {1.0,   6.0,    30.0,   42.0,  30.0, 66.0,   2730.0, 6.0,
                                    510.0, 798.0,  330.0,  138.0, 2730.0, 6.0,  870.0,  14322.0};
        std::array<DD, 16> t{};
        for (int j = 0; j < 16; ++j) t[j] = ratio(num[j], den[j]);
        return t;
    }();
    return table;
}

namespace {

bool is_integral(double s) { return s == std::floor(s) && std::fabs(s) < 1e15; }

// n^-s as a double-word value.
DD inverse_power(double n, double s, DD ln_n) {
    if (is_integral(s)) return powi(ratio(1.0, n), static_cast<long long>(s));
    return exp(-(DD(s) * ln_n));
}

} // namespace

ZetaDerivatives zeta_derivatives(double s, const EulerMaclaurinConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(s)) throw InvalidArgument("zeta argument must be finite");
    if (s < 2.0) throw PreconditionError("zeta evaluation is supported for s >= 2 only");

    const int N = cfg.cutoff;
    const DD sd(s);

    DD direct0, direct1, direct2;
    for (int n = N - 1; n >= 2; --n) {
        const DD ln_n = log(static_cast<double>(n));
        const DD t = inverse_power(n, s, ln_n);
        const DD lt = ln_n * t;
        direct0 += t;
        direct1 -= lt;
        direct2 += ln_n * lt;
    }
    direct0 += 1.0;

    const double Nd = static_cast<double>(N);
    const DD ln_N = log(Nd);
    const DD n_pow = inverse_power(Nd, s, ln_N);  // N^-s
    const DD sm1 = sd - 1.0;
    const DD inv_sm1 = DD(1.0) / sm1;

    // N^(1-s)/(s-1) and N^-s/2 with their s-derivatives.
    const DD h = n_pow * Nd * inv_sm1;
    const DD h1 = -(h * (ln_N + inv_sm1));
    const DD h2 = h * (sqr(ln_N + inv_sm1) + sqr(inv_sm1));
    const DD g = ldexp(n_pow, -1);
    const DD g1 = -(g * ln_N);
    const DD g2 = g * sqr(ln_N);

    // T_j = B_2j / (2j)! * s(s+1)...(s+2j-2) * N^(-s-2j+1).
    const auto& bern = bernoulli_table();
    const DD inv_N2 = DD(1.0) / (DD(Nd) * Nd);
    DD rising_over_fact = sd * 0.5;  // s / 2!
    DD h_1 = DD(1.0) / sd;           // sum 1/(s+i)
    DD h_2 = sqr(h_1);               // sum 1/(s+i)^2
    DD n_factor = n_pow / Nd;        // N^(-s-1)
    DD em0, em1, em2;
    double last = 0.0;
    for (int j = 1; j <= cfg.bernoulli_terms; ++j) {
        const DD t = bern[j] * rising_over_fact * n_factor;
        const DD dlog = h_1 - ln_N;
        const DD t1 = t * dlog;
        const DD t2 = t * (sqr(dlog) - h_2);
        em0 += t;
        em1 += t1;
        em2 += t2;
        if (j == cfg.bernoulli_terms) {
            last = std::max({std::fabs(t.hi), std::fabs(t1.hi), std::fabs(t2.hi)});
        } else {
            const DD a = sd + static_cast<double>(2 * j - 1);
            const DD b = sd + static_cast<double>(2 * j);
            rising_over_fact = rising_over_fact * a * b / (static_cast<double>((2 * j + 1) * (2 * j + 2)));
            const DD ia = DD(1.0) / a;
            const DD ib = DD(1.0) / b;
            h_1 = h_1 + ia + ib;
            h_2 = h_2 + sqr(ia) + sqr(ib);
            n_factor *= inv_N2;
        }
    }

    if (last > cfg.target_eps) {
        std::ostringstream msg;
        msg << "Euler-Maclaurin did not converge at s=" << s << ": last correction " << last
            << " exceeds target " << cfg.target_eps << " (cutoff " << N << ", "
            << cfg.bernoulli_terms << " Bernoulli terms); increase the cutoff";
        throw ComputationError(msg.str());
    }

    ZetaDerivatives out;
    out.value = direct0 + h + g + em0;
    out.d1 = direct1 + h1 + g1 + em1;
    out.d2 = direct2 + h2 + g2 + em2;
    out.last_term = last;
    if (!out.value.is_finite() || !out.d1.is_finite() || !out.d2.is_finite()) {
        throw ComputationError("non-finite zeta evaluation");
    }
    return out;
}

DD zeta_em(double s, int order, const EulerMaclaurinConfig& cfg) {
    if (order < 0 || order > 2) throw InvalidArgument("zeta derivative order must be 0, 1 or 2");
    const ZetaDerivatives z = zeta_derivatives(s, cfg);
    return order == 0 ? z.value : order == 1 ? z.d1 : z.d2;
}

} // namespace gpfsum

#include "gpfsum/prime_zeta.hpp"

#include "gpfsum/error.hpp"
#include "gpfsum/sieve.hpp"

#include <cmath>
#include <string>

namespace gpfsum {

void PrimeZetaSplit::validate() const {
    if (split_x < 2) throw InvalidArgument("prime zeta split point must be at least 2");
    if (k_max < 1 || k_max > 1'000'000) throw InvalidArgument("prime zeta k_max must be in [1, 10^6]");
}

int mobius(std::uint64_t k) {
    if (k < 1 || k > 1'000'000) throw InvalidArgument("mobius is defined here for 1 <= k <= 10^6");
    int result = 1;
    for (std::uint64_t p = 2; p * p <= k; ++p) {
        if (k % p != 0) continue;
        k /= p;
        if (k % p == 0) return 0;
        result = -result;
    }
    if (k > 1) result = -result;
    return result;
}

PrimeZeta::PrimeZeta(PrimeZetaSplit cfg, EulerMaclaurinConfig zeta_cfg)
    : cfg_(cfg), zeta_cfg_(zeta_cfg) {
    cfg_.validate();
    zeta_cfg_.validate();
    for (std::uint64_t p : base_primes(cfg_.split_x)) {
        primes_.push_back(static_cast<double>(p));
        log_primes_.push_back(log(static_cast<double>(p)));
    }
}

DD PrimeZeta::inverse_power(std::size_t i, double t) const {
    if (t == std::floor(t) && t < 1e15) {
        return powi(ratio(1.0, primes_[i]), static_cast<long long>(t));
    }
    return exp(-(DD(t) * log_primes_[i]));
}

DD PrimeZeta::direct_part(double s, int order) const {
    DD sum;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        const DD q = inverse_power(i, s);
        if (order == 0) {
            sum += q;
        } else if (order == 1) {
            sum -= log_primes_[i] * q;
        } else {
            sum += sqr(log_primes_[i]) * q;
        }
    }
    return sum;
}

DD PrimeZeta::series_term(double s, int order, int k) const {
    const int mu = mobius(static_cast<std::uint64_t>(k));
    if (mu == 0) return DD(0.0);
    const double t = k * s;
    const ZetaDerivatives z = zeta_derivatives(t, zeta_cfg_);

    if (order == 0) {
        DD partial = z.value;
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            partial *= DD(1.0) - inverse_power(i, t);
        }
        return log(partial) / static_cast<double>(k) * static_cast<double>(mu);
    }

    // Sums over p <= x of ln p q/(1-q) and ln^2 p q/(1-q)^2, q = p^-t.
    DD prime_sum;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        const DD q = inverse_power(i, t);
        if (q.hi < 1e-300) break;
        const DD one_minus = DD(1.0) - q;
        if (order == 1) {
            prime_sum += log_primes_[i] * q / one_minus;
        } else {
            prime_sum += sqr(log_primes_[i]) * q / sqr(one_minus);
        }
    }
    const DD log_deriv = z.d1 / z.value;
    if (order == 1) {
        return (log_deriv + prime_sum) * static_cast<double>(mu);
    }
    const DD bracket = z.d2 / z.value - sqr(log_deriv) - prime_sum;
    return bracket * static_cast<double>(k * mu);
}

double PrimeZeta::term_envelope(double s, int order, int k) const {
    // Every n contributing to the k-th term has all prime factors > x, so
    // n >= y = x + 1; bound sum_{n>=y} ln^o(n) n^-t by f(y) + int_y^inf f.
    const double y = static_cast<double>(cfg_.split_x) + 1.0;
    const double t = k * s;
    const double ly = std::log(y);
    const double yt = std::exp(-t * ly);
    const double a = 1.0 / (t - 1.0);
    double f = yt;
    double integral = y * yt * a;
    if (order == 1) {
        f *= ly;
        integral *= ly + a;
    } else if (order == 2) {
        f *= ly * ly;
        integral *= ly * ly + 2.0 * ly * a + 2.0 * a * a;
    }
    const double geometric = 1.0 / (1.0 - yt);
    double env = (f + integral) * (order == 0 ? 1.0 : order == 1 ? geometric : geometric * geometric);
    if (order == 2) env *= k;
    return env;
}

int PrimeZeta::required_k_max(double s, int order) const {
    int k = cfg_.k_max;
    while (2.0 * term_envelope(s, order, k + 1) > 1e-32) ++k;
    return k;
}

std::vector<DD> PrimeZeta::series_terms(double s, int order) const {
    std::vector<DD> terms;
    for (int k = 1; k <= cfg_.k_max; ++k) terms.push_back(series_term(s, order, k));
    return terms;
}

DD PrimeZeta::evaluate(double s, int order) const {
    if (order < 0 || order > 2) throw InvalidArgument("prime zeta order must be 0, 1 or 2");
    if (!std::isfinite(s)) throw InvalidArgument("prime zeta argument must be finite");
    if (s < 2.0) throw PreconditionError("prime zeta is supported for s >= 2 only");

    // Terms shrink geometrically (ratio <= 2/9 for y >= 3, s >= 2), so twice
    // the first omitted envelope bounds the whole tail.
    if (2.0 * term_envelope(s, order, cfg_.k_max + 1) > 1e-32) {
        throw ComputationError("Moebius series truncated too early: k_max=" + std::to_string(cfg_.k_max) +
                               " leaves a tail above 1e-32; need k_max >= " +
                               std::to_string(required_k_max(s, order)));
    }

    DD series;
    for (int k = 1; k <= cfg_.k_max; ++k) {
        const DD term = series_term(s, order, k);
        const double env = term_envelope(s, order, k);
        if (std::fabs(term.hi) > env * (1.0 + 1e-12) + 1e-30) {
            throw ComputationError("Moebius term k=" + std::to_string(k) + " exceeds its decay envelope");
        }
        // The envelope underflows long before k_max for the default split.
        if (env == 0.0) break;
        series += term;
    }
    return direct_part(s, order) + series;
}

DD prime_zeta(double s, const PrimeZetaSplit& cfg) { return PrimeZeta(cfg).evaluate(s, 0); }
DD prime_zeta_d1(double s, const PrimeZetaSplit& cfg) { return PrimeZeta(cfg).evaluate(s, 1); }
DD prime_zeta_d2(double s, const PrimeZetaSplit& cfg) { return PrimeZeta(cfg).evaluate(s, 2); }

DerivedConstants derived_constants(const PrimeZetaSplit& cfg) {
    const PrimeZeta pz(cfg);
    const Constants& c = constants();
    const DD d1_2 = pz.evaluate(2.0, 1);
    const DD d2_2 = pz.evaluate(2.0, 2);
    const DD d2_3 = pz.evaluate(3.0, 2);
    DerivedConstants out;
    out.Cb = DD(1.0) - c.exp_gamma * d1_2;
    out.Ca = DD(1.0) + c.exp_2gamma * (ldexp(d2_2, 1) - d2_3);
    return out;
}

} // namespace gpfsum

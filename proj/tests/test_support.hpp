#pragma once

#include "freudcaps/freud.hpp"
#include "freudcaps/ivl.hpp"
#include "freudcaps/painleve.hpp"

#include <mpfr.h>

#include <stdexcept>
#include <string>
#include <vector>

#ifndef FREUDCAPS_CACHE_DIR
#define FREUDCAPS_CACHE_DIR ""
#endif

namespace fc::testing {

// Certified enclosure for kappa = 4, c- = 0.987, c+ = 1.025, computed once and cached on disk.
inline const BnEnclosure& kappa4_enclosure()
{
    static const BnEnclosure enc = [] {
        PrecisionGuard g(256);
        return cached_painleve(FREUDCAPS_CACHE_DIR, "4", "0.987", "1.025", PainleveOptions{});
    }();
    return enc;
}

inline const FreudCoeffs& kappa4_coeffs()
{
    static const FreudCoeffs c = [] {
        PrecisionGuard g(256);
        const BnEnclosure& enc = kappa4_enclosure();
        return coeffs_from_enclosure(enc, Ivl(4), static_cast<int>(enc.N2));
    }();
    return c;
}

// Decimal value widened by a relative tolerance.
inline Ivl around(const std::string& text, double rel)
{
    const Ivl v = Ivl::parse(text);
    return v + symmetric(abs(v) * Ivl(rel));
}

class MpfrVar {
public:
    explicit MpfrVar(long bits) { mpfr_init2(v_, bits); }
    ~MpfrVar() { mpfr_clear(v_); }
    MpfrVar(const MpfrVar&) = delete;
    MpfrVar& operator=(const MpfrVar&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

// Gamma(n / 4) for n >= 1 from Gamma(1/4)^2 = (2 pi)^{3/2} / AGM(sqrt 2, 1), reflection and recurrence.
inline void gamma_quarter(mpfr_ptr out, long n, long bits)
{
    MpfrVar g1(bits), g3(bits), t(bits), pi(bits), one(bits);
    mpfr_set_ui(one.get(), 1, MPFR_RNDN);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    mpfr_sqrt_ui(t.get(), 2, MPFR_RNDN);
    mpfr_agm(t.get(), t.get(), one.get(), MPFR_RNDN);
    mpfr_mul_2ui(g1.get(), pi.get(), 1, MPFR_RNDN);
    mpfr_pow_ui(g3.get(), g1.get(), 3, MPFR_RNDN);
    mpfr_sqrt(g3.get(), g3.get(), MPFR_RNDN);
    mpfr_div(g1.get(), g3.get(), t.get(), MPFR_RNDN);
    mpfr_sqrt(g1.get(), g1.get(), MPFR_RNDN);
    // Gamma(3/4) = pi sqrt(2) / Gamma(1/4)
    mpfr_sqrt_ui(t.get(), 2, MPFR_RNDN);
    mpfr_mul(g3.get(), pi.get(), t.get(), MPFR_RNDN);
    mpfr_div(g3.get(), g3.get(), g1.get(), MPFR_RNDN);
    long base = n % 4;
    if (base == 0 || base == 2) throw std::invalid_argument("gamma_quarter handles odd quarters only");
    mpfr_set(out, base == 1 ? g1.get() : g3.get(), MPFR_RNDN);
    for (long m = base; m < n; m += 4) mpfr_mul_d(out, out, static_cast<double>(m) / 4, MPFR_RNDN);
}

// I_nu(z) by its power series, plain MPFR at the given precision.
inline void bessel_i(mpfr_ptr out, long num, long den, mpfr_srcptr z, long bits)
{
    MpfrVar nu(bits), half(bits), q(bits), term(bits), t(bits), sum(bits);
    mpfr_set_si(nu.get(), num, MPFR_RNDN);
    mpfr_div_si(nu.get(), nu.get(), den, MPFR_RNDN);
    mpfr_div_2ui(half.get(), z, 1, MPFR_RNDN);
    mpfr_sqr(q.get(), half.get(), MPFR_RNDN);
    // (z/2)^nu / Gamma(nu + 1), then term_k = term_{k-1} (z/2)^2 / (k (k + nu))
    mpfr_pow(term.get(), half.get(), nu.get(), MPFR_RNDN);
    if (den == 4)
        gamma_quarter(t.get(), num + den, bits);
    else {
        mpfr_add_ui(t.get(), nu.get(), 1, MPFR_RNDN);
        mpfr_gamma(t.get(), t.get(), MPFR_RNDN);
    }
    mpfr_div(term.get(), term.get(), t.get(), MPFR_RNDN);
    mpfr_set(sum.get(), term.get(), MPFR_RNDN);
    for (long k = 1; k < 1000000; ++k) {
        mpfr_mul(term.get(), term.get(), q.get(), MPFR_RNDN);
        mpfr_div_si(term.get(), term.get(), k, MPFR_RNDN);
        mpfr_add_si(t.get(), nu.get(), k, MPFR_RNDN);
        mpfr_div(term.get(), term.get(), t.get(), MPFR_RNDN);
        mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
        if (k > 10 && (mpfr_zero_p(term.get()) || mpfr_get_exp(term.get()) < mpfr_get_exp(sum.get()) - bits - 8)) break;
    }
    mpfr_set(out, sum.get(), MPFR_RNDN);
}

// b_1 for exp(-x^4/4 + kappa x^2/2) from modified Bessel functions at z = kappa^2 / 8.
inline void bessel_b1(mpfr_ptr out, long kappa, long bits)
{
    MpfrVar z(bits), im(bits), i1(bits), i3(bits), i5(bits), num(bits), den(bits), k2(bits);
    mpfr_set_si(z.get(), kappa * kappa, MPFR_RNDN);
    mpfr_div_ui(z.get(), z.get(), 8, MPFR_RNDN);
    bessel_i(im.get(), -1, 4, z.get(), bits);
    bessel_i(i1.get(), 1, 4, z.get(), bits);
    bessel_i(i3.get(), 3, 4, z.get(), bits);
    bessel_i(i5.get(), 5, 4, z.get(), bits);
    mpfr_set_si(k2.get(), kappa * kappa, MPFR_RNDN);
    mpfr_add(num.get(), i3.get(), i5.get(), MPFR_RNDN);
    mpfr_add(num.get(), num.get(), im.get(), MPFR_RNDN);
    mpfr_mul(num.get(), num.get(), k2.get(), MPFR_RNDN);
    mpfr_add_ui(k2.get(), k2.get(), 4, MPFR_RNDN);
    mpfr_mul(k2.get(), k2.get(), i1.get(), MPFR_RNDN);
    mpfr_add(num.get(), num.get(), k2.get(), MPFR_RNDN);
    mpfr_add(den.get(), im.get(), i1.get(), MPFR_RNDN);
    mpfr_mul_si(den.get(), den.get(), 2 * kappa, MPFR_RNDN);
    mpfr_div(out, num.get(), den.get(), MPFR_RNDN);
}

// Non-rigorous forward recursion b_{n+1} = n / b_n - b_n - b_{n-1} + kappa from the Bessel b_1.
// Returns b_0..b_count as decimal strings with 100 significant digits.
inline std::vector<std::string> forward_oracle(long kappa, long count, long bits)
{
    std::vector<std::string> out;
    MpfrVar prev(bits), cur(bits), next(bits), t(bits);
    mpfr_set_zero(prev.get(), 1);
    bessel_b1(cur.get(), kappa, bits);
    out.emplace_back("0");
    char buf[192];
    for (long n = 1; n <= count; ++n) {
        mpfr_snprintf(buf, sizeof buf, "%.100Re", cur.get());
        out.emplace_back(buf);
        mpfr_si_div(next.get(), n, cur.get(), MPFR_RNDN);
        mpfr_sub(next.get(), next.get(), cur.get(), MPFR_RNDN);
        mpfr_sub(next.get(), next.get(), prev.get(), MPFR_RNDN);
        mpfr_add_si(next.get(), next.get(), kappa, MPFR_RNDN);
        mpfr_swap(prev.get(), cur.get());
        mpfr_swap(cur.get(), next.get());
    }
    return out;
}

}  // namespace fc::testing

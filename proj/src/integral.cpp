#include "freudcaps/integral.hpp"

#include <cmath>
#include <stdexcept>

namespace fc {

namespace {

// Gamma((j + 1) / 2) for j >= 0.
Ivl gamma_half_integer(int j)
{
    Ivl g = (j % 2 == 0) ? sqrt(Ivl::pi()) : Ivl(1);
    int twice_s = (j % 2 == 0) ? 1 : 2;  // 2 s with s the current argument
    while (twice_s < j + 1) {
        g = g * Ivl::rational(twice_s, 2);
        twice_s += 2;
    }
    return g;
}

// Coefficients of q(w) = p(c + w).
std::vector<Ivl> taylor_shift(const std::vector<Ivl>& p, const Ivl& c)
{
    std::vector<Ivl> q = p;
    const int n = static_cast<int>(q.size());
    for (int i = 0; i < n - 1; ++i)
        for (int k = n - 2; k >= i; --k) q[static_cast<std::size_t>(k)] += c * q[static_cast<std::size_t>(k + 1)];
    return q;
}

}  // namespace

Ivl enclose_weighted_integral(const std::vector<Ivl>& poly, const Ivl& kappa, const Ivl& m, double max_width)
{
    if (!m.positive()) throw std::invalid_argument("weight scale must be positive");
    std::vector<Ivl> p_even(poly.size(), Ivl(0));
    bool any_even = false;
    for (std::size_t j = 0; j < poly.size(); j += 2) {
        p_even[j] = poly[j];
        if (!(poly[j].is_point() && mpfr_zero_p(poly[j].lo()))) any_even = true;
    }
    if (!any_even) return Ivl(0);
    while (!p_even.empty() && p_even.back().is_point() && mpfr_zero_p(p_even.back().lo())) p_even.pop_back();

    const long bits = working_bits();
    const Ivl a = m / Ivl(8);
    const Ivl t = m * kappa / Ivl(4);

    // Gaussian domination beyond X: psi(x) - x^2 >= L and x^2 >= kappa + 4/m.
    Ivl s_tail(0);
    for (std::size_t j = 0; j < p_even.size(); ++j) s_tail += abs(p_even[j]) * gamma_half_integer(static_cast<int>(j)) / Ivl(2);
    const Ivl big_l = Ivl(static_cast<double>(bits + 16)) * Ivl::ln2() + log(Ivl(1) + s_tail);
    int x_cut = 1;
    for (;; ++x_cut) {
        const Ivl x(x_cut);
        const Ivl x2 = sqr(x);
        const Ivl psi = a * sqr(x2) - t * x2;
        if (certainly_ge(x2, kappa + Ivl(4) / m) && certainly_ge(psi - x2, big_l)) break;
        if (x_cut > 100000) throw EnclosureError("integral tail cutoff not found");
    }
    const Ivl tail = exp(-big_l) * s_tail;

    const int order = static_cast<int>(bits) + 10;
    const double a_d = a.mid_d();
    const double t_d = t.mid_d();
    const double x_end = x_cut;
    Ivl total(0);
    double x0 = 0.0;
    std::vector<Ivl> f(static_cast<std::size_t>(order) + 1);
    while (x0 < x_end) {
        double h = 0.25;
        while (2 * h > x_end - x0) h *= 0.5;
        for (;;) {
            const double c = x0 + h;
            const double r = 2 * h;
            const double g1 = std::fabs(4 * a_d * c * c * c - 2 * t_d * c);
            const double g2 = std::fabs(6 * a_d * c * c - t_d);
            const double g3 = std::fabs(4 * a_d * c);
            const double g4 = std::fabs(a_d);
            if (((g4 * r + g3) * r + g2) * r * r + g1 * r <= 1.0) break;
            h *= 0.5;
        }
        const Ivl c(x0 + h);
        const Ivl hh(h);
        const Ivl rho(2 * h);
        const Ivl c2 = sqr(c);
        // psi(c + w) - psi(c) = sum_{j=1}^4 psi_j w^j
        const Ivl psi[5] = {a * sqr(c2) - t * c2, Ivl(4) * a * c2 * c - Ivl(2) * t * c, Ivl(6) * a * c2 - t,
                            Ivl(4) * a * c, a};
        f[0] = Ivl(1);
        for (int k = 0; k < order; ++k) {
            Ivl s(0);
            for (int j = 1; j <= 4 && j <= k + 1; ++j) s += Ivl(j) * psi[j] * f[static_cast<std::size_t>(k + 1 - j)];
            f[static_cast<std::size_t>(k) + 1] = -s / Ivl(k + 1);
        }
        const std::vector<Ivl> q = taylor_shift(p_even, c);
        Ivl sum(0);
        Ivl hpow = hh;  // h^{k+1}
        for (int k = 0; k <= order; ++k) {
            if (k % 2 == 0) {
                Ivl gk(0);
                for (int i = 0; i <= k && i < static_cast<int>(q.size()); ++i)
                    gk += q[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(k - i)];
                sum += gk * Ivl(2) * hpow / Ivl(k + 1);
            }
            hpow *= hh;
        }
        Ivl qmax(0);
        Ivl rp(1);
        for (const Ivl& qi : q) {
            qmax += abs(qi) * rp;
            rp *= rho;
        }
        Ivl phimax(0);
        rp = rho;
        for (int j = 1; j <= 4; ++j) {
            phimax += abs(psi[j]) * rp;
            rp *= rho;
        }
        const Ivl e0 = exp(-psi[0]);
        const Ivl bound_m = e0 * qmax * exp(phimax);
        const Ivl rem = Ivl(2) * hh * bound_m * pow(Ivl(0.5), order);
        total += e0 * sum + symmetric(rem);
        x0 += 2 * h;
    }
    Ivl result = Ivl(2) * (total + symmetric(tail));
    if (result.width_d() > max_width)
        throw EnclosureError("weighted integral enclosure too wide: achieved width " + std::to_string(result.width_d()));
    return result;
}

Ivl agm(const Ivl& a0, const Ivl& b0)
{
    if (!a0.positive() || !b0.positive()) throw std::invalid_argument("AGM needs positive arguments");
    Ivl a = max(a0, b0);
    Ivl b = min(a0, b0);
    // b_k <= AGM <= a_k for every k >= 1.
    for (int it = 0; it < 200; ++it) {
        const Ivl an = (a + b) / Ivl(2);
        const Ivl bn = sqrt(a * b);
        a = an;
        b = bn;
        if (relatively_below(a - b, b, working_bits() - 4)) break;
    }
    Ivl out;
    mpfr_set(out.lo_mut(), b.lo(), MPFR_RNDD);
    mpfr_set(out.hi_mut(), a.hi(), MPFR_RNDU);
    return out;
}

Ivl gamma_quarter()
{
    const Ivl two_pi = Ivl(2) * Ivl::pi();
    const Ivl num = two_pi * sqrt(two_pi);
    return sqrt(num / agm(Ivl(1), sqrt(Ivl(2))));
}

Ivl weighted_even_moment(int p, const Ivl& kappa, const Ivl& m)
{
    if (p < 0) throw std::invalid_argument("moment order must be nonnegative");
    if (!m.positive()) throw std::invalid_argument("weight scale must be positive");
    const long bits = working_bits();
    const Ivl a = m / Ivl(8);
    const Ivl t = m * kappa / Ivl(4);
    const Ivl a_m14 = Ivl(1) / root4(a);
    const Ivl a_m12 = sqr(a_m14);
    const Ivl g14 = gamma_quarter();
    const Ivl g34 = Ivl::pi() * sqrt(Ivl(2)) / g14;

    // G_q = Gamma(1/4 + q/2)
    Ivl g_even = g14;  // G_q for even q
    Ivl g_odd = g34;   // G_q for odd q
    auto advance_to = [&](int q_target, int& q_even, int& q_odd) {
        while (q_even + 2 <= q_target) {
            g_even = g_even * (Ivl::rational(1, 4) + Ivl::rational(q_even, 2));
            q_even += 2;
        }
        while (q_odd + 2 <= q_target) {
            g_odd = g_odd * (Ivl::rational(1, 4) + Ivl::rational(q_odd, 2));
            q_odd += 2;
        }
    };
    int q_even = 0;
    int q_odd = 1;

    Ivl s = Ivl(0.5) * pow(a_m14, 2 * p + 1);
    Ivl sum(0);
    const Ivl abs_t = abs(t);
    for (int k = 0;; ++k) {
        const int q = p + k;
        advance_to(q, q_even, q_odd);
        const Ivl term = s * ((q % 2 == 0) ? g_even : g_odd);
        const Ivl rho = abs_t * a_m12 * sqrt(Ivl::rational(1, 4) + Ivl::rational(q, 2)) / Ivl(k + 1);
        if (k > 2 && rho.hi_d() < 0.5) {
            const Ivl tail_bound = abs(term) / (Ivl(1) - Ivl(rho.hi_d()));
            if (sum.positive() && relatively_below(tail_bound, sum, bits + 8)) return sum + symmetric(tail_bound);
        }
        sum += term;
        s = s * t * a_m12 / Ivl(k + 1);
        if (k > 10000000) throw EnclosureError("moment series did not converge");
    }
}

}  // namespace fc

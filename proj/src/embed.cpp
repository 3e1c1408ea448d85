#include "freudcaps/embed.hpp"

#include "freudcaps/integral.hpp"
#include "freudcaps/midrad.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fc {

namespace {

constexpr long kInverseBits = 512;

Ivl pow34(long n) { return root4(pow(Ivl(n), 3)); }

std::size_t u(long i) { return static_cast<std::size_t>(i); }

int parity_bit(Parity p)
{
    if (p == Parity::Mixed) throw std::invalid_argument("a parity block needs Even or Odd");
    return p == Parity::Odd ? 1 : 0;
}

void check_split(const FreudCoeffs& coeffs, int s, const CompactnessBounds& cb)
{
    if (s < cb.N) throw std::invalid_argument("split index " + std::to_string(s) + " lies below N = " + std::to_string(cb.N));
    if (s + 4 > coeffs.length - 2) throw std::invalid_argument("split index exceeds the available coefficients");
}

Ivl one_minus(const Ivl& x) { return Ivl(1) - x; }

}  // namespace

Ivl alpha_growth_constant(const Ivl& c_plus) { return root4(Ivl(3)) / sqrt(c_plus); }

Ivl beta_ratio_constant(const Ivl& c_plus, long N)
{
    if (N < 2) throw std::invalid_argument("N must be at least 2");
    const Ivl M(N - 1);
    return sqr(c_plus) / Ivl(3) * root4((Ivl(1) + Ivl(1) / M) * (Ivl(1) + Ivl(2) / M));
}

CompactnessBounds compactness_constants(const FreudCoeffs& coeffs, long N, const Ivl& c_plus)
{
    if (N < 3) throw std::invalid_argument("N must be at least 3");
    if (N > coeffs.length - 2) throw std::invalid_argument("N exceeds the available coefficients");
    CompactnessBounds cb;
    cb.N = N;
    cb.c_plus = c_plus;
    cb.C_alpha = alpha_growth_constant(c_plus);
    cb.theta = beta_ratio_constant(c_plus, N);
    if (!certainly_lt(cb.theta, Ivl(1))) throw EnclosureError("theta is not below 1");
    for (long n = N; n <= coeffs.length - 2; ++n) {
        const Ivl& al = coeffs.alpha[u(n)];
        if (!certainly_ge(al, cb.C_alpha * pow34(n)))
            throw EnclosureError("alpha_n >= C_alpha n^{3/4} fails at n = " + std::to_string(n));
        if (!certainly_le(coeffs.beta[u(n)], cb.theta * al))
            throw EnclosureError("beta_n <= theta alpha_n fails at n = " + std::to_string(n));
    }
    return cb;
}

int split_index(int n_split, Parity parity)
{
    const int p = parity_bit(parity);
    return (n_split % 2 == p) ? n_split : n_split + 1;
}

BandedUpperIvl parity_block(const FreudCoeffs& coeffs, int s, Parity parity, bool drop_leading)
{
    const int p = parity_bit(parity);
    if (s % 2 != p) throw std::invalid_argument("split index has the wrong parity");
    const BandedUpperIvl block = build_P(coeffs, s + 1).restrict_parity(p);
    if (!drop_leading || p == 1) return block;
    BandedUpperIvl out(block.dim() - 1, block.bandwidth());
    for (int d = 0; d <= block.bandwidth(); ++d)
        for (int i = 0; i + d < out.dim(); ++i) out.band(d, i) = block.band(d, i + 1);
    return out;
}

EmbeddingConstants tail_constants(const FreudCoeffs& coeffs, int n_split, const CompactnessBounds& cb, Parity parity)
{
    EmbeddingConstants e;
    e.C_alpha = cb.C_alpha;
    e.theta = cb.theta;
    e.parity = parity;
    e.n_split = split_index(n_split, parity);
    const int s = e.n_split;
    check_split(coeffs, s, cb);
    PrecisionGuard g(std::max(working_bits(), kInverseBits));
    const BandedUpperIvl pbar = parity_block(coeffs, s, parity);
    const Ivl col = norm2(pbar.inverse_column(pbar.dim() - 1));
    e.C12 = coeffs.beta[u(s)] * col / (cb.C_alpha * sqrt(one_minus(sqr(cb.theta))));
    e.C22 = Ivl(1) / (cb.C_alpha * one_minus(cb.theta));
    e.C = sqrt(sqr(e.C12) + sqr(e.C22));
    return e;
}

EmbeddingConstants compactness_constant(const FreudCoeffs& coeffs, int n_split, const CompactnessBounds& cb)
{
    const EmbeddingConstants even = tail_constants(coeffs, n_split, cb, Parity::Even);
    const EmbeddingConstants odd = tail_constants(coeffs, n_split, cb, Parity::Odd);
    return odd.C.hi_d() > even.C.hi_d() ? odd : even;
}

Ivl PoincareResult::enclosure() const { return Ivl(lower.lo(), upper.hi()); }

Ivl upper_triangular_norm(const Ivl& a, const Ivl& b, const Ivl& d)
{
    const Ivl s = sqr(a) + sqr(b) + sqr(d);
    const Ivl disc = max(sqr(s) - Ivl(4) * sqr(a) * sqr(d), Ivl(0));
    return sqrt((s + sqrt(disc)) / Ivl(2));
}

Ivl poincare_block_lower(const FreudCoeffs& coeffs, int n, Parity parity)
{
    const int s = split_index(n, parity);
    if (s < 4 || s + 1 > coeffs.length - 2) throw std::invalid_argument("truncation index outside the available coefficients");
    PrecisionGuard g(std::max(working_bits(), kInverseBits));
    const BandedUpperIvl d0 = parity_block(coeffs, s, parity, true);
    const MidRadMatrix inv = d0.inverse_dense();
    const MidRadMatrix m = multiply(inv, inv.transpose());
    const SymmetricTopEigen top = symmetric_top_eigen(m);
    // Rayleigh quotient |D0^{-T} v|^2 / |v|^2 with the numerical top singular vector v
    std::vector<Ivl> v(static_cast<std::size_t>(top.vector.size()));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = Ivl(top.vector(static_cast<Eigen::Index>(i)));
    const std::vector<Ivl> w = d0.solve_transpose(v);
    const Ivl lo = Ivl(dot(w, w).lo()) / Ivl(dot(v, v).hi());
    if (!certainly_le(Ivl(lo.lo()), Ivl(top.upper.hi()))) throw EnclosureError("Poincare bounds are inconsistent");
    return Ivl(lo.lo(), top.upper.hi());
}

Ivl poincare_lower(const FreudCoeffs& coeffs, int n)
{
    return max(poincare_block_lower(coeffs, n, Parity::Even), poincare_block_lower(coeffs, n, Parity::Odd));
}

PoincareResult poincare_enclosure(const FreudCoeffs& coeffs, int n, const CompactnessBounds& cb)
{
    PoincareResult r;
    r.n = n;
    Ivl upper_max(0);
    for (Parity parity : {Parity::Even, Parity::Odd}) {
        const EmbeddingConstants e = tail_constants(coeffs, n, cb, parity);
        const Ivl lower = poincare_block_lower(coeffs, n, parity);
        const Ivl scale = Ivl(1) / pow34(e.n_split);
        const Ivl up = sqr(upper_triangular_norm(sqrt(Ivl(lower.hi())), e.C12 * scale, e.C22 * scale));
        if (parity == Parity::Even)
            r.lower_even = lower;
        else
            r.lower_odd = lower;
        upper_max = max(upper_max, up);
    }
    r.lower = max(r.lower_even, r.lower_odd);
    r.upper = Ivl(upper_max.hi());
    return r;
}

FluxConstants flux_bound(const FreudCoeffs& coeffs, int n_split, const Ivl& c_minus, const CompactnessBounds& cb,
                         const Ivl& C_P_upper)
{
    FluxConstants f;
    const Ivl& cp = cb.c_plus;
    Ivl best(-1);
    for (Parity parity : {Parity::Even, Parity::Odd}) {
        const EmbeddingConstants e = tail_constants(coeffs, n_split, cb, parity);
        const int s = e.n_split;
        const int p = parity_bit(parity);
        Ivl ca, cbeta;
        {
            PrecisionGuard g(std::max(working_bits(), kInverseBits));
            const BandedUpperIvl pbar = parity_block(coeffs, s, parity);
            const int dim = pbar.dim();
            std::vector<Ivl> wa(u(dim)), wb(u(dim));
            for (int k = 0; k < dim; ++k) {
                const int j = p + 2 * k;
                wa[u(k)] = coeffs.alpha[u(j + 1)];
                wb[u(k)] = coeffs.beta[u(j + 1)];
            }
            const MidRadMatrix inv = pbar.inverse_dense();
            const std::vector<Ivl> last = pbar.inverse_column(dim - 1);
            std::vector<Ivl> la(last.size()), lb(last.size());
            for (std::size_t i = 0; i < last.size(); ++i) {
                la[i] = wa[i] * last[i];
                lb[i] = wb[i] * last[i];
            }
            const Ivl row = Ivl(1) / (cb.C_alpha * sqrt(one_minus(sqr(cb.theta))) * pow34(s));
            const Ivl top_a = spectral_norm_upper(scale_rows(inv, wa));
            const Ivl top_b = spectral_norm_upper(scale_rows(inv, wb));
            const Ivl sp2(s + 2);
            const Ivl tail_a = sqrt(cp / c_minus) / one_minus(cb.theta) * root4(pow(Ivl(s + 3) / sp2, 3));
            const Ivl tail_b = sqr(cp) / (Ivl(3) * one_minus(cb.theta)) *
                               root4((Ivl(1) + Ivl(1) / sp2) * (Ivl(1) + Ivl(2) / sp2) * (Ivl(1) + Ivl(3) / sp2));
            ca = upper_triangular_norm(Ivl(top_a.hi()), coeffs.beta[u(s)] * norm2(la) * row, tail_a);
            cbeta = upper_triangular_norm(Ivl(top_b.hi()), coeffs.beta[u(s)] * norm2(lb) * row, tail_b);
        }
        const Ivl total = ca + cbeta;
        if (parity == Parity::Even) f.c_even = Ivl(total.hi());
        if (total.hi_d() > best.hi_d() || best.hi_d() < 0) {
            best = total;
            f.c_alpha_part = Ivl(ca.hi());
            f.c_beta_part = Ivl(cbeta.hi());
        }
    }
    f.c = f.c_alpha_part + f.c_beta_part;
    f.c = Ivl(f.c.hi());
    f.Z = weighted_even_moment(0, coeffs.kappa, Ivl(2));
    const Ivl cpm = max(Ivl(1), Ivl(C_P_upper.hi()));
    f.linf_const = Ivl((sqrt(f.Z * (f.c + Ivl(1))) * root4(cpm)).hi());
    f.h1R_const = Ivl((sqrt(f.Z) * sqrt(cpm + sqr(f.c + Ivl(1)) / Ivl(4))).hi());
    return f;
}

}  // namespace fc

#include "freudcaps/freud.hpp"

#include <cstdlib>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fc {

namespace {

std::size_t uz(long i) { return static_cast<std::size_t>(i); }

}  // namespace

FreudCoeffs coeffs_from_bn(const std::vector<Ivl>& b, const Ivl& kappa, int length)
{
    if (length < 1) throw std::invalid_argument("coefficient length must be positive");
    if (static_cast<long>(b.size()) < length + 1) throw std::invalid_argument("not enough b_n for requested length");
    FreudCoeffs c;
    c.kappa = kappa;
    c.length = length;
    c.b.assign(uz(length) + 1, Ivl(0));
    c.a.assign(uz(length) + 1, Ivl(0));
    c.alpha.assign(uz(length) + 1, Ivl(0));
    c.beta.assign(uz(length) + 1, Ivl(0));
    for (int n = 1; n <= length; ++n) {
        if (!b[uz(n)].positive()) throw EnclosureError("b_" + std::to_string(n) + " is not certainly positive");
        c.b[uz(n)] = b[uz(n)];
        c.a[uz(n)] = sqrt(b[uz(n)]);
        c.alpha[uz(n)] = Ivl(n) / c.a[uz(n)];
    }
    for (int n = 1; n + 2 <= length; ++n) c.beta[uz(n)] = c.a[uz(n)] * c.a[uz(n + 1)] * c.a[uz(n + 2)];
    return c;
}

FreudCoeffs coeffs_from_enclosure(const BnEnclosure& enc, const Ivl& kappa, int length)
{
    if (length > enc.N2) throw std::invalid_argument("length exceeds the certified range N2");
    for (long n = std::max<long>(enc.N, 1); n <= length; ++n) {
        const Ivl& bn = enc.b[uz(n)];
        if (!certainly_ge(bn, envelope(enc.c_minus, n)) || !certainly_le(bn, envelope(enc.c_plus, n)))
            throw EnclosureError("envelope violated at n = " + std::to_string(n));
    }
    return coeffs_from_bn(enc.b, kappa, length);
}

std::vector<Ivl> eval_p_all(const FreudCoeffs& c, int n, const Ivl& x)
{
    if (n < 0 || n >= c.length) throw std::invalid_argument("polynomial degree out of range");
    std::vector<Ivl> p(uz(n) + 1);
    p[0] = Ivl(1);
    if (n >= 1) p[1] = x / c.a[1];
    for (int k = 1; k < n; ++k) p[uz(k + 1)] = (x * p[uz(k)] - c.a[uz(k)] * p[uz(k - 1)]) / c.a[uz(k + 1)];
    return p;
}

Ivl eval_pn(const FreudCoeffs& c, int n, const Ivl& x) { return eval_p_all(c, n, x).back(); }

BandedUpperIvl build_D(const FreudCoeffs& c, int dim)
{
    if (dim > c.length - 2) throw std::invalid_argument("D dimension exceeds coefficient length - 2");
    BandedUpperIvl d(dim, 3);
    for (int k = 0; k + 1 < dim; ++k) d.band(1, k) = c.alpha[uz(k + 1)];
    for (int k = 0; k + 3 < dim; ++k) d.band(3, k) = c.beta[uz(k + 1)];
    return d;
}

BandedUpperIvl build_P(const FreudCoeffs& c, int dim)
{
    if (dim > c.length - 2) throw std::invalid_argument("P dimension exceeds coefficient length - 2");
    BandedUpperIvl p(dim, 2);
    if (dim > 0) p.band(0, 0) = Ivl(1);
    for (int i = 1; i < dim; ++i) {
        p.band(0, i) = c.alpha[uz(i)];
        if (i + 2 < dim) p.band(2, i) = c.beta[uz(i)];
    }
    return p;
}

DenseIvlMatrix jacobi_matrix(const FreudCoeffs& c, int dim)
{
    if (dim > c.length) throw std::invalid_argument("Jacobi dimension exceeds coefficient length");
    DenseIvlMatrix j(dim, dim);
    for (int k = 0; k + 1 < dim; ++k) {
        j.set(k, k + 1, c.a[uz(k + 1)]);
        j.set(k + 1, k, c.a[uz(k + 1)]);
    }
    return j;
}

bool CoeffVec::parity_consistent() const
{
    if (parity == Parity::Mixed) return true;
    const int skip = parity == Parity::Even ? 1 : 0;
    for (int i = skip; i < dim(); i += 2) {
        const Ivl& e = entries[uz(i)];
        if (!(e.is_point() && mpfr_zero_p(e.lo()))) return false;
    }
    return true;
}

CoeffVec q_to_p(const FreudCoeffs& c, const CoeffVec& v)
{
    if (v.basis != Basis::Q) throw std::invalid_argument("q_to_p expects a Q-basis vector");
    const BandedUpperIvl p = build_P(c, v.dim());
    return CoeffVec{Basis::P, v.parity, p.solve(v.entries)};
}

CoeffVec p_to_q(const FreudCoeffs& c, const CoeffVec& v)
{
    if (v.basis != Basis::P) throw std::invalid_argument("p_to_q expects a P-basis vector");
    const BandedUpperIvl p = build_P(c, v.dim());
    return CoeffVec{Basis::Q, v.parity, p.apply(v.entries)};
}

Ivl GeneralRecurrence::eval_R(int j, const std::vector<Ivl>& b, int n) const
{
    if (j < 0 || j >= static_cast<int>(R.size())) throw std::invalid_argument("recurrence term index out of range");
    auto b_at = [&](int m) -> Ivl {
        if (m <= 0) return Ivl(0);
        if (m >= static_cast<int>(b.size())) throw std::invalid_argument("b index out of range in recurrence");
        return b[uz(m)];
    };
    Ivl total(0);
    for (const auto& [exps, coef] : R[uz(j)]) {
        Ivl term(coef);
        for (int i = 0; i < static_cast<int>(exps.size()); ++i)
            if (exps[uz(i)] > 0) term *= pow(b_at(n - j + i), exps[uz(i)]);
        total += term;
    }
    return total;
}

Ivl GeneralRecurrence::residual(const std::vector<Ivl>& b, int n) const
{
    Ivl rhs(0);
    for (int j = 1; j <= k; ++j) {
        const Rational& cj = c[uz(j - 1)];
        if (cj.num == 0) continue;
        rhs += Ivl::rational(cj.num, cj.den) * eval_R(j - 1, b, n);
    }
    return Ivl(n) / b[uz(n)] - rhs;
}

namespace {

// Sum over lattice paths n -> n-1 of 2j+1 steps of x p_m = a_{m+1} p_{m+1} + a_m p_{m-1}.
// An edge between m-1 and m carries a_m; every edge except the one at offset 0 is
// crossed an even number of times, which leaves a_n times a monomial in the b's.
Monomials path_polynomial(int j)
{
    const int steps = 2 * j + 1;
    const int span = steps + 1;
    // edge counts indexed by offset u = m - n in [-steps, steps]
    std::vector<int> edge(uz(2 * span + 1), 0);
    Monomials out;
    std::function<void(int, int)> walk = [&](int pos, int left) {
        if (left == 0) {
            if (pos != -1) return;
            std::vector<int> exps(uz(2 * j + 1), 0);
            for (int u = -span; u <= span; ++u) {
                int cnt = edge[uz(u + span)];
                if (u == 0) cnt -= 1;
                if (cnt == 0) continue;
                if (cnt % 2 != 0 || u < -j || u > j) throw std::logic_error("unexpected path structure");
                exps[uz(u + j)] = cnt / 2;
            }
            out[exps] += 1;
            return;
        }
        if (std::abs(pos + 1) > left) return;
        ++edge[uz(pos + 1 + span)];
        walk(pos + 1, left - 1);
        --edge[uz(pos + 1 + span)];
        ++edge[uz(pos + span)];
        walk(pos - 1, left - 1);
        --edge[uz(pos + span)];
    };
    walk(0, steps);
    return out;
}

}  // namespace

GeneralRecurrence derive_general_recurrence(const std::vector<Rational>& v)
{
    int deg = static_cast<int>(v.size()) - 1;
    while (deg >= 0 && v[uz(deg)].num == 0) --deg;
    if (deg < 2) throw std::invalid_argument("potential must have degree at least 2");
    for (const Rational& r : v)
        if (r.den == 0) throw std::invalid_argument("zero denominator in potential coefficient");
    if (deg % 2 != 0) throw std::invalid_argument("potential must have even degree");
    for (int i = 1; i <= deg; i += 2)
        if (v[uz(i)].num != 0) throw std::invalid_argument("potential must be an even polynomial");
    const Rational lead = v[uz(deg)];
    if ((lead.num > 0) != (lead.den > 0)) throw std::invalid_argument("leading coefficient must be positive");

    GeneralRecurrence g;
    g.k = deg / 2;
    for (int j = 1; j <= g.k; ++j) {
        // x^{2j} coefficient v_{2j} = c_j / (2j)
        Rational r = v[uz(2 * j)];
        long num = r.num * 2 * j;
        long den = r.den;
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const long gcd = std::gcd(num, den);
        if (gcd > 1) {
            num /= gcd;
            den /= gcd;
        }
        g.c.push_back(Rational{num, den});
        g.R.push_back(path_polynomial(j - 1));
    }
    return g;
}

void write_coefficients(std::ostream& os, const std::vector<Ivl>& values, int first_index, int digits)
{
    for (std::size_t i = static_cast<std::size_t>(first_index); i < values.size(); ++i)
        os << i << ' ' << values[i].lo_str(digits) << ' ' << values[i].hi_str(digits) << '\n';
}

std::vector<Ivl> read_coefficients(std::istream& is)
{
    std::vector<Ivl> out;
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long n = 0;
        std::string lo;
        std::string hi;
        if (!(ls >> n >> lo >> hi) || n < 0) throw std::invalid_argument("malformed coefficient record at line " + std::to_string(lineno));
        if (static_cast<long>(out.size()) <= n) out.resize(uz(n) + 1, Ivl(0));
        out[uz(n)] = Ivl::parse(lo, hi);
    }
    return out;
}

}  // namespace fc

#include "freudcaps/banded.hpp"

#include <algorithm>
#include <stdexcept>

namespace fc {

BandedUpperIvl::BandedUpperIvl(int dim, int bandwidth) : dim_(dim), bw_(bandwidth)
{
    if (dim < 0 || bandwidth < 0) throw std::invalid_argument("invalid banded matrix shape");
    diags_.resize(static_cast<std::size_t>(bandwidth) + 1);
    for (int d = 0; d <= bandwidth; ++d)
        diags_[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(std::max(0, dim - d)), Ivl(0));
}

Ivl BandedUpperIvl::entry(int i, int j) const
{
    const int d = j - i;
    if (d < 0 || d > bw_ || j >= dim_) return Ivl(0);
    return band(d, i);
}

std::vector<Ivl> BandedUpperIvl::solve(const std::vector<Ivl>& b) const
{
    if (static_cast<int>(b.size()) != dim_) throw std::invalid_argument("dimension mismatch in banded solve");
    std::vector<Ivl> x(b.size());
    Ivl t;
    for (int i = dim_ - 1; i >= 0; --i) {
        Ivl s = b[static_cast<std::size_t>(i)];
        for (int d = 1; d <= bw_ && i + d < dim_; ++d) {
            if (band(d, i).is_point() && mpfr_zero_p(band(d, i).lo())) continue;
            mul(t, band(d, i), x[static_cast<std::size_t>(i + d)]);
            sub(s, s, t);
        }
        if (band(0, i).contains_zero()) throw EnclosureError("banded solve: diagonal entry contains zero");
        div(x[static_cast<std::size_t>(i)], s, band(0, i));
    }
    return x;
}

std::vector<Ivl> BandedUpperIvl::solve_transpose(const std::vector<Ivl>& b) const
{
    if (static_cast<int>(b.size()) != dim_) throw std::invalid_argument("dimension mismatch in banded solve");
    std::vector<Ivl> x(b.size());
    Ivl t;
    for (int j = 0; j < dim_; ++j) {
        Ivl s = b[static_cast<std::size_t>(j)];
        for (int d = 1; d <= bw_ && j - d >= 0; ++d) {
            if (band(d, j - d).is_point() && mpfr_zero_p(band(d, j - d).lo())) continue;
            mul(t, band(d, j - d), x[static_cast<std::size_t>(j - d)]);
            sub(s, s, t);
        }
        if (band(0, j).contains_zero()) throw EnclosureError("banded solve: diagonal entry contains zero");
        div(x[static_cast<std::size_t>(j)], s, band(0, j));
    }
    return x;
}

std::vector<Ivl> BandedUpperIvl::apply(const std::vector<Ivl>& x) const
{
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("dimension mismatch in banded product");
    std::vector<Ivl> y(x.size(), Ivl(0));
    Ivl t;
    for (int i = 0; i < dim_; ++i)
        for (int d = 0; d <= bw_ && i + d < dim_; ++d) {
            mul(t, band(d, i), x[static_cast<std::size_t>(i + d)]);
            add(y[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)], t);
        }
    return y;
}

std::vector<Ivl> BandedUpperIvl::apply_transpose(const std::vector<Ivl>& x) const
{
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("dimension mismatch in banded product");
    std::vector<Ivl> y(x.size(), Ivl(0));
    Ivl t;
    for (int i = 0; i < dim_; ++i)
        for (int d = 0; d <= bw_ && i + d < dim_; ++d) {
            mul(t, band(d, i), x[static_cast<std::size_t>(i)]);
            add(y[static_cast<std::size_t>(i + d)], y[static_cast<std::size_t>(i + d)], t);
        }
    return y;
}

BandedUpperIvl BandedUpperIvl::leading(int n) const
{
    if (n > dim_) throw std::invalid_argument("leading block larger than matrix");
    BandedUpperIvl r(n, bw_);
    for (int d = 0; d <= bw_; ++d)
        for (int i = 0; i + d < n; ++i) r.band(d, i) = band(d, i);
    return r;
}

BandedUpperIvl BandedUpperIvl::restrict_parity(int parity) const
{
    for (int d = 1; d <= bw_; d += 2)
        for (int i = 0; i + d < dim_; ++i)
            if ((i % 2) == parity && !(band(d, i).is_point() && mpfr_zero_p(band(d, i).lo())))
                throw std::invalid_argument("parity restriction of a matrix coupling both parities");
    const int n = (dim_ - parity + 1) / 2;
    BandedUpperIvl r(n, bw_ / 2);
    for (int d = 0; d <= bw_ / 2; ++d)
        for (int k = 0; k + d < n; ++k) r.band(d, k) = band(2 * d, 2 * k + parity);
    return r;
}

DenseIvlMatrix BandedUpperIvl::to_dense() const
{
    DenseIvlMatrix m(dim_, dim_);
    for (int d = 0; d <= bw_; ++d)
        for (int i = 0; i + d < dim_; ++i) m.set(i, i + d, band(d, i));
    return m;
}

std::vector<Ivl> BandedUpperIvl::inverse_column(int j) const
{
    // Only rows 0..j are nonzero in column j of the inverse of an upper-triangular matrix.
    std::vector<Ivl> x(static_cast<std::size_t>(dim_), Ivl(0));
    Ivl t;
    for (int i = j; i >= 0; --i) {
        Ivl s(i == j ? 1 : 0);
        for (int d = 1; d <= bw_ && i + d <= j; ++d) {
            mul(t, band(d, i), x[static_cast<std::size_t>(i + d)]);
            sub(s, s, t);
        }
        if (band(0, i).contains_zero()) throw EnclosureError("banded solve: diagonal entry contains zero");
        div(x[static_cast<std::size_t>(i)], s, band(0, i));
    }
    return x;
}

DenseIvlMatrix BandedUpperIvl::inverse_dense() const
{
    DenseIvlMatrix m(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
        const std::vector<Ivl> col = inverse_column(j);
        for (int i = 0; i <= j; ++i) m.set(i, j, col[static_cast<std::size_t>(i)]);
    }
    return m;
}

std::vector<Ivl> unit_vector(int dim, int k)
{
    std::vector<Ivl> e(static_cast<std::size_t>(dim), Ivl(0));
    e[static_cast<std::size_t>(k)] = Ivl(1);
    return e;
}

Ivl dot(const std::vector<Ivl>& a, const std::vector<Ivl>& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch in dot product");
    Ivl s(0);
    Ivl t;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mul(t, a[i], b[i]);
        add(s, s, t);
    }
    return s;
}

Ivl norm2(const std::vector<Ivl>& v)
{
    Ivl s(0);
    for (const Ivl& x : v) s += sqr(x);
    return sqrt(s);
}

}  // namespace fc

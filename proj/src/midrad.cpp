#include "freudcaps/midrad.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fc {

RoundUpward::RoundUpward() : saved_(std::fegetround()) { std::fesetround(FE_UPWARD); }
RoundUpward::~RoundUpward() { std::fesetround(saved_); }

namespace {

class RoundingMode {
public:
    explicit RoundingMode(int mode) : saved_(std::fegetround()) { std::fesetround(mode); }
    ~RoundingMode() { std::fesetround(saved_); }
    RoundingMode(const RoundingMode&) = delete;
    RoundingMode& operator=(const RoundingMode&) = delete;

private:
    int saved_;
};

// C += A * B for row-major blocks; zero entries of A are skipped.
void gemm(const double* a, const double* b, double* c, int m, int k, int n)
{
    constexpr int kJB = 512;
    constexpr int kKB = 128;
    for (int jj = 0; jj < n; jj += kJB) {
        const int je = std::min(n, jj + kJB);
        for (int kk = 0; kk < k; kk += kKB) {
            const int ke = std::min(k, kk + kKB);
            for (int i = 0; i < m; ++i) {
                double* ci = c + static_cast<std::size_t>(i) * n;
                const double* ai = a + static_cast<std::size_t>(i) * k;
                for (int p = kk; p < ke; ++p) {
                    const double av = ai[p];
                    if (av == 0.0) continue;
                    const double* bp = b + static_cast<std::size_t>(p) * n;
                    for (int j = jj; j < je; ++j) ci[j] += av * bp[j];
                }
            }
        }
    }
}

bool all_zero(const std::vector<double>& v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

MidRadMatrix::MidRadMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), mid_(static_cast<std::size_t>(rows) * cols, 0.0),
      rad_(static_cast<std::size_t>(rows) * cols, 0.0)
{
}

MidRadMatrix MidRadMatrix::identity(int n)
{
    MidRadMatrix r(n, n);
    for (int i = 0; i < n; ++i) r.mid(i, i) = 1.0;
    return r;
}

MidRadMatrix MidRadMatrix::point(const Eigen::MatrixXd& m)
{
    MidRadMatrix r(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < r.rows_; ++i)
        for (int j = 0; j < r.cols_; ++j) r.mid(i, j) = m(i, j);
    return r;
}

void MidRadMatrix::set(int i, int j, const Ivl& v)
{
    mpfr_t m;
    mpfr_t t;
    mpfr_init2(m, v.prec() + 2);
    mpfr_init2(t, 64);
    mpfr_add(m, v.lo(), v.hi(), MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    double md = mpfr_get_d(m, MPFR_RNDN);
    if (!std::isfinite(md)) {
        mpfr_clear(m);
        mpfr_clear(t);
        throw EnclosureError("interval entry does not fit a double midpoint");
    }
    mpfr_set_d(m, md, MPFR_RNDN);
    mpfr_sub(t, m, v.lo(), MPFR_RNDU);
    double r = mpfr_get_d(t, MPFR_RNDU);
    mpfr_sub(t, v.hi(), m, MPFR_RNDU);
    r = std::max(r, mpfr_get_d(t, MPFR_RNDU));
    mpfr_clear(m);
    mpfr_clear(t);
    if (!std::isfinite(r)) throw EnclosureError("interval entry radius overflows a double");
    mid(i, j) = md;
    rad(i, j) = std::max(r, 0.0);
    if (md != 0.0 && std::fabs(md) < kTiny) {
        RoundUpward up;
        rad(i, j) = rad(i, j) + std::fabs(md);
        mid(i, j) = 0.0;
    }
    if (rad(i, j) != 0.0 && rad(i, j) < kTiny) rad(i, j) = kTiny;
}

Ivl MidRadMatrix::get(int i, int j) const
{
    const double m = mid(i, j);
    const double r = rad(i, j);
    PrecisionGuard g(std::max<long>(working_bits(), 64));
    Ivl out;
    mpfr_set_d(out.lo_mut(), m, MPFR_RNDD);
    mpfr_sub_d(out.lo_mut(), out.lo_mut(), r, MPFR_RNDD);
    mpfr_set_d(out.hi_mut(), m, MPFR_RNDU);
    mpfr_add_d(out.hi_mut(), out.hi_mut(), r, MPFR_RNDU);
    return out;
}

double MidRadMatrix::mag(int i, int j) const
{
    RoundUpward up;
    return std::fabs(mid(i, j)) + rad(i, j);
}

bool MidRadMatrix::is_point() const { return all_zero(rad_); }

MidRadMatrix MidRadMatrix::transpose() const
{
    MidRadMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            r.mid(j, i) = mid(i, j);
            r.rad(j, i) = rad(i, j);
        }
    return r;
}

Eigen::MatrixXd MidRadMatrix::mid_matrix() const
{
    Eigen::MatrixXd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = mid(i, j);
    return m;
}

void MidRadMatrix::sanitize()
{
    RoundUpward up;
    for (std::size_t k = 0; k < mid_.size(); ++k) {
        if (!std::isfinite(mid_[k]) || !std::isfinite(rad_[k])) throw EnclosureError("non-finite interval matrix entry");
        if (mid_[k] != 0.0 && std::fabs(mid_[k]) < kTiny) {
            rad_[k] = rad_[k] + std::fabs(mid_[k]);
            mid_[k] = 0.0;
        }
        if (rad_[k] != 0.0 && rad_[k] < kTiny) rad_[k] = kTiny;
    }
}

MidRadMatrix multiply(const MidRadMatrix& a, const MidRadMatrix& b)
{
    if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch in interval matrix product");
    const int m = a.rows();
    const int k = a.cols();
    const int n = b.cols();
    const std::size_t sz = static_cast<std::size_t>(m) * n;
    std::vector<double> lo(sz, 0.0);
    std::vector<double> hi(sz, 0.0);
    {
        RoundingMode down(FE_DOWNWARD);
        gemm(a.mids().data(), b.mids().data(), lo.data(), m, k, n);
    }
    {
        RoundingMode upm(FE_UPWARD);
        gemm(a.mids().data(), b.mids().data(), hi.data(), m, k, n);
    }
    MidRadMatrix c(m, n);
    for (std::size_t p = 0; p < sz; ++p) c.mids()[p] = 0.5 * (lo[p] + hi[p]);
    {
        RoundUpward up;
        for (std::size_t p = 0; p < sz; ++p) {
            const double mm = c.mids()[p];
            c.rads()[p] = std::max(hi[p] - mm, -(lo[p] - mm));
        }
        const bool ra = !all_zero(a.rads());
        const bool rb = !all_zero(b.rads());
        if (rb) {
            std::vector<double> absa(a.mids().size());
            for (std::size_t p = 0; p < absa.size(); ++p) absa[p] = std::fabs(a.mids()[p]);
            gemm(absa.data(), b.rads().data(), c.rads().data(), m, k, n);
        }
        if (ra) {
            std::vector<double> absb(b.mids().size());
            for (std::size_t p = 0; p < absb.size(); ++p) absb[p] = std::fabs(b.mids()[p]) + b.rads()[p];
            gemm(a.rads().data(), absb.data(), c.rads().data(), m, k, n);
        }
    }
    c.sanitize();
    return c;
}

MidRadMatrix add(const MidRadMatrix& a, const MidRadMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("dimension mismatch");
    MidRadMatrix c(a.rows(), a.cols());
    std::vector<double> lo(c.mids().size());
    {
        RoundingMode down(FE_DOWNWARD);
        for (std::size_t p = 0; p < lo.size(); ++p) lo[p] = a.mids()[p] + b.mids()[p];
    }
    RoundUpward up;
    for (std::size_t p = 0; p < lo.size(); ++p) {
        const double hi = a.mids()[p] + b.mids()[p];
        const double mm = lo[p] + (hi - lo[p]) * 0.5;
        c.mids()[p] = mm;
        c.rads()[p] = std::max(hi - mm, -(lo[p] - mm)) + a.rads()[p] + b.rads()[p];
    }
    c.sanitize();
    return c;
}

MidRadMatrix subtract(const MidRadMatrix& a, const MidRadMatrix& b)
{
    MidRadMatrix nb = b;
    for (auto& v : nb.mids()) v = -v;
    return add(a, nb);
}

MidRadMatrix scale(const MidRadMatrix& a, const Ivl& s)
{
    MidRadMatrix d(1, 1);
    d.set(0, 0, s);
    const double sm = d.mid(0, 0);
    const double sr = d.rad(0, 0);
    MidRadMatrix c(a.rows(), a.cols());
    std::vector<double> lo(c.mids().size());
    {
        RoundingMode down(FE_DOWNWARD);
        for (std::size_t p = 0; p < lo.size(); ++p) lo[p] = a.mids()[p] * sm;
    }
    RoundUpward up;
    for (std::size_t p = 0; p < lo.size(); ++p) {
        const double hi = a.mids()[p] * sm;
        const double mm = lo[p] + (hi - lo[p]) * 0.5;
        c.mids()[p] = mm;
        c.rads()[p] = std::max(hi - mm, -(lo[p] - mm)) + std::fabs(a.mids()[p]) * sr +
                      a.rads()[p] * (std::fabs(sm) + sr);
    }
    c.sanitize();
    return c;
}

MidRadMatrix scale_rows(const MidRadMatrix& a, const std::vector<Ivl>& d)
{
    if (static_cast<int>(d.size()) != a.rows()) throw std::invalid_argument("dimension mismatch in row scaling");
    MidRadMatrix dm(a.rows(), 1);
    for (int i = 0; i < a.rows(); ++i) dm.set(i, 0, d[static_cast<std::size_t>(i)]);
    MidRadMatrix c(a.rows(), a.cols());
    const int n = a.cols();
    for (int i = 0; i < a.rows(); ++i) {
        const double sm = dm.mid(i, 0);
        const double sr = dm.rad(i, 0);
        std::vector<double> lo(static_cast<std::size_t>(n));
        {
            RoundingMode down(FE_DOWNWARD);
            for (int j = 0; j < n; ++j) lo[static_cast<std::size_t>(j)] = a.mid(i, j) * sm;
        }
        RoundUpward up;
        for (int j = 0; j < n; ++j) {
            const double l = lo[static_cast<std::size_t>(j)];
            const double hi = a.mid(i, j) * sm;
            const double mm = l + (hi - l) * 0.5;
            c.mid(i, j) = mm;
            c.rad(i, j) = std::max(hi - mm, -(l - mm)) + std::fabs(a.mid(i, j)) * sr + a.rad(i, j) * (std::fabs(sm) + sr);
        }
    }
    c.sanitize();
    return c;
}

double norm1_upper(const MidRadMatrix& a)
{
    RoundUpward up;
    double best = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < a.rows(); ++i) s += std::fabs(a.mid(i, j)) + a.rad(i, j);
        best = std::max(best, s);
    }
    return best;
}

double norminf_upper(const MidRadMatrix& a)
{
    RoundUpward up;
    double best = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += std::fabs(a.mid(i, j)) + a.rad(i, j);
        best = std::max(best, s);
    }
    return best;
}

double frobenius_upper(const MidRadMatrix& a)
{
    RoundUpward up;
    double s = 0.0;
    for (std::size_t p = 0; p < a.mids().size(); ++p) {
        const double v = std::fabs(a.mids()[p]) + a.rads()[p];
        s += v * v;
    }
    return std::sqrt(s);
}

Ivl l2_norm_upper(const MidRadMatrix& a)
{
    const Ivl n1(norm1_upper(a));
    const Ivl ni(norminf_upper(a));
    return sqrt(n1 * ni);
}

Ivl gershgorin_spectrum_bound(const MidRadMatrix& a)
{
    if (a.rows() != a.cols()) throw std::invalid_argument("Gershgorin bound needs a square matrix");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    RoundUpward up;
    for (int i = 0; i < a.rows(); ++i) {
        double r = a.rad(i, i);
        for (int j = 0; j < a.cols(); ++j)
            if (j != i) r += std::fabs(a.mid(i, j)) + a.rad(i, j);
        hi = std::max(hi, a.mid(i, i) + r);
        lo = std::min(lo, -(-a.mid(i, i) + r));
    }
    return Ivl(lo, hi);
}

namespace {

MidRadMatrix certified_inverse_with(const MidRadMatrix& a, const Eigen::MatrixXd& y)
{
    const int n = a.rows();
    const MidRadMatrix ym = MidRadMatrix::point(y);
    const MidRadMatrix r = subtract(MidRadMatrix::identity(n), multiply(ym, a));
    const double rho = norminf_upper(r);
    if (!(rho < 1.0)) throw EnclosureError("not certifiably invertible at this precision");
    MidRadMatrix inv = ym;
    RoundUpward up;
    const double denom = -(rho - 1.0);
    std::vector<double> colmax(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) colmax[static_cast<std::size_t>(j)] = std::max(colmax[static_cast<std::size_t>(j)], std::fabs(y(i, j)));
    for (int i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < n; ++j) rowsum += std::fabs(r.mid(i, j)) + r.rad(i, j);
        for (int j = 0; j < n; ++j) inv.rad(i, j) = rowsum * colmax[static_cast<std::size_t>(j)] / denom;
    }
    inv.sanitize();
    return inv;
}

}  // namespace

MidRadMatrix certified_inverse(const MidRadMatrix& a)
{
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse needs a square matrix");
    const Eigen::MatrixXd am = a.mid_matrix();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(am);
    if (!lu.isInvertible()) throw EnclosureError("not certifiably invertible at this precision");
    return certified_inverse_with(a, lu.inverse());
}

std::vector<double> matvec_mag(const MidRadMatrix& a, const std::vector<double>& xm, const std::vector<double>& xr)
{
    std::vector<double> out(static_cast<std::size_t>(a.rows()), 0.0);
    RoundUpward up;
    for (int i = 0; i < a.rows(); ++i) {
        double lo_neg = 0.0;
        double hi = 0.0;
        double rad = 0.0;
        for (int j = 0; j < a.cols(); ++j) {
            const double am = a.mid(i, j);
            const double x = xm[static_cast<std::size_t>(j)];
            hi += am * x;
            lo_neg += (-am) * x;
            rad += std::fabs(am) * xr[static_cast<std::size_t>(j)] + a.rad(i, j) * (std::fabs(x) + xr[static_cast<std::size_t>(j)]);
        }
        out[static_cast<std::size_t>(i)] = std::max(std::fabs(hi), std::fabs(lo_neg)) + rad;
    }
    return out;
}

SymmetricTopEigen symmetric_top_eigen(const MidRadMatrix& m)
{
    if (m.rows() != m.cols()) throw std::invalid_argument("symmetric eigen bound needs a square matrix");
    const int n = m.rows();
    Eigen::MatrixXd mm = m.mid_matrix();
    mm = 0.5 * (mm + mm.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mm);
    if (es.info() != Eigen::Success) throw EnclosureError("numerical eigensolver failed");
    const Eigen::MatrixXd q = es.eigenvectors();
    const MidRadMatrix qm = MidRadMatrix::point(q);
    const MidRadMatrix qinv = certified_inverse_with(qm, q.transpose());
    const MidRadMatrix lambda = multiply(qinv, multiply(m, qm));
    SymmetricTopEigen out;
    out.upper = gershgorin_spectrum_bound(lambda);
    out.vector = q.col(n - 1);
    out.numeric_value = es.eigenvalues()(n - 1);
    return out;
}

Ivl spectral_norm_upper(const MidRadMatrix& a)
{
    const MidRadMatrix g = multiply(a.transpose(), a);
    const SymmetricTopEigen e = symmetric_top_eigen(g);
    const double top = std::max(0.0, e.upper.hi_d());
    return sqrt(Ivl(0.0, top));
}

}  // namespace fc

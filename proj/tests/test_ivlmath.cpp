#include "doctest.h"

#include "freudcaps/ivl.hpp"
#include "freudcaps/banded.hpp"
#include "freudcaps/integral.hpp"
#include "freudcaps/midrad.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <tuple>

using namespace fc;

namespace {

// Oracle value of a double operation at much higher precision.
Ivl point_hp(double v)
{
    PrecisionGuard g(1024);
    return Ivl(v);
}

// Decimal oracle value widened by a relative tolerance.
Ivl around(const char* s, double rel)
{
    const Ivl v = Ivl::parse(s);
    return v + symmetric(abs(v) * Ivl(rel));
}

}  // namespace

TEST_CASE("field operations on exact inputs")
{
    PrecisionGuard g(256);
    const Ivl s = Ivl(1.0, 2.0) + Ivl(3.0, 4.0);
    CHECK(s.lo_d() == 4.0);
    CHECK(s.hi_d() == 6.0);

    const Ivl r = sqrt(Ivl(4.0));
    CHECK(r.contains(2.0));
    CHECK(r.width_d() <= std::ldexp(2.0, -254));

    const Ivl e = exp(Ivl(0.0));
    CHECK(e.contains(1.0));
    CHECK(e.width_d() <= std::ldexp(1.0, -254));
}

TEST_CASE("division by an interval containing zero and sqrt of negative values throw")
{
    CHECK_THROWS_AS(Ivl(1.0) / Ivl(-1.0, 1.0), EnclosureError);
    CHECK_THROWS_AS(sqrt(Ivl(-1e-30, 1.0)), EnclosureError);
}

TEST_CASE("inclusion isotonicity and point containment")
{
    PrecisionGuard g(128);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 300; ++trial) {
        double a0 = u(rng), a1 = u(rng), b0 = u(rng), b1 = u(rng);
        if (a0 > a1) std::swap(a0, a1);
        if (b0 > b1) std::swap(b0, b1);
        const Ivl x(a0, a1);
        const Ivl y(b0, b1);
        const double ta = a0 + (a1 - a0) * 0.37;
        const double tb = b0 + (b1 - b0) * 0.61;
        const Ivl xs(ta);
        const Ivl ys(tb);

        CHECK((x + y).contains(xs + ys));
        CHECK((x - y).contains(xs - ys));
        CHECK((x * y).contains(xs * ys));
        CHECK(exp(x).contains(exp(xs)));
        CHECK(pow(x, 3).contains(pow(xs, 3)));
        if (!y.contains_zero()) CHECK((x / y).contains(xs / ys));
        if (x.lo_d() >= 0) CHECK(sqrt(x).contains(sqrt(xs)));

        // Higher-precision oracle of the double product lies in the low-precision enclosure.
        Ivl hp;
        {
            PrecisionGuard hg(1024);
            hp = point_hp(ta) * point_hp(tb);
        }
        CHECK((x * y).contains(hp));
    }
}

TEST_CASE("parse rounds outward")
{
    PrecisionGuard g(64);
    const Ivl t = Ivl::parse("0.1");
    CHECK(t.lo_d() <= 0.1);
    CHECK(t.hi_d() >= 0.1);
    CHECK(!t.is_point());
    const Ivl r = Ivl::parse("[1.5, 2.5]");
    CHECK(r.lo_d() == 1.5);
    CHECK(r.hi_d() == 2.5);
    const Ivl back = Ivl::parse(t.lo_str(30), t.hi_str(30));
    CHECK(back.contains(t));
}

TEST_CASE("l2_norm_upper on small matrices")
{
    const MidRadMatrix id = MidRadMatrix::identity(3);
    const Ivl n = l2_norm_upper(id);
    CHECK(n.hi_d() >= 1.0);
    CHECK(n.hi_d() <= 1.0 + 1e-12);

    MidRadMatrix d(2, 2);
    d.mid(0, 0) = 2.0;
    d.mid(1, 1) = 3.0;
    const Ivl nd = l2_norm_upper(d);
    CHECK(nd.hi_d() >= 3.0);
    CHECK(nd.hi_d() <= 3.0 + 1e-12);
}

TEST_CASE("l2_norm_upper dominates the spectral norm and sampled ratios")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(-9, 9);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd a(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) a(i, j) = num(rng) / 8.0;
        const MidRadMatrix m = MidRadMatrix::point(a);
        const double bound = l2_norm_upper(m).hi_d();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
        CHECK(bound >= svd.singularValues()(0));
        CHECK(spectral_norm_upper(m).hi_d() >= svd.singularValues()(0) * (1 - 1e-14));
        for (int s = 0; s < 5; ++s) {
            Eigen::VectorXd x(5);
            for (int i = 0; i < 5; ++i) x(i) = num(rng) / 4.0;
            if (x.norm() == 0) continue;
            CHECK(bound >= (a * x).norm() / x.norm());
        }
    }
}

TEST_CASE("gershgorin spectrum bound")
{
    MidRadMatrix d(3, 3);
    d.mid(0, 0) = 1;
    d.mid(1, 1) = 2;
    d.mid(2, 2) = 3;
    const Ivl g = gershgorin_spectrum_bound(d);
    CHECK(g.lo_d() == 1.0);
    CHECK(g.hi_d() == 3.0);

    MidRadMatrix s(2, 2);
    s.mid(0, 0) = 2;
    s.mid(0, 1) = 1;
    s.mid(1, 0) = 1;
    s.mid(1, 1) = 2;
    const Ivl gs = gershgorin_spectrum_bound(s);
    CHECK(gs.contains(1.0));
    CHECK(gs.contains(3.0));
}

TEST_CASE("symmetric top eigenvalue enclosure tightens against the float eigensolver")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    const int n = 40;
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = nd(rng);
    const Eigen::MatrixXd a = b * b.transpose();
    const MidRadMatrix m = MidRadMatrix::point(a);
    const SymmetricTopEigen e = symmetric_top_eigen(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const double top = es.eigenvalues()(n - 1);
    CHECK(e.upper.hi_d() >= top);
    CHECK(e.upper.hi_d() - top <= 1e-9 * top);
    // The plain Gershgorin bound on the undiagonalized matrix is much looser.
    CHECK(gershgorin_spectrum_bound(m).hi_d() > e.upper.hi_d());
}

TEST_CASE("certified inverse")
{
    const MidRadMatrix id = certified_inverse(MidRadMatrix::identity(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(id.get(i, j).contains(i == j ? 1.0 : 0.0));
            CHECK(id.rad(i, j) <= 1e-15);
        }

    MidRadMatrix d(2, 2);
    d.mid(0, 0) = 2;
    d.mid(1, 1) = 4;
    const MidRadMatrix di = certified_inverse(d);
    CHECK(di.get(0, 0).contains(0.5));
    CHECK(di.get(1, 1).contains(0.25));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd a(10, 10);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) a(i, j) = u(rng) + (i == j ? 6.0 : 0.0);
    const MidRadMatrix am = MidRadMatrix::point(a);
    const MidRadMatrix inv = certified_inverse(am);
    const MidRadMatrix prod = multiply(inv, am);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) CHECK(prod.get(i, j).contains(i == j ? 1.0 : 0.0));

    MidRadMatrix sing(2, 2);
    sing.mid(0, 0) = 1;
    sing.mid(0, 1) = 1;
    sing.mid(1, 0) = 1;
    sing.mid(1, 1) = 1;
    CHECK_THROWS_AS(certified_inverse(sing), EnclosureError);
}

TEST_CASE("interval matrix product encloses products of members")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MidRadMatrix a(4, 3);
    MidRadMatrix b(3, 5);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) {
            a.mid(i, j) = u(rng);
            a.rad(i, j) = 1e-3 * std::fabs(u(rng));
        }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 5; ++j) {
            b.mid(i, j) = u(rng);
            b.rad(i, j) = 1e-3 * std::fabs(u(rng));
        }
    const MidRadMatrix c = multiply(a, b);
    for (int s = 0; s < 20; ++s) {
        Eigen::MatrixXd am(4, 3);
        Eigen::MatrixXd bm(3, 5);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 3; ++j) am(i, j) = a.mid(i, j) + a.rad(i, j) * u(rng);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 5; ++j) bm(i, j) = b.mid(i, j) + b.rad(i, j) * u(rng);
        const Eigen::MatrixXd cm = am * bm;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 5; ++j) CHECK(std::fabs(cm(i, j) - c.mid(i, j)) <= c.rad(i, j) + 1e-15);
    }
}

TEST_CASE("weighted integral matches the quadrature oracle")
{
    PrecisionGuard g(256);
    const Ivl z_oracle = around("103.50038442441176283162262457144398427577388339394", 1e-45);
    const Ivl b1_oracle = around("3.6706834429809187198435808397569727270344524982987", 1e-45);
    const Ivl z = enclose_weighted_integral({Ivl(1)}, Ivl(4), Ivl(2));
    CHECK(z.width_d() <= 1e-40 * z.mid_d());
    const Ivl m2 = enclose_weighted_integral({Ivl(0), Ivl(0), Ivl(1)}, Ivl(4), Ivl(2));
    const Ivl b1 = m2 / z;
    CHECK(intersect(b1, b1_oracle).has_value());
    CHECK(intersect(z, z_oracle).has_value());
    CHECK(b1.width_d() <= 1e-25 * b1.mid_d());

    const Ivl odd = enclose_weighted_integral({Ivl(0), Ivl(1)}, Ivl(4), Ivl(2));
    CHECK(odd.contains(0.0));
    CHECK(odd.width_d() <= 1e-60);

    const Ivl m4 = enclose_weighted_integral({Ivl(1), Ivl(0), Ivl(0), Ivl(0), Ivl(1)}, Ivl(4), Ivl(4));
    CHECK(intersect(m4, around("65037.917350462127905534502797045313750206385341423", 1e-45)).has_value());
    const Ivl m6 = enclose_weighted_integral({Ivl(0.5), Ivl(0), Ivl(-3), Ivl(0), Ivl(0), Ivl(0), Ivl(1)}, Ivl(4), Ivl(6));
    CHECK(intersect(m6, around("9586791.8669082338618103549862543687526476802528503", 1e-45)).has_value());

    for (const auto& [kappa, zs, bs] :
         {std::tuple{1, "3.9051371698573012494302518440983811011698560350773", "1.0417972964871559519067063340157850259201518240802"},
          std::tuple{2, "7.5874823726505075510767195020148553056803703033189", "1.6654909742567601449563439660939451577755098735073"}}) {
        const Ivl zk = enclose_weighted_integral({Ivl(1)}, Ivl(kappa), Ivl(2));
        const Ivl bk = enclose_weighted_integral({Ivl(0), Ivl(0), Ivl(1)}, Ivl(kappa), Ivl(2)) / zk;
        CHECK(intersect(zk, around(zs, 1e-45)).has_value());
        CHECK(intersect(bk, around(bs, 1e-45)).has_value());
    }
}

TEST_CASE("weighted integral reports insufficient width")
{
    PrecisionGuard g(64);
    CHECK_THROWS_AS(enclose_weighted_integral({Ivl(1)}, Ivl(4), Ivl(2), 1e-40), EnclosureError);
}

TEST_CASE("moment series agrees with the subdivision route")
{
    PrecisionGuard g(256);
    for (int p = 0; p <= 3; ++p) {
        std::vector<Ivl> poly(static_cast<std::size_t>(2 * p + 1), Ivl(0));
        poly.back() = Ivl(1);
        for (int m : {2, 4, 6}) {
            const Ivl a = weighted_even_moment(p, Ivl(4), Ivl(m));
            const Ivl b = enclose_weighted_integral(poly, Ivl(4), Ivl(m));
            CHECK(intersect(a, b).has_value());
            CHECK(a.width_d() <= 1e-70 * a.mid_d());
        }
    }
    PrecisionGuard hg(4096);
    const Ivl z = weighted_even_moment(0, Ivl(4), Ivl(2));
    CHECK(intersect(z, around("103.50038442441176283162262457144398427577388339394", 1e-45)).has_value());
    CHECK(relatively_below(z.width(), z, 4000));
}

TEST_CASE("banded triangular solves")
{
    PrecisionGuard g(128);
    BandedUpperIvl a(6, 2);
    for (int i = 0; i < 6; ++i) a.band(0, i) = Ivl(i + 2);
    for (int i = 0; i < 5; ++i) a.band(1, i) = Ivl::rational(1, i + 3);
    for (int i = 0; i < 4; ++i) a.band(2, i) = Ivl(-1);
    std::vector<Ivl> v(6);
    for (int i = 0; i < 6; ++i) v[static_cast<std::size_t>(i)] = Ivl::rational(i * i - 3, 7);
    const std::vector<Ivl> x = a.solve(v);
    const std::vector<Ivl> back = a.apply(x);
    for (int i = 0; i < 6; ++i) CHECK(back[static_cast<std::size_t>(i)].contains(v[static_cast<std::size_t>(i)]));
    const std::vector<Ivl> y = a.solve_transpose(v);
    const std::vector<Ivl> backt = a.apply_transpose(y);
    for (int i = 0; i < 6; ++i) CHECK(backt[static_cast<std::size_t>(i)].contains(v[static_cast<std::size_t>(i)]));

    const DenseIvlMatrix inv = a.inverse_dense();
    const DenseIvlMatrix prod = multiply(a.to_dense(), inv);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) CHECK(prod.get(i, j).contains(i == j ? 1.0 : 0.0));

    BandedUpperIvl p(7, 2);
    for (int i = 0; i < 7; ++i) p.band(0, i) = Ivl(i + 1);
    for (int i = 0; i < 5; ++i) p.band(2, i) = Ivl(10 + i);
    const BandedUpperIvl odd = p.restrict_parity(1);
    CHECK(odd.dim() == 3);
    CHECK(odd.band(0, 0).contains(2.0));
    CHECK(odd.band(1, 0).contains(11.0));
    CHECK_THROWS(a.restrict_parity(0));

    BandedUpperIvl z(2, 1);
    z.band(0, 0) = Ivl(-1.0, 1.0);
    z.band(0, 1) = Ivl(1);
    CHECK_THROWS_AS(z.solve({Ivl(1), Ivl(1)}), EnclosureError);
}

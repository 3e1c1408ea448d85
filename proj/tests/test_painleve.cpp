#include "doctest.h"

#include "freudcaps/integral.hpp"
#include "freudcaps/painleve.hpp"
#include "test_support.hpp"

#include <sstream>

using namespace fc;
using fc::testing::around;

TEST_CASE("s_map solves the quadratic for the middle term")
{
    PrecisionGuard g(256);
    const Ivl kappa(4);
    for (long n : {1L, 7L, 100L, 5000L}) {
        const Ivl bp = Ivl::rational(3 * n + 1, 7);
        const Ivl bn = Ivl::rational(2 * n + 5, 3);
        const Ivl s = s_map(bp, bn, n, kappa);
        CHECK(s.positive());
        const Ivl res = Ivl(n) / s - (bp + s + bn - kappa);
        CHECK(res.contains(0.0));
        // decreasing in each neighbour
        CHECK(certainly_lt(s_map(bp + Ivl(1), bn, n, kappa), s));
        CHECK(certainly_lt(s_map(bp, bn + Ivl(1), n, kappa), s));
    }
    CHECK(envelope(Ivl(2), 3).contains(2.0));
    CHECK(envelope(Ivl(1), 12).contains(2.0));
}

TEST_CASE("asymptotic threshold at kappa = 4")
{
    PrecisionGuard g(256);
    const PainleveParams p = PainleveParams::from_strings("4", "0.987", "1.025");
    const AsymptoticResiduals r = asymptotic_residuals(p.kappa(), p.c_minus, p.c_plus, 9000000);
    CHECK(r.bound1.nonneg());
    CHECK(certainly_le(r.bound2, Ivl(0)));
    CHECK(r.x_plus.nonneg());
    CHECK(certainly_ge(r.y_minus, Ivl(-2) * p.c_minus));
    CHECK(verify_asymptotic_threshold(p, 9000000));
    CHECK_FALSE(verify_asymptotic_threshold(p, 1000));
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(PainleveParams::from_strings("4", "1.1", "1.025").validate(), std::invalid_argument);
    CHECK_THROWS_AS(PainleveParams::from_strings("4", "0.9", "0.95").validate(), std::invalid_argument);
    CHECK_THROWS_AS(PainleveParams::from_strings("-1", "0.9", "1.1").validate(), std::invalid_argument);
    CHECK_NOTHROW(PainleveParams::from_strings("4", "0.987", "1.025").validate());
}

TEST_CASE("b1 routes agree with the Bessel and quadrature oracles")
{
    PrecisionGuard g(256);
    const Ivl b1_oracle = around("3.6706834429809187198435808397569727270344524982987", 1e-45);
    const Ivl bm = b1_by_moments(Ivl(4));
    const Ivl bq = b1_by_quadrature(Ivl(4));
    CHECK(intersect(bm, b1_oracle).has_value());
    CHECK(intersect(bq, b1_oracle).has_value());
    CHECK(bq.width_d() <= 1e-25 * bq.mid_d());

    fc::testing::MpfrVar v(400);
    for (long kappa : {1L, 2L, 4L}) {
        fc::testing::bessel_b1(v.get(), kappa, 400);
        const Ivl oracle(v.get());
        const Ivl b = b1_by_moments(Ivl(kappa));
        CHECK(certainly_le(abs(b - oracle), abs(b) * Ivl(1e-70)));
    }
}

TEST_CASE("forward recursion with escalation meets its storage target")
{
    PrecisionGuard g(256);
    long bits = 0;
    const std::vector<Ivl> b = forward_bn_escalating(decimal_real("4"), 600, ForwardOptions{256, 1L << 14, 200}, &bits);
    REQUIRE(b.size() == 601);
    CHECK(bits >= 512);
    const std::vector<std::string> oracle = fc::testing::forward_oracle(4, 600, 4 * bits);
    for (long n = 1; n <= 600; ++n) {
        CHECK(relatively_below(b[static_cast<std::size_t>(n)].width(), b[static_cast<std::size_t>(n)], 190));
        PrecisionGuard hp(512);
        CHECK(b[static_cast<std::size_t>(n)].contains(Ivl::parse(oracle[static_cast<std::size_t>(n)])));
    }
    CHECK_THROWS_AS(forward_bn_escalating(decimal_real("4"), 3000, ForwardOptions{256, 1024, 200}), PrecisionExhausted);
}

TEST_CASE("certified enclosure at kappa = 4")
{
    const BnEnclosure& enc = fc::testing::kappa4_enclosure();
    PrecisionGuard g(256);
    CHECK(enc.N1 == 9000000);
    CHECK(enc.N2 == 9215);
    CHECK(enc.N == 2187);
    REQUIRE(static_cast<long>(enc.b.size()) == enc.N2 + 1);
    REQUIRE(static_cast<long>(enc.upper.size()) >= enc.N2 + 2);

    // the recurrence residual contains zero at every certified index
    const Ivl kappa(4);
    for (long n = 1; n <= enc.N2; ++n) {
        const std::size_t k = static_cast<std::size_t>(n);
        const Ivl next = n < enc.N2 ? enc.b[k + 1] : hull(enc.lower[k + 1], enc.upper[k + 1]);
        const Ivl res = Ivl(n) / enc.b[k] - (enc.b[k - 1] + enc.b[k] + next - kappa);
        if (!res.contains(0.0)) FAIL("residual excludes zero at n = " << n);
    }
    // envelope holds from N on and fails just below
    for (long n = enc.N; n <= enc.N2; ++n) {
        const Ivl& x = enc.b[static_cast<std::size_t>(n)];
        if (!certainly_ge(x, envelope(enc.c_minus, n)) || !certainly_le(x, envelope(enc.c_plus, n))) FAIL("envelope at " << n);
    }
    const Ivl& below = enc.b[static_cast<std::size_t>(enc.N - 1)];
    CHECK_FALSE((certainly_ge(below, envelope(enc.c_minus, enc.N - 1)) && certainly_le(below, envelope(enc.c_plus, enc.N - 1))));
    CHECK(enc.b1.width_d() <= 1e-25 * enc.b1.mid_d());
}

TEST_CASE("enclosure files round-trip conservatively")
{
    const BnEnclosure& enc = fc::testing::kappa4_enclosure();
    PrecisionGuard g(256);
    std::stringstream ss;
    save_enclosure(ss, enc, "4");
    const BnEnclosure back = load_enclosure(ss);
    CHECK(back.N1 == enc.N1);
    CHECK(back.N2 == enc.N2);
    CHECK(back.N == enc.N);
    REQUIRE(back.b.size() == enc.b.size());
    for (std::size_t i = 0; i < enc.b.size(); ++i)
        if (!back.b[i].contains(enc.b[i])) FAIL("round trip lost b_" << i);
    std::stringstream again;
    save_enclosure(again, back, "4");
    std::stringstream first;
    save_enclosure(first, enc, "4");
    CHECK(again.str() == first.str());

    std::stringstream bad("{\"kappa\":\"4\"}\n");
    CHECK_THROWS(load_enclosure(bad));
}

#include "doctest.h"

#include "freudcaps/integral.hpp"
#include "freudcaps/quad.hpp"
#include "test_support.hpp"

#include <filesystem>
#include <random>
#include <sstream>

using namespace fc;

namespace {

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

CoeffVec p_unit(int n, int dim)
{
    CoeffVec v{Basis::P, n % 2 == 0 ? Parity::Even : Parity::Odd, std::vector<Ivl>(uz(dim), Ivl(0))};
    v.entries[uz(n)] = Ivl(1);
    return v;
}

// Monomial coefficients of p_0..p_n from the recurrence.
std::vector<std::vector<Ivl>> monomial_tables(const FreudCoeffs& c, int n)
{
    std::vector<std::vector<Ivl>> p(uz(n) + 1, std::vector<Ivl>(uz(n) + 1, Ivl(0)));
    p[0][0] = Ivl(1);
    for (int k = 0; k < n; ++k)
        for (int d = 0; d <= k + 1; ++d) {
            Ivl v = d > 0 ? p[uz(k)][uz(d - 1)] : Ivl(0);
            if (k > 0) v -= c.a[uz(k)] * p[uz(k - 1)][uz(d)];
            p[uz(k + 1)][uz(d)] = v / c.a[uz(k + 1)];
        }
    return p;
}

}  // namespace

TEST_CASE("rescale_weight")
{
    PrecisionGuard g(256);
    const RescaledWeight r2 = rescale_weight(2, Ivl(4));
    CHECK(r2.s.contains(1.0));
    CHECK(r2.kappa_tilde.contains(4.0));
    const RescaledWeight r4 = rescale_weight(4, Ivl(4));
    CHECK((r4.kappa_tilde - sqrt(Ivl(2)) * Ivl(4)).contains(0.0));
    for (int m : {2, 4, 6}) {
        const RescaledWeight r = rescale_weight(m, Ivl(3));
        CHECK((Ivl(m) / Ivl(2) * pow(r.s, 4) / Ivl(4) - Ivl::rational(1, 4)).contains(0.0));
        // the quadratic term also matches: (m/2) kappa s^2 / 2 = kappa_tilde / 2
        CHECK((Ivl(m) / Ivl(2) * Ivl(3) * sqr(r.s) - r.kappa_tilde).contains(0.0));
    }
    CHECK_THROWS_AS(rescale_weight(3, Ivl(4)), std::invalid_argument);
}

TEST_CASE("node counts")
{
    CHECK(nodes_for_degree(60) % 2 == 0);
    CHECK(2 * nodes_for_degree(60, 0) - 1 >= 60);
    CHECK(nodes_for_degree(61, 0) == 32);
    CHECK(nodes_for_degree(60, 16) == 48);
}

TEST_CASE("orthonormality defect at 256 bits for m = 4 and m = 6")
{
    PrecisionGuard g(256);
    for (int m : {4, 6}) {
        const QuadratureRule rule = freud_gauss_rule(m, decimal_real("4"), nodes_for_degree(60));
        REQUIRE(rule.half() == rule.N_nodes / 2);
        for (int i = 0; i < rule.half(); ++i) {
            CHECK(rule.weights[uz(i)].positive());
            CHECK(rule.nodes[uz(i)].positive());
            if (i > 0) CHECK(certainly_lt(rule.nodes[uz(i - 1)], rule.nodes[uz(i)]));
        }
        const Ivl defect = orthonormality_defect(rule, 30);
        CHECK(defect.hi_d() <= 1e-20);
        // total mass of the normalized rescaled weight
        Ivl mass(0);
        for (const Ivl& w : rule.weights) mass += Ivl(2) * w;
        CHECK(mass.contains(1.0));
        CHECK_THROWS_AS(orthonormality_defect(rule, rule.N_nodes), std::invalid_argument);
    }
}

TEST_CASE("rule nodes match a non-rigorous oracle and an independent sign check")
{
    PrecisionGuard g(256);
    const QuadratureRule rule = freud_gauss_rule(2, decimal_real("1"), 12);
    // every node brackets a sign change of p~_N, checked by the naive recurrence
    FreudCoeffs tc = coeffs_from_bn([&] {
        std::vector<Ivl> b(rule.a_tilde.size());
        for (std::size_t k = 0; k < b.size(); ++k) b[k] = sqr(rule.a_tilde[k]);
        b[0] = Ivl(0);
        return b;
    }(), rule.kappa_tilde, static_cast<int>(rule.a_tilde.size()) - 1);
    for (int i = 0; i < rule.half(); ++i) {
        const Ivl y = rule.nodes[uz(i)] / rule.s;
        const Ivl lo = eval_pn(tc, 12, Ivl(y.lo()) - Ivl(1e-30));
        const Ivl hi = eval_pn(tc, 12, Ivl(y.hi()) + Ivl(1e-30));
        CHECK(((lo.positive() && hi.negative()) || (lo.negative() && hi.positive())));
    }
}

TEST_CASE("integrate_product: orthogonality, symmetry and degree checks")
{
    const FreudCoeffs& c = fc::testing::kappa4_coeffs();
    PrecisionGuard g(256);
    const QuadratureRule rule = freud_gauss_rule(2, decimal_real("4"), 24);
    CHECK(integrate_product(rule, c, {p_unit(3, 10), p_unit(3, 10)}).contains(1.0));
    CHECK(integrate_product(rule, c, {p_unit(2, 10), p_unit(4, 10)}).contains(0.0));
    CHECK(integrate_product(rule, c, {p_unit(5, 10)}).contains(0.0));
    CHECK(integrate_product(rule, c, {p_unit(0, 10)}).contains(1.0));
    CoeffVec zero{Basis::P, Parity::Even, std::vector<Ivl>(10, Ivl(0))};
    CHECK(integrate_product(rule, c, {zero, p_unit(2, 10)}).contains(0.0));
    CoeffVec q = p_unit(2, 10);
    q.basis = Basis::Q;
    CHECK_THROWS_AS(integrate_product(rule, c, {q}), std::invalid_argument);
    CHECK_THROWS_AS(integrate_product(rule, c, {p_unit(24, 30), p_unit(24, 30)}), std::invalid_argument);
}

TEST_CASE("integrate_product agrees with the direct weighted integral")
{
    const FreudCoeffs& c = fc::testing::kappa4_coeffs();
    PrecisionGuard g(256);
    const int deg = 11;
    const auto mono = monomial_tables(c, deg);
    const Ivl z = weighted_even_moment(0, Ivl(4), Ivl(2));
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> u(-9, 9);
    for (int m : {2, 4, 6}) {
        const QuadratureRule rule = freud_gauss_rule(m, decimal_real("4"), nodes_for_degree(m * deg, 2));
        std::vector<CoeffVec> factors;
        std::vector<Ivl> product{Ivl(1)};
        for (int k = 0; k < m; ++k) {
            CoeffVec f{Basis::P, Parity::Mixed, std::vector<Ivl>(uz(deg) + 1, Ivl(0))};
            std::vector<Ivl> poly(uz(deg) + 1, Ivl(0));
            for (int j = 0; j <= deg; ++j) {
                f.entries[uz(j)] = Ivl::rational(u(rng), 4);
                for (int d = 0; d <= j; ++d) poly[uz(d)] += f.entries[uz(j)] * mono[uz(j)][uz(d)];
            }
            std::vector<Ivl> next(product.size() + poly.size() - 1, Ivl(0));
            for (std::size_t a = 0; a < product.size(); ++a)
                for (std::size_t b = 0; b < poly.size(); ++b) next[a + b] += product[a] * poly[b];
            product = std::move(next);
            factors.push_back(std::move(f));
        }
        const Ivl by_rule = integrate_product(rule, c, factors);
        const Ivl direct = enclose_weighted_integral(product, Ivl(4), Ivl(m)) / z;
        CHECK(intersect(by_rule, direct).has_value());
        CHECK(by_rule.width_d() <= 1e-30 * std::max(1.0, by_rule.mag_d()));
    }
}

TEST_CASE("pseudo-Vandermonde matrix and the nonlinear term")
{
    const FreudCoeffs& c = fc::testing::kappa4_coeffs();
    PrecisionGuard g(256);
    const int n = 20;
    // m = 2: Mbar^T Mbar is the identity on the even block
    const QuadratureRule r2 = freud_gauss_rule(2, decimal_real("4"), nodes_for_degree(2 * n));
    const MidRadMatrix m2 = vandermonde_bar(r2, c, n, 0);
    CHECK(m2.cols() == n / 2 + 1);
    const MidRadMatrix gram = multiply(m2.transpose(), m2);
    for (int i = 0; i < gram.cols(); ++i)
        for (int j = 0; j < gram.cols(); ++j) CHECK(gram.get(i, j).contains(i == j ? 1.0 : 0.0));

    // m = 4: G_ij = <p_i, exp(-V) u^2 p_j> for u = p_0 + p_2 / 3
    const QuadratureRule r4 = freud_gauss_rule(4, decimal_real("4"), nodes_for_degree(2 * n + 4));
    const MidRadMatrix m4 = vandermonde_bar(r4, c, n, 0);
    std::vector<double> cm(uz(m4.cols()), 0.0);
    cm[0] = 1.0;
    cm[1] = 1.0 / 3.0;
    const MidRadMatrix G = build_nonlinearity(m4, cm, {});
    CoeffVec uvec{Basis::P, Parity::Even, std::vector<Ivl>(uz(n) + 1, Ivl(0))};
    uvec.entries[0] = Ivl(1);
    uvec.entries[2] = Ivl(1.0 / 3.0);
    Ivl trace_direct(0);
    double trace = 0;
    double trace_rad = 0;
    for (int i = 0; i < G.rows(); ++i) {
        for (int j = 0; j < G.cols(); ++j) CHECK((G.get(i, j) - G.get(j, i)).contains(0.0));
        trace_direct += integrate_product(r4, c, {p_unit(2 * i, n + 1), p_unit(2 * i, n + 1), uvec, uvec});
        trace += G.mid(i, i);
        trace_rad += G.rad(i, i);
    }
    for (int i : {0, 3, 7})
        for (int j : {0, 2, 9}) {
            const Ivl direct = integrate_product(r4, c, {p_unit(2 * i, n + 1), p_unit(2 * j, n + 1), uvec, uvec});
            CHECK(intersect(G.get(i, j), direct).has_value());
        }
    CHECK(intersect(Ivl(trace) + symmetric(trace_rad + 1e-12 * std::fabs(trace)), trace_direct).has_value());

    const MidRadMatrix G0 = build_nonlinearity(m4, std::vector<double>(uz(m4.cols()), 0.0), {});
    for (int i = 0; i < G0.rows(); ++i)
        for (int j = 0; j < G0.cols(); ++j) CHECK(G0.get(i, j).contains(0.0));
    CHECK_THROWS_AS(build_nonlinearity(m4, {1.0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(vandermonde_bar(r4, c, n, 2), std::invalid_argument);
}

TEST_CASE("rule files round-trip and cache")
{
    PrecisionGuard g(256);
    const QuadratureRule rule = freud_gauss_rule(4, decimal_real("4"), 16);
    std::stringstream ss;
    save_rule(ss, rule);
    const QuadratureRule back = load_rule(ss);
    CHECK(back.m == 4);
    CHECK(back.N_nodes == 16);
    REQUIRE(back.half() == rule.half());
    for (int i = 0; i < rule.half(); ++i) {
        CHECK(back.nodes[uz(i)].contains(rule.nodes[uz(i)]));
        CHECK(back.weights[uz(i)].contains(rule.weights[uz(i)]));
    }
    CHECK(orthonormality_defect(back, 12).hi_d() <= 1e-20);
    std::stringstream again;
    save_rule(again, back);
    std::stringstream first;
    save_rule(first, rule);
    CHECK(again.str() == first.str());

    const std::string dir = (std::filesystem::temp_directory_path() / "freudcaps_rule_cache_test").string();
    std::filesystem::remove_all(dir);
    const QuadratureRule c1 = cached_rule(dir, 6, "4", 16);
    CHECK(std::filesystem::exists(dir));
    const QuadratureRule c2 = cached_rule(dir, 6, "4", 16);
    for (int i = 0; i < c1.half(); ++i) CHECK(c2.nodes[uz(i)].contains(c1.nodes[uz(i)]));
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(freud_gauss_rule(4, decimal_real("4"), 15), std::invalid_argument);
    std::stringstream bad("{\"m\":4}\n");
    CHECK_THROWS(load_rule(bad));
}

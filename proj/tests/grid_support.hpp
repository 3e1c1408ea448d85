#pragma once

#include "freudcaps/freud.hpp"
#include "freudcaps/quad.hpp"

#include <vector>

namespace fc::testing::grid {

inline std::size_t uz(int i) { return static_cast<std::size_t>(i); }

using IvlGrid = std::vector<std::vector<Ivl>>;

inline IvlGrid zeros(int n) { return IvlGrid(uz(n), std::vector<Ivl>(uz(n), Ivl(0))); }

inline IvlGrid product(const IvlGrid& a, const IvlGrid& b)
{
    const int n = static_cast<int>(a.size());
    IvlGrid c = zeros(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[uz(i)][uz(k)].is_point() && mpfr_zero_p(a[uz(i)][uz(k)].lo())) continue;
            for (int j = 0; j < n; ++j) c[uz(i)][uz(j)] += a[uz(i)][uz(k)] * b[uz(k)][uz(j)];
        }
    return c;
}

inline IvlGrid jacobi_grid(const FreudCoeffs& c, int n)
{
    IvlGrid j = zeros(n);
    for (int k = 0; k + 1 < n; ++k) j[uz(k)][uz(k + 1)] = j[uz(k + 1)][uz(k)] = c.a[uz(k + 1)];
    return j;
}

inline IvlGrid d_grid(const FreudCoeffs& c, int n)
{
    const BandedUpperIvl d = build_D(c, n);
    IvlGrid g = zeros(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[uz(i)][uz(j)] = d.entry(i, j);
    return g;
}

// p_0..p_n and p_0'..p_n' at x by the recurrence and its derivative.
inline void values_and_derivatives(const FreudCoeffs& c, int n, const Ivl& x, std::vector<Ivl>& p, std::vector<Ivl>& dp)
{
    p.assign(uz(n) + 1, Ivl(0));
    dp.assign(uz(n) + 1, Ivl(0));
    p[0] = Ivl(1);
    for (int k = 0; k < n; ++k) {
        const Ivl prev = k > 0 ? c.a[uz(k)] * p[uz(k - 1)] : Ivl(0);
        const Ivl dprev = k > 0 ? c.a[uz(k)] * dp[uz(k - 1)] : Ivl(0);
        p[uz(k + 1)] = (x * p[uz(k)] - prev) / c.a[uz(k + 1)];
        dp[uz(k + 1)] = (p[uz(k)] + x * dp[uz(k)] - dprev) / c.a[uz(k + 1)];
    }
}

// Integral against the probability measure of f(x) g(x), with f, g given at +-x_i.
template <class F>
inline Ivl rule_sum(const QuadratureRule& rule, F&& integrand)
{
    Ivl s(0);
    for (int i = 0; i < rule.half(); ++i) s += rule.weights[uz(i)] * (integrand(rule.nodes[uz(i)]) + integrand(-rule.nodes[uz(i)]));
    return rule.z_ratio * s;
}

}  // namespace fc::testing::grid

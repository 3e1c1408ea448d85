#include "freudcaps/gpcap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fc {

namespace {

std::size_t uz(long i) { return static_cast<std::size_t>(i); }

Ivl to_ivl(const Rational& r) { return Ivl::rational(r.num, r.den); }

Ivl pow34(long n) { return root4(pow(Ivl(n), 3)); }

Ivl upper(const Ivl& x) { return Ivl(x.hi()); }

// Upper bound of max(x, 0).
Ivl positive_part_hi(const Ivl& x) { return x.hi_d() > 0 ? Ivl(x.hi()) : Ivl(0); }

MidRadMatrix column_from(const std::vector<Ivl>& v)
{
    MidRadMatrix m(static_cast<int>(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.set(static_cast<int>(i), 0, v[i]);
    return m;
}

MidRadMatrix column_of(const MidRadMatrix& a, int j)
{
    MidRadMatrix m(a.rows(), 1);
    for (int i = 0; i < a.rows(); ++i) {
        m.mid(i, 0) = a.mid(i, j);
        m.rad(i, 0) = a.rad(i, j);
    }
    return m;
}

// Upper bound of the Euclidean norm of a mid-rad column or row.
Ivl vec_norm(const MidRadMatrix& a) { return Ivl(0.0, frobenius_upper(a)); }

// Lower bound of sum |a_ij|^2.
Ivl frobenius_sq_lower(const MidRadMatrix& a)
{
    Ivl s(0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const double m = std::max(0.0, std::fabs(a.mid(i, j)) - a.rad(i, j));
            s += sqr(Ivl(m));
        }
    return Ivl(s.lo());
}

__int128 i128(long v) { return static_cast<__int128>(v); }

// Sum over the positive nodes of a rule: the callback receives 2 W_i z, the p_j values and ubar(x_i).
template <class Fn>
void stream_nodes(const GPSetup& setup, const QuadratureRule& rule, const std::vector<Ivl>& c, Fn&& fn)
{
    const RecurrenceEvaluator ev(setup.coeffs.a);
    Ivl u, t;
    for (int i = 0; i < rule.half(); ++i) {
        const std::vector<Ivl> p = ev.values(rule.nodes[uz(i)], setup.n);
        u = Ivl(0);
        for (int k = 0; k < setup.K; ++k) {
            mul(t, c[uz(k)], p[uz(2 * k)]);
            add(u, u, t);
        }
        const Ivl w = Ivl(2) * rule.weights[uz(i)] * rule.z_ratio;
        fn(w, p, u);
    }
}

Ivl potential(const Ivl& x, const Ivl& kappa)
{
    const Ivl x2 = sqr(x);
    return sqr(x2) / Ivl(4) - kappa * x2 / Ivl(2);
}

}  // namespace

Ivl GPParams::kappa_ivl() const { return to_ivl(kappa); }
Ivl GPParams::c_ivl() const { return to_ivl(c); }
Ivl GPParams::d_ivl() const { return to_ivl(d); }
Ivl GPParams::omega_ivl() const { return to_ivl(omega); }

bool check_params(const GPParams& p)
{
    if (p.kappa.den <= 0 || p.c.den <= 0 || p.d.den <= 0 || p.omega.den <= 0) return false;
    const __int128 kn = i128(p.kappa.num), kd = i128(p.kappa.den);
    const __int128 cn = i128(p.c.num), cd = i128(p.c.den);
    const __int128 dn = i128(p.d.num), dd = i128(p.d.den);
    const bool quad = 6 * cd * kd * kd + 4 * cn * kd * kd - kn * kn * cd == 0;
    const bool lin = 2 * dn * kd - kn * dd == 0;
    return quad && lin;
}

Rational parse_rational(const std::string& text)
{
    const auto slash = text.find('/');
    Rational r;
    std::size_t used = 0;
    try {
        if (slash == std::string::npos) {
            r.num = std::stol(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            r.den = 1;
        } else {
            const std::string a = text.substr(0, slash);
            const std::string b = text.substr(slash + 1);
            r.num = std::stol(a, &used);
            if (used != a.size()) throw std::invalid_argument(text);
            r.den = std::stol(b, &used);
            if (used != b.size()) throw std::invalid_argument(text);
        }
    } catch (const std::logic_error&) {
        throw std::invalid_argument("not a rational number: " + text);
    }
    if (r.den == 0) throw std::invalid_argument("zero denominator: " + text);
    if (r.den < 0) {
        r.num = -r.num;
        r.den = -r.den;
    }
    return r;
}

std::string rational_str(const Rational& r)
{
    return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

CoeffVec even_to_coeffvec(const std::vector<double>& v, int n)
{
    CoeffVec out;
    out.basis = Basis::Q;
    out.parity = Parity::Even;
    out.entries.assign(uz(n + 1), Ivl(0));
    for (std::size_t k = 0; k < v.size() && static_cast<int>(2 * k) <= n; ++k) out.entries[2 * k] = Ivl(v[k]);
    return out;
}

std::vector<double> coeffvec_to_even(const CoeffVec& u, int n)
{
    if (u.basis != Basis::Q) throw std::invalid_argument("expected Q-basis coefficients");
    if (u.dim() > n + 1) throw std::invalid_argument("approximate solution has degree above n");
    std::vector<double> v(uz(n / 2 + 1), 0.0);
    for (int j = 0; j < u.dim(); ++j) {
        const Ivl& e = u.entries[uz(j)];
        // the approximate solution is the vector of double midpoints
        if (j % 2 == 1) {
            if (e.mid_d() != 0.0) throw std::invalid_argument("approximate solution is not even");
            continue;
        }
        v[uz(j / 2)] = e.mid_d();
    }
    return v;
}

GPSetup prepare_gp(const GPParams& params, const FreudCoeffs& coeffs, const CompactnessBounds& cb,
                   const FluxConstants& flux, const Ivl& C_P_upper, int n, const GPSetupOptions& opt)
{
    if (!check_params(params)) throw std::invalid_argument("parameters do not satisfy 6 + 4c - kappa^2 = 0 and 2d = kappa");
    if (!coeffs.kappa.contains(params.kappa_ivl()) || !params.kappa_ivl().contains(coeffs.kappa))
        throw std::invalid_argument("kappa of the coefficients differs from the equation");
    if (n % 2 != 0) throw std::invalid_argument("n must be even");
    if (n < cb.N) throw std::invalid_argument("n must be at least N = " + std::to_string(cb.N));
    if (n + 8 > coeffs.length - 2) throw std::invalid_argument("n exceeds the certified coefficients");

    GPSetup s;
    s.params = params;
    s.n = n;
    s.K = n / 2 + 1;
    s.coeffs = coeffs;
    s.pbar = parity_block(coeffs, n, Parity::Even);
    {
        PrecisionGuard g(std::max(working_bits(), 512L));
        s.pinv = s.pbar.inverse_dense();
    }
    s.tail = tail_constants(coeffs, n, cb, Parity::Even);
    s.flux = flux;
    s.C_P = upper(C_P_upper);
    s.linf_const = flux.linf_const;
    s.h1R_const = flux.h1R_const;

    const int n4 = nodes_for_degree(4 * n, opt.node_margin);
    const int n6 = nodes_for_degree(6 * n, opt.node_margin);
    s.rule4 = cached_rule(opt.cache_dir, 4, opt.kappa_text, n4);
    s.rule6 = cached_rule(opt.cache_dir, 6, opt.kappa_text, n6);
    s.m4 = vandermonde_bar(s.rule4, coeffs, n, 0);
    s.m6 = vandermonde_bar(s.rule6, coeffs, n, 0);
    return s;
}

CoeffVec bump_seed(const GPSetup& setup)
{
    // u = gamma q_0 balances omega u against the cubic term in the constant mode
    Eigen::VectorXd col(setup.m4.rows());
    for (int i = 0; i < setup.m4.rows(); ++i) col(i) = setup.m4.mid(i, 0);
    const double quart = col.array().pow(4).sum();
    const double omega = setup.params.omega_ivl().mid_d();
    if (!(omega > 0)) throw std::invalid_argument("the bump seed needs omega > 0");
    std::vector<double> v(uz(setup.K), 0.0);
    v[0] = std::sqrt(omega / quart);
    return even_to_coeffvec(v, setup.n);
}

CoeffVec signed_seed(const GPSetup& setup)
{
    // second eigenpair of the linear operator P^T P - e0 e0^T on the even block
    const Eigen::MatrixXd P = setup.pbar.to_dense().mid_matrix();
    Eigen::MatrixXd L = P.transpose() * P;
    L(0, 0) -= 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed for the seed");
    const double lambda = es.eigenvalues()(1);
    const Eigen::VectorXd e = es.eigenvectors().col(1);
    const Eigen::MatrixXd M = setup.m4.mid_matrix();
    const double quart = (M * e).array().pow(4).sum();
    const double omega = setup.params.omega_ivl().mid_d();
    if (!(omega > lambda)) throw std::invalid_argument("omega must exceed the second eigenvalue for the signed seed");
    const Eigen::VectorXd c = std::sqrt((omega - lambda) / quart) * e;
    const Eigen::VectorXd v = P * c;
    std::vector<double> out(v.data(), v.data() + v.size());
    // sign convention: positive at the origin side of the profile
    if (out[0] < 0)
        for (double& x : out) x = -x;
    return even_to_coeffvec(out, setup.n);
}

NonlinearEval evaluate_F(const GPSetup& setup, const std::vector<double>& v, bool with_S6)
{
    if (static_cast<int>(v.size()) != setup.K) throw std::invalid_argument("coefficient length mismatch");
    NonlinearEval r;
    std::vector<Ivl> vi(v.begin(), v.end());
    r.c = setup.pbar.solve(vi);
    r.g.assign(uz(setup.K), Ivl(0));
    Ivl t;
    stream_nodes(setup, setup.rule4, r.c, [&](const Ivl& w, const std::vector<Ivl>& p, const Ivl& u) {
        const Ivl wu3 = w * u * sqr(u);
        for (int k = 0; k < setup.K; ++k) {
            mul(t, wu3, p[uz(2 * k)]);
            add(r.g[uz(k)], r.g[uz(k)], t);
        }
    });
    const Ivl omega = setup.params.omega_ivl();
    r.f.resize(uz(setup.K));
    for (int k = 0; k < setup.K; ++k) r.f[uz(k)] = omega * r.c[uz(k)] - r.g[uz(k)];
    r.f[0] += r.c[0];
    const std::vector<Ivl> x = setup.pbar.solve_transpose(r.f);
    r.F.resize(uz(setup.K));
    for (int k = 0; k < setup.K; ++k) r.F[uz(k)] = vi[uz(k)] - x[uz(k)];
    r.S6 = Ivl(0);
    if (with_S6) {
        stream_nodes(setup, setup.rule6, r.c, [&](const Ivl& w, const std::vector<Ivl>&, const Ivl& u) {
            r.S6 += w * pow(u, 6);
        });
    }
    return r;
}

ApproxSolution newton_solve(const GPSetup& setup, const CoeffVec& seed, double tol, int max_iter)
{
    const int K = setup.K;
    const Eigen::MatrixXd Pi = setup.pinv.mid_matrix();
    const Eigen::MatrixXd M4 = setup.m4.mid_matrix();
    const double omega = setup.params.omega_ivl().mid_d();
    const std::vector<double> v0 = coeffvec_to_even(seed, setup.n);
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(v0.data(), K);

    auto residual = [&](const Eigen::VectorXd& vv, Eigen::VectorXd& c, Eigen::VectorXd& y) {
        c = Pi * vv;
        y = M4 * c;
        Eigen::VectorXd f = omega * c - M4.transpose() * y.array().cube().matrix();
        f(0) += c(0);
        return Eigen::VectorXd(vv - Pi.transpose() * f);
    };

    ApproxSolution out;
    out.n = setup.n;
    Eigen::VectorXd c, y;
    double res = 0;
    int it = 0;
    for (; it <= max_iter; ++it) {
        const Eigen::VectorXd F = residual(v, c, y);
        res = F.norm();
        if (!std::isfinite(res)) throw NewtonStagnation("Newton iteration diverged", res);
        if (res <= tol * (1.0 + v.norm())) break;
        if (it == max_iter) break;
        Eigen::MatrixXd Df = -3.0 * (M4.transpose() * y.array().square().matrix().asDiagonal() * M4);
        Df.diagonal().array() += omega;
        Df(0, 0) += 1.0;
        Eigen::MatrixXd J = -(Pi.transpose() * Df * Pi);
        J.diagonal().array() += 1.0;
        v -= J.partialPivLu().solve(F);
    }
    if (res > tol * (1.0 + v.norm())) throw NewtonStagnation("Newton iteration did not reach the tolerance", res);
    out.iterations = it;
    out.ubar = even_to_coeffvec(std::vector<double>(v.data(), v.data() + K), setup.n);
    const NonlinearEval nl = evaluate_F(setup, std::vector<double>(v.data(), v.data() + K), false);
    out.residual_norm = norm2(nl.F);
    return out;
}

GPOperators assemble_operators(const GPSetup& setup, const CoeffVec& ubar)
{
    GPOperators ops;
    ops.v = coeffvec_to_even(ubar, setup.n);
    ops.nl = evaluate_F(setup, ops.v, true);
    ops.c = column_from(ops.nl.c);
    ops.y6 = multiply(setup.m6, ops.c);
    std::vector<double> cm(uz(setup.K)), cr(uz(setup.K));
    for (int k = 0; k < setup.K; ++k) {
        cm[uz(k)] = ops.c.mid(k, 0);
        cr[uz(k)] = ops.c.rad(k, 0);
    }
    ops.G = build_nonlinearity(setup.m4, cm, cr);
    ops.Df = scale(MidRadMatrix::identity(setup.K), setup.params.omega_ivl());
    ops.Df.set(0, 0, ops.Df.get(0, 0) + Ivl(1));
    ops.Df = subtract(ops.Df, scale(ops.G, Ivl(3)));
    const MidRadMatrix pinvT = setup.pinv.transpose();
    ops.DF = subtract(MidRadMatrix::identity(setup.K), multiply(pinvT, multiply(ops.Df, setup.pinv)));
    const Eigen::MatrixXd inv = ops.DF.mid_matrix().partialPivLu().inverse();
    ops.An = MidRadMatrix::point(inv);
    return ops;
}

Ivl bound_Y(const GPSetup& setup, const GPOperators& ops)
{
    const int n = setup.n;
    // finite part |A_n Pi_n F(ubar)|
    const Ivl finite = vec_norm(multiply(ops.An, column_from(ops.nl.F)));
    // (Pbar^{-1})_{:,-1}^T f is the last entry of Pbar^{-T} f = v - F
    const Ivl last = abs(Ivl(ops.v.back()) - ops.nl.F.back());
    Ivl proj(0);
    for (const Ivl& g : ops.nl.g) proj += sqr(g);
    const Ivl tail = sqrt(positive_part_hi(ops.nl.S6 - proj));
    const Ivl coef = setup.coeffs.beta[uz(n)] / (setup.tail.C_alpha * sqrt(Ivl(1) - sqr(setup.tail.theta)));
    const Ivl t = coef * last + setup.tail.C22 * tail;
    return upper(sqrt(sqr(finite) + sqr(t) / pow(pow34(n), 2)));
}

void bound_Z1(const GPSetup& setup, const GPOperators& ops, ProofBounds& out)
{
    const int n = setup.n;
    const int K = setup.K;
    const Ivl n34 = pow34(n);
    const Ivl coef = setup.coeffs.beta[uz(n)] / (setup.tail.C_alpha * sqrt(Ivl(1) - sqr(setup.tail.theta)));
    const Ivl& C22 = setup.tail.C22;
    const MidRadMatrix pinvT = setup.pinv.transpose();

    // Z11 = |I - A_n DF| through sqrt(|.|_1 |.|_inf)
    const MidRadMatrix E = subtract(MidRadMatrix::identity(K), multiply(ops.An, ops.DF));
    out.Z11 = upper(sqrt(Ivl(norm1_upper(E)) * Ivl(norminf_upper(E))));

    const MidRadMatrix last_col = column_of(setup.pinv, K - 1);
    const MidRadMatrix DfP = multiply(ops.Df, setup.pinv);

    // sum over the even modes: rows of m6 Pbar^{-1} give q_m at the nodes, m6 gives p_m
    std::vector<Ivl> y4(uz(setup.m6.rows()));
    for (int i = 0; i < setup.m6.rows(); ++i) y4[uz(i)] = pow(ops.y6.get(i, 0), 4);
    const MidRadMatrix B = multiply(setup.m6, setup.pinv);
    Ivl s1(0);
    for (int i = 0; i < B.rows(); ++i) {
        Ivl row(0);
        for (int j = 0; j < K; ++j) row += sqr(Ivl(B.mag(i, j)));
        s1 += y4[uz(i)] * Ivl(row.hi());
    }
    const Ivl s2 = frobenius_sq_lower(multiply(ops.G, setup.pinv));
    const Ivl first21 = vec_norm(multiply(last_col.transpose(), DfP));
    out.Z21 = upper((coef * first21 + Ivl(3) * C22 * sqrt(positive_part_hi(s1 - s2))) / n34);

    // Z12
    const MidRadMatrix AP = multiply(ops.An, pinvT);
    const Ivl first12 = vec_norm(multiply(AP, multiply(DfP, last_col)));
    std::vector<double> wm(uz(K), 0.0), wr(uz(K), 0.0);
    for (int m = 0; m < K; ++m) {
        Ivl full(0);
        for (int i = 0; i < setup.m6.rows(); ++i) full += y4[uz(i)] * sqr(Ivl(setup.m6.mag(i, m)));
        const Ivl proj = frobenius_sq_lower(column_of(ops.G, m));
        wr[uz(m)] = sqrt(positive_part_hi(full - proj)).hi_d();
    }
    const std::vector<double> aw = matvec_mag(AP, wm, wr);
    Ivl aw2(0);
    for (double x : aw) aw2 += sqr(Ivl(x));
    out.Z12 = upper((coef * first12 + Ivl(3) * C22 * sqrt(Ivl(aw2.hi()))) / n34);

    // Z22 = C^2 / n^{3/2} (3 |exp(-V/2) ubar|_inf^2 + |omega|)
    const Ivl h1 = norm2(std::vector<Ivl>(ops.v.begin(), ops.v.end()));
    const Ivl sup = setup.linf_const * h1;
    out.Z22 = upper(sqr(setup.tail.C) / sqr(n34) * (Ivl(3) * sqr(sup) + abs(setup.params.omega_ivl())));

    // spectral norm of the nonnegative 2 x 2 block matrix
    const Ivl a = out.Z11, b = out.Z12, c = out.Z21, d = out.Z22;
    const Ivl S = sqr(a) + sqr(b) + sqr(c) + sqr(d);
    const Ivl det = sqr(a * d - b * c);
    const Ivl lam = (S + sqrt(max(sqr(S) - Ivl(4) * det, Ivl(0)))) / Ivl(2);
    out.Z1 = upper(sqrt(lam));
}

void bound_Z2_Z3(const GPSetup& setup, const GPOperators& ops, ProofBounds& out)
{
    out.An_norm = upper(max(Ivl(spectral_norm_upper(ops.An).hi()), Ivl(1)));
    const Ivl cpm = max(Ivl(1), setup.C_P);
    const Ivl base = Ivl(6) * setup.flux.Z * (setup.flux.c + Ivl(1)) * out.An_norm;
    const Ivl l2 = norm2(ops.nl.c);
    out.Z2 = upper(base * cpm * sqrt(cpm) * Ivl(l2.hi()));
    out.Z3 = upper(base * sqr(cpm) * sqrt(cpm));
}

ProofBounds compute_bounds(const GPSetup& setup, const GPOperators& ops)
{
    ProofBounds b;
    b.Y = bound_Y(setup, ops);
    bound_Z1(setup, ops, b);
    bound_Z2_Z3(setup, ops, b);
    return b;
}

Ivl radii_Q(const ProofBounds& b, const Ivl& d)
{
    return b.Y - d + b.Z1 * d + b.Z2 * sqr(d) / Ivl(2) + b.Z3 * pow(d, 3) / Ivl(6);
}

Ivl radii_R(const ProofBounds& b, const Ivl& d) { return Ivl(-1) + b.Z1 + b.Z2 * d + b.Z3 * sqr(d) / Ivl(2); }

RadiiResult radii(const Ivl& Y, const Ivl& Z1, const Ivl& Z2, const Ivl& Z3)
{
    ProofBounds b;
    b.Y = upper(Y);
    b.Z1 = upper(Z1);
    b.Z2 = upper(Z2);
    b.Z3 = upper(Z3);
    RadiiResult r;
    const Ivl gap = Ivl(1) - b.Z1;
    if (!gap.positive()) return r;
    auto q_neg = [&](const Ivl& d) { return certainly_lt(radii_Q(b, d), Ivl(0)); };
    auto r_neg = [&](const Ivl& d) { return certainly_lt(radii_R(b, d), Ivl(0)); };

    // bracket the smallest positive root of Q: Q(lo) > 0 (or lo = 0), Q(hi) < 0
    Ivl lo(0);
    Ivl hi;
    bool found = false;
    if (b.Y.hi_d() == 0.0) {
        for (int k = 0; k < 1000 && !found; ++k) {
            hi = Ivl(std::ldexp(1.0, -k));
            found = q_neg(hi) && r_neg(hi);
        }
    } else {
        const Ivl guess = Ivl((b.Y / Ivl(gap.lo())).hi());
        for (int t = 50; t >= 0 && !found; --t) {
            hi = Ivl((guess * (Ivl(1) + Ivl(std::ldexp(1.0, -t)))).hi());
            found = q_neg(hi) && r_neg(hi);
        }
        if (found) {
            const Ivl below = Ivl((b.Y / Ivl(gap.hi())).lo());
            if (certainly_gt(radii_Q(b, below), Ivl(0))) lo = below;
            for (int it = 0; it < 80; ++it) {
                const Ivl mid = Ivl(((lo + hi) / Ivl(2)).mid());
                const Ivl q = radii_Q(b, mid);
                if (certainly_lt(q, Ivl(0)) && r_neg(mid))
                    hi = mid;
                else if (certainly_gt(q, Ivl(0)))
                    lo = mid;
                else
                    break;
            }
        }
    }
    if (!found) return r;
    r.success = true;
    r.delta = hi;
    r.delta_lo = Ivl(lo.lo(), hi.hi());

    // positive root of the increasing function R
    if (b.Z2.hi_d() == 0.0 && b.Z3.hi_d() == 0.0) {
        r.delta_hi = Ivl(kRadiusCap);
        r.delta_hi_capped = true;
        return r;
    }
    Ivl rlo = hi;
    Ivl rhi = hi;
    bool above = false;
    while (rhi.hi_d() < kRadiusCap) {
        rhi = rhi * Ivl(2);
        if (certainly_gt(radii_R(b, rhi), Ivl(0))) {
            above = true;
            break;
        }
        rlo = rhi;
    }
    if (!above) {
        r.delta_hi = Ivl(kRadiusCap);
        r.delta_hi_capped = true;
        return r;
    }
    for (int it = 0; it < 80; ++it) {
        const Ivl mid = Ivl(((rlo + rhi) / Ivl(2)).mid());
        const Ivl v = radii_R(b, mid);
        if (certainly_lt(v, Ivl(0)))
            rlo = mid;
        else if (certainly_gt(v, Ivl(0)))
            rhi = mid;
        else
            break;
    }
    r.delta_hi = Ivl(rlo.lo(), rhi.hi());
    return r;
}

Ivl h1R_error(const Ivl& delta, const FluxConstants& flux) { return upper(flux.h1R_const * delta); }

PositivityResult positivity_check(const GPSetup& setup, const CoeffVec& ubar, const Ivl& delta, long budget)
{
    PositivityResult res;
    const Ivl kappa = setup.params.kappa_ivl();
    const Ivl c = setup.params.c_ivl();
    const Ivl d = setup.params.d_ivl();
    const Ivl omega = setup.params.omega_ivl();
    res.sup_error = upper(setup.linf_const * Ivl(delta.hi()));

    // r0^2 = y with g(y) = W - omega, g', g'' > 0; g''' = 3/2 keeps all three positive beyond y
    Ivl y = Ivl(2) * kappa / Ivl(3);
    bool found = false;
    for (int k = 0; k < 100000 && !found; ++k) {
        const Ivl g = pow(y, 3) / Ivl(4) - kappa * sqr(y) / Ivl(2) + c * y + d - omega;
        const Ivl g1 = Ivl(3) * sqr(y) / Ivl(4) - kappa * y + c;
        const Ivl g2 = Ivl(3) * y / Ivl(2) - kappa;
        if (g.positive() && g1.positive() && g2.positive())
            found = true;
        else
            y = y + Ivl::rational(1, 16);
    }
    if (!found) {
        res.reason = "no radius found beyond which W > omega";
        return res;
    }
    res.r0 = upper(sqrt(y));

    const std::vector<double> v = coeffvec_to_even(ubar, setup.n);
    const std::vector<Ivl> cvec = setup.pbar.solve(std::vector<Ivl>(v.begin(), v.end()));
    std::vector<Ivl> cfull(uz(setup.n + 4), Ivl(0));
    for (int k = 0; k < setup.K; ++k) cfull[uz(2 * k)] = cvec[uz(k)];

    // |phibar'|_inf <= linf_const |ubar' - V' ubar / 2|_{H^1}, with [V' u] = (D + D^T) [u]
    const BandedUpperIvl D = build_D(setup.coeffs, setup.n + 4);
    const std::vector<Ivl> du = D.apply(cfull);
    const std::vector<Ivl> dtu = D.apply_transpose(cfull);
    std::vector<Ivl> w(cfull.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = (du[i] - dtu[i]) / Ivl(2);
    const BandedUpperIvl P = build_P(setup.coeffs, setup.n + 4);
    res.lipschitz = upper(setup.linf_const * norm2(P.apply(w)));

    PrecisionGuard g(std::max(128L, std::min(working_bits(), 192L)));
    const RecurrenceEvaluator ev(setup.coeffs.a);
    auto phibar = [&](const Ivl& x) {
        const std::vector<Ivl> p = ev.values(x, setup.n);
        Ivl u(0);
        for (int k = 0; k < setup.K; ++k) u += cvec[uz(k)] * p[uz(2 * k)];
        return exp(-potential(x, kappa) / Ivl(2)) * u;
    };
    struct Piece {
        double a, b;
    };
    std::vector<Piece> stack{{0.0, res.r0.hi_d()}};
    while (!stack.empty()) {
        const Piece piece = stack.back();
        stack.pop_back();
        if (++res.evaluations > budget) {
            res.reason = "subdivision budget exhausted";
            return res;
        }
        const Ivl a(piece.a), b(piece.b);
        const Ivl mid = Ivl(((a + b) / Ivl(2)).mid());
        const Ivl half = max(mid - a, b - mid);
        const Ivl val = phibar(mid);
        if (certainly_gt(val - res.lipschitz * half - res.sup_error, Ivl(0))) continue;
        if (certainly_lt(val + res.sup_error, Ivl(0))) {
            res.reason = "the approximate profile is negative at x = " + mid.str(8);
            return res;
        }
        stack.push_back({piece.a, mid.mid_d()});
        stack.push_back({mid.mid_d(), piece.b});
    }
    res.positive = true;
    res.reason = "positive on [-r0, r0] and W > omega beyond";
    return res;
}

void export_profile(std::ostream& os, const GPSetup& setup, const CoeffVec& ubar, double a, double b, double step)
{
    if (!(step > 0) || b < a) throw std::invalid_argument("invalid profile range");
    const std::vector<double> v = coeffvec_to_even(ubar, setup.n);
    const std::vector<Ivl> cvec = setup.pbar.solve(std::vector<Ivl>(v.begin(), v.end()));
    PrecisionGuard g(128);
    const RecurrenceEvaluator ev(setup.coeffs.a);
    const Ivl kappa = setup.params.kappa_ivl();
    os << "x,phi\n";
    const long count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
        const double xd = a + static_cast<double>(i) * step;
        const Ivl x(xd);
        const std::vector<Ivl> p = ev.values(x, setup.n);
        Ivl u(0);
        for (int k = 0; k < setup.K; ++k) u += cvec[uz(k)] * p[uz(2 * k)];
        const Ivl phi = exp(-potential(x, kappa) / Ivl(2)) * u;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f,%.17g\n", xd, phi.mid_d());
        os << buf;
    }
}

}  // namespace fc

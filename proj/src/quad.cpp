#include "freudcaps/quad.hpp"

#include "freudcaps/integral.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cfenv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fc {

namespace {

std::size_t uz(long i) { return static_cast<std::size_t>(i); }

constexpr double kUnit = 0x1p-53;

class Mpfr {
public:
    explicit Mpfr(long bits) { mpfr_init2(v_, bits); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

// Midpoint (nearest) and an upper bound of the radius of x.
void mid_rad(const Ivl& x, mpfr_ptr mid, double& rad)
{
    mpfr_add(mid, x.lo(), x.hi(), MPFR_RNDN);
    mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
    Mpfr t(mpfr_get_prec(mid) + 8);
    mpfr_sub(t.get(), x.hi(), mid, MPFR_RNDU);
    double r1 = mpfr_get_d(t.get(), MPFR_RNDU);
    mpfr_sub(t.get(), mid, x.lo(), MPFR_RNDU);
    double r2 = mpfr_get_d(t.get(), MPFR_RNDU);
    rad = std::max({r1, r2, 0.0});
}

// |x| 2^{-e} rounded upward.
double scaled_abs(mpfr_srcptr x, long e)
{
    if (mpfr_zero_p(x)) return 0.0;
    long ex = 0;
    const double m = std::fabs(mpfr_get_d_2exp(&ex, x, MPFR_RNDA));
    return std::ldexp(m, static_cast<int>(ex - e)) * (1 + 2 * kUnit) + 0x1p-1000;
}

long exponent_of(mpfr_srcptr a, mpfr_srcptr b)
{
    long e = -100000000;
    if (!mpfr_zero_p(a)) e = std::max<long>(e, mpfr_get_exp(a));
    if (!mpfr_zero_p(b)) e = std::max<long>(e, mpfr_get_exp(b));
    return e == -100000000 ? 0 : e;
}

// Enclosure c +- 2^e rad as an interval.
Ivl around_point(mpfr_srcptr c, double rad, long e)
{
    Ivl out;
    Mpfr r(64);
    mpfr_set_d(r.get(), rad, MPFR_RNDU);
    mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDU);
    mpfr_sub(out.lo_mut(), c, r.get(), MPFR_RNDD);
    mpfr_add(out.hi_mut(), c, r.get(), MPFR_RNDU);
    return out;
}

class UpwardRounding {
public:
    UpwardRounding() : saved_(std::fegetround()) { std::fesetround(FE_UPWARD); }
    ~UpwardRounding() { std::fesetround(saved_); }
    UpwardRounding(const UpwardRounding&) = delete;
    UpwardRounding& operator=(const UpwardRounding&) = delete;

private:
    int saved_;
};

Ivl ivl_root(const Ivl& w, int m)
{
    if (m == 2) return sqrt(w);
    if (m == 4) return root4(w);
    return exp(log(w) / Ivl(m));
}

}  // namespace

RescaledWeight rescale_weight(int m, const Ivl& kappa)
{
    if (m != 2 && m != 4 && m != 6) throw std::invalid_argument("weight exponent m must be 2, 4 or 6");
    return RescaledWeight{root4(Ivl::rational(2, m)), sqrt(Ivl::rational(m, 2)) * kappa};
}

RecurrenceEvaluator::RecurrenceEvaluator(const std::vector<Ivl>& a, const Ivl& scale)
{
    const int n = static_cast<int>(a.size()) - 1;
    if (n < 1) throw std::invalid_argument("recurrence needs at least a_1");
    inv_next_.resize(uz(n));
    ratio_.resize(uz(n));
    for (int j = 0; j < n; ++j) {
        const Ivl next = a[uz(j + 1)] * scale;
        if (!next.positive()) throw EnclosureError("recurrence coefficient not positive");
        inv_next_[uz(j)] = Ivl(1) / next;
        ratio_[uz(j)] = j == 0 ? Ivl(0) : a[uz(j)] * scale / next;
    }
}

std::vector<Ivl> RecurrenceEvaluator::values(const Ivl& x, int n) const
{
    if (n < 0 || n > max_degree()) throw std::invalid_argument("degree exceeds available recurrence coefficients");
    const long bits = working_bits();
    std::vector<Ivl> out(uz(n) + 1);
    out[0] = Ivl(1);
    if (n == 0) return out;

    Mpfr c0(bits), c1(bits), n0(bits), m1(bits), m2(bits), t11(bits), t12(bits);
    mpfr_set_ui(c0.get(), 1, MPFR_RNDN);
    mpfr_set_zero(c1.get(), 1);
    long e = exponent_of(c0.get(), c1.get());
    double B[2][2] = {{1, 0}, {0, 1}};
    double r[2] = {0, 0};
    const double round_rel = std::ldexp(1.0, static_cast<int>(2 - bits));

    for (int j = 0; j < n; ++j) {
        double rho11 = 0;
        double rho12 = 0;
        mid_rad(x * inv_next_[uz(j)], t11.get(), rho11);
        mid_rad(ratio_[uz(j)], t12.get(), rho12);
        mpfr_neg(t12.get(), t12.get(), MPFR_RNDN);

        mpfr_mul(m1.get(), t11.get(), c0.get(), MPFR_RNDN);
        mpfr_mul(m2.get(), t12.get(), c1.get(), MPFR_RNDN);
        mpfr_add(n0.get(), m1.get(), m2.get(), MPFR_RNDN);

        const double td11 = mpfr_get_d(t11.get(), MPFR_RNDN);
        const double td12 = mpfr_get_d(t12.get(), MPFR_RNDN);
        double K[2][2];
        double Qm[2][2];
        double delta0;
        long e_new;
        {
            UpwardRounding up;
            const double C0 = scaled_abs(c0.get(), e);
            const double C1 = scaled_abs(c1.get(), e);
            delta0 = rho11 * C0 + rho12 * C1 + round_rel * (scaled_abs(m1.get(), e) + scaled_abs(m2.get(), e));
            const double E11 = rho11 + kUnit * std::fabs(td11) + 0x1p-1000;
            const double E12 = rho12 + kUnit * std::fabs(td12) + 0x1p-1000;

            // A = T_d B; the second row of T is exactly (1, 0).
            double A[2][2];
            double errA[2];
            for (int k = 0; k < 2; ++k) {
                A[0][k] = td11 * B[0][k] + td12 * B[1][k];
                A[1][k] = B[0][k];
                errA[k] = 4 * kUnit * (std::fabs(td11) * std::fabs(B[0][k]) + std::fabs(td12) * std::fabs(B[1][k])) +
                          0x1p-1000;
            }
            const double h = std::hypot(A[0][0], A[1][0]);
            const double cs = A[0][0] / h;
            const double sn = A[1][0] / h;
            Qm[0][0] = cs;
            Qm[0][1] = -sn;
            Qm[1][0] = sn;
            Qm[1][1] = cs;
            const double Qt[2][2] = {{cs, sn}, {-sn, cs}};
            // 1 / (cs^2 + sn^2), rounded up: cs^2 + sn^2 >= (computed sum)(1 - 4u).
            const double det_lo = -((-cs) * cs - sn * sn) * (1 - 4 * kUnit);
            const double inv_det = 1 / det_lo;
            const double EB[2] = {E11 * std::fabs(B[0][0]) + E12 * std::fabs(B[1][0]),
                                  E11 * std::fabs(B[0][1]) + E12 * std::fabs(B[1][1])};
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k) {
                    const double mik = Qt[i][0] * A[0][k] + Qt[i][1] * A[1][k];
                    const double mik_lo = -((-Qt[i][0]) * A[0][k] - Qt[i][1] * A[1][k]);
                    const double abs_m = std::max(std::fabs(mik), std::fabs(mik_lo));
                    const double errM = 4 * kUnit * (std::fabs(Qt[i][0]) * std::fabs(A[0][k]) +
                                                     std::fabs(Qt[i][1]) * std::fabs(A[1][k])) +
                                        0x1p-1000;
                    // only row 0 of A carries errA and E
                    K[i][k] = inv_det * (abs_m + errM + std::fabs(Qt[i][0]) * (errA[k] + EB[k]));
                }
            double rn[2];
            for (int i = 0; i < 2; ++i) rn[i] = K[i][0] * r[0] + K[i][1] * r[1] + inv_det * std::fabs(Qt[i][0]) * delta0;
            e_new = exponent_of(n0.get(), c0.get());
            for (int i = 0; i < 2; ++i) r[i] = std::ldexp(rn[i], static_cast<int>(e - e_new)) + 0x1p-1000;
        }
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) B[i][k] = Qm[i][k];
        mpfr_swap(c1.get(), c0.get());
        mpfr_swap(c0.get(), n0.get());
        e = e_new;
        double rad0;
        {
            UpwardRounding up;
            rad0 = std::fabs(B[0][0]) * r[0] + std::fabs(B[0][1]) * r[1];
        }
        out[uz(j + 1)] = around_point(c0.get(), rad0, e);
    }
    return out;
}

void RecurrenceEvaluator::value_and_derivative(mpfr_srcptr x, int n, mpfr_ptr p, mpfr_ptr dp) const
{
    if (n < 1 || n > max_degree()) throw std::invalid_argument("degree exceeds available recurrence coefficients");
    const long bits = mpfr_get_prec(p);
    Mpfr p0(bits), p1(bits), d0(bits), d1(bits), t(bits), inv(bits), rat(bits), nx(bits), nd(bits);
    mpfr_set_ui(p0.get(), 0, MPFR_RNDN);
    mpfr_set_ui(p1.get(), 1, MPFR_RNDN);
    mpfr_set_ui(d0.get(), 0, MPFR_RNDN);
    mpfr_set_ui(d1.get(), 0, MPFR_RNDN);
    for (int j = 0; j < n; ++j) {
        const Ivl& iv = inv_next_[uz(j)];
        const Ivl& rv = ratio_[uz(j)];
        mpfr_add(inv.get(), iv.lo(), iv.hi(), MPFR_RNDN);
        mpfr_div_2ui(inv.get(), inv.get(), 1, MPFR_RNDN);
        mpfr_add(rat.get(), rv.lo(), rv.hi(), MPFR_RNDN);
        mpfr_div_2ui(rat.get(), rat.get(), 1, MPFR_RNDN);
        // p_{j+1} = x p_j inv - rat p_{j-1};  p'_{j+1} = (p_j + x p'_j) inv - rat p'_{j-1}
        mpfr_mul(nx.get(), x, p1.get(), MPFR_RNDN);
        mpfr_mul(nx.get(), nx.get(), inv.get(), MPFR_RNDN);
        mpfr_mul(t.get(), rat.get(), p0.get(), MPFR_RNDN);
        mpfr_sub(nx.get(), nx.get(), t.get(), MPFR_RNDN);
        mpfr_mul(nd.get(), x, d1.get(), MPFR_RNDN);
        mpfr_add(nd.get(), nd.get(), p1.get(), MPFR_RNDN);
        mpfr_mul(nd.get(), nd.get(), inv.get(), MPFR_RNDN);
        mpfr_mul(t.get(), rat.get(), d0.get(), MPFR_RNDN);
        mpfr_sub(nd.get(), nd.get(), t.get(), MPFR_RNDN);
        mpfr_swap(p0.get(), p1.get());
        mpfr_swap(p1.get(), nx.get());
        mpfr_swap(d0.get(), d1.get());
        mpfr_swap(d1.get(), nd.get());
    }
    mpfr_set(p, p1.get(), MPFR_RNDN);
    mpfr_set(dp, d1.get(), MPFR_RNDN);
}

int nodes_for_degree(int degree, int margin)
{
    int n = (degree + 2) / 2 + margin;
    if (n % 2 != 0) ++n;
    return n;
}

QuadratureRule freud_gauss_rule(int m, const RealFn& kappa, int N_nodes)
{
    if (N_nodes < 2 || N_nodes % 2 != 0) throw std::invalid_argument("number of nodes must be even and positive");
    QuadratureRule rule;
    rule.m = m;
    rule.N_nodes = N_nodes;
    rule.bits = working_bits();
    rule.kappa = kappa();
    const RescaledWeight rw = rescale_weight(m, rule.kappa);
    rule.s = rw.s;
    rule.kappa_tilde = rw.kappa_tilde;

    const RealFn kt = scaled_real(kappa, m, 2);
    ForwardOptions fo;
    fo.store_bits = rule.bits;
    const std::vector<Ivl> bt = forward_bn_escalating(kt, N_nodes + 1, fo);
    rule.a_tilde.assign(uz(N_nodes) + 2, Ivl(0));
    for (int k = 1; k <= N_nodes + 1; ++k) rule.a_tilde[uz(k)] = sqrt(bt[uz(k)]);
    const RecurrenceEvaluator ev(rule.a_tilde);

    // Approximate nodes from the Jacobi matrix.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(N_nodes);
    Eigen::VectorXd sub(N_nodes - 1);
    for (int k = 1; k < N_nodes; ++k) sub(k - 1) = rule.a_tilde[uz(k)].mid_d();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    std::vector<double> approx;
    for (int k = 0; k < N_nodes; ++k)
        if (es.eigenvalues()(k) > 0) approx.push_back(es.eigenvalues()(k));
    std::sort(approx.begin(), approx.end());
    if (static_cast<int>(approx.size()) != N_nodes / 2) throw EnclosureError("unexpected number of positive Jacobi eigenvalues");

    const long bits = rule.bits;
    Mpfr y(bits), p(bits), dp(bits), step(bits), lo(bits), hi(bits);
    std::vector<Ivl> ynodes;
    const Ivl aN = rule.a_tilde[uz(N_nodes)];
    const Ivl aN1 = rule.a_tilde[uz(N_nodes - 1)];
    const Ivl aN2 = rule.a_tilde[uz(N_nodes - 2)];
    for (double y0 : approx) {
        mpfr_set_d(y.get(), y0, MPFR_RNDN);
        for (int it = 0; it < 60; ++it) {
            ev.value_and_derivative(y.get(), N_nodes, p.get(), dp.get());
            mpfr_div(step.get(), p.get(), dp.get(), MPFR_RNDN);
            mpfr_sub(y.get(), y.get(), step.get(), MPFR_RNDN);
            if (mpfr_zero_p(step.get()) || mpfr_get_exp(step.get()) < mpfr_get_exp(y.get()) - bits + 8) break;
        }
        // Sign change on [y - h, y + h].
        bool ok = false;
        for (long shift = bits - 80; shift > bits / 2 && !ok; shift -= 16) {
            mpfr_mul_2si(step.get(), y.get(), -shift, MPFR_RNDN);
            mpfr_abs(step.get(), step.get(), MPFR_RNDN);
            mpfr_sub(lo.get(), y.get(), step.get(), MPFR_RNDD);
            mpfr_add(hi.get(), y.get(), step.get(), MPFR_RNDU);
            const Ivl pl = ev.values(Ivl(lo.get()), N_nodes).back();
            const Ivl ph = ev.values(Ivl(hi.get()), N_nodes).back();
            ok = (pl.positive() && ph.negative()) || (pl.negative() && ph.positive());
        }
        if (!ok) throw EnclosureError("could not certify a sign change of the orthogonal polynomial near a node");
        ynodes.emplace_back(lo.get(), hi.get());
    }
    for (std::size_t i = 0; i < ynodes.size(); ++i) {
        if (!ynodes[i].positive()) throw EnclosureError("node enclosure touches zero");
        if (i > 0 && !certainly_lt(ynodes[i - 1], ynodes[i])) throw EnclosureError("node enclosures overlap");
    }

    rule.nodes.resize(ynodes.size());
    rule.weights.resize(ynodes.size());
    for (std::size_t i = 0; i < ynodes.size(); ++i) {
        const std::vector<Ivl> v = ev.values(ynodes[i], N_nodes);
        const Ivl dpn = Ivl(N_nodes) / aN * v[uz(N_nodes - 1)] + aN * aN1 * aN2 * v[uz(N_nodes - 3)];
        const Ivl w = Ivl(1) / (aN * dpn * v[uz(N_nodes - 1)]);
        if (!w.positive()) throw EnclosureError("quadrature weight not certainly positive");
        rule.weights[i] = w;
        rule.nodes[i] = rule.s * ynodes[i];
    }
    rule.z_ratio = weighted_even_moment(0, rule.kappa, Ivl(m)) / weighted_even_moment(0, rule.kappa, Ivl(2));
    return rule;
}

Ivl orthonormality_defect(const QuadratureRule& rule, int n)
{
    if (2 * n > 2 * rule.N_nodes - 1) throw std::invalid_argument("degree exceeds rule exactness");
    const RecurrenceEvaluator ev(rule.a_tilde);
    std::vector<std::vector<Ivl>> gram(uz(n) + 1, std::vector<Ivl>(uz(n) + 1, Ivl(0)));
    for (int i = 0; i < rule.half(); ++i) {
        const std::vector<Ivl> v = ev.values(rule.nodes[uz(i)] / rule.s, n);
        const Ivl w2 = Ivl(2) * rule.weights[uz(i)];
        for (int a = 0; a <= n; ++a)
            for (int b = a; b <= n; b += 2) gram[uz(a)][uz(b)] += w2 * v[uz(a)] * v[uz(b)];
    }
    Ivl worst(0);
    for (int a = 0; a <= n; ++a)
        for (int b = a; b <= n; ++b) {
            const Ivl d = abs(gram[uz(a)][uz(b)] - Ivl(a == b ? 1 : 0));
            worst = max(worst, d);
        }
    return worst;
}

namespace {

int degree_of(const CoeffVec& f)
{
    for (int j = f.dim() - 1; j >= 0; --j) {
        const Ivl& e = f.entries[uz(j)];
        if (!(e.is_point() && mpfr_zero_p(e.lo()))) return j;
    }
    return -1;
}

}  // namespace

Ivl integrate_product(const QuadratureRule& rule, const FreudCoeffs& coeffs, const std::vector<CoeffVec>& polys)
{
    int total = 0;
    int maxdeg = 0;
    for (const CoeffVec& f : polys) {
        if (f.basis != Basis::P) throw std::invalid_argument("integrate_product expects P-basis vectors");
        const int d = degree_of(f);
        if (d < 0) return Ivl(0);
        total += d;
        maxdeg = std::max(maxdeg, d);
    }
    if (total > 2 * rule.N_nodes - 1) throw std::invalid_argument("integrand degree exceeds rule exactness");
    const RecurrenceEvaluator ev(coeffs.a);
    Ivl sum(0);
    for (int i = 0; i < rule.half(); ++i) {
        const std::vector<Ivl> v = ev.values(rule.nodes[uz(i)], maxdeg);
        Ivl plus(1);
        Ivl minus(1);
        for (const CoeffVec& f : polys) {
            Ivl fp(0);
            Ivl fm(0);
            for (int j = 0; j <= degree_of(f); ++j) {
                const Ivl t = f.entries[uz(j)] * v[uz(j)];
                fp += t;
                if (j % 2 == 0)
                    fm += t;
                else
                    fm -= t;
            }
            plus *= fp;
            minus *= fm;
        }
        sum += rule.weights[uz(i)] * (plus + minus);
    }
    return rule.z_ratio * sum;
}

MidRadMatrix vandermonde_bar(const QuadratureRule& rule, const FreudCoeffs& coeffs, int n, int parity)
{
    if (parity != 0 && parity != 1) throw std::invalid_argument("parity must be 0 or 1");
    const int cols = (n - parity) / 2 + 1;
    MidRadMatrix M(rule.half(), cols);
    const RecurrenceEvaluator ev(coeffs.a);
    for (int i = 0; i < rule.half(); ++i) {
        const std::vector<Ivl> v = ev.values(rule.nodes[uz(i)], n);
        const Ivl f = ivl_root(Ivl(2) * rule.weights[uz(i)] * rule.z_ratio, rule.m);
        for (int k = 0; k < cols; ++k) M.set(i, k, f * v[uz(parity + 2 * k)]);
    }
    return M;
}

MidRadMatrix build_nonlinearity(const MidRadMatrix& mbar, const std::vector<double>& c_mid, const std::vector<double>& c_rad)
{
    if (static_cast<int>(c_mid.size()) != mbar.cols()) throw std::invalid_argument("coefficient length mismatch");
    MidRadMatrix c(mbar.cols(), 1);
    for (int k = 0; k < mbar.cols(); ++k) {
        c.mid(k, 0) = c_mid[uz(k)];
        c.rad(k, 0) = c_rad.empty() ? 0.0 : c_rad[uz(k)];
    }
    const MidRadMatrix u = multiply(mbar, c);
    std::vector<Ivl> d(uz(mbar.rows()));
    for (int i = 0; i < mbar.rows(); ++i) d[uz(i)] = sqr(u.get(i, 0));
    const MidRadMatrix du = scale_rows(mbar, d);
    return multiply(mbar.transpose(), du);
}

void save_rule(std::ostream& os, const QuadratureRule& rule)
{
    nlohmann::json h;
    h["m"] = rule.m;
    h["kappa"] = {rule.kappa.lo_str(60), rule.kappa.hi_str(60)};
    h["N_nodes"] = rule.N_nodes;
    h["bits"] = rule.bits;
    h["s"] = {rule.s.lo_str(80), rule.s.hi_str(80)};
    h["kappa_tilde"] = {rule.kappa_tilde.lo_str(80), rule.kappa_tilde.hi_str(80)};
    h["z_ratio"] = {rule.z_ratio.lo_str(80), rule.z_ratio.hi_str(80)};
    os << h.dump() << '\n';
    const int digits = static_cast<int>(static_cast<double>(rule.bits) * 0.30103) + 4;
    for (int i = 0; i < rule.half(); ++i)
        os << rule.nodes[uz(i)].lo_str(digits) << ' ' << rule.nodes[uz(i)].hi_str(digits) << ' '
           << rule.weights[uz(i)].lo_str(digits) << ' ' << rule.weights[uz(i)].hi_str(digits) << '\n';
    os << "a_tilde\n";
    write_coefficients(os, rule.a_tilde, 1, digits);
}

QuadratureRule load_rule(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty quadrature rule file");
    const nlohmann::json h = nlohmann::json::parse(line);
    QuadratureRule rule;
    rule.m = h.at("m").get<int>();
    rule.N_nodes = h.at("N_nodes").get<int>();
    rule.bits = h.at("bits").get<long>();
    PrecisionGuard g(rule.bits);
    auto pair = [&](const char* key) { return Ivl::parse(h.at(key)[0].get<std::string>(), h.at(key)[1].get<std::string>()); };
    rule.kappa = pair("kappa");
    rule.s = pair("s");
    rule.kappa_tilde = pair("kappa_tilde");
    rule.z_ratio = pair("z_ratio");
    for (int i = 0; i < rule.N_nodes / 2; ++i) {
        if (!std::getline(is, line)) throw std::invalid_argument("truncated quadrature rule file");
        std::istringstream ls(line);
        std::string a, b, c, d;
        if (!(ls >> a >> b >> c >> d)) throw std::invalid_argument("malformed quadrature rule record");
        rule.nodes.push_back(Ivl::parse(a, b));
        rule.weights.push_back(Ivl::parse(c, d));
    }
    if (!std::getline(is, line) || line != "a_tilde") throw std::invalid_argument("missing recurrence coefficients in rule file");
    rule.a_tilde = read_coefficients(is);
    return rule;
}

QuadratureRule cached_rule(const std::string& cache_dir, int m, const std::string& kappa_text, int N_nodes)
{
    const long bits = working_bits();
    std::filesystem::path path;
    if (!cache_dir.empty()) {
        std::string key = kappa_text;
        for (char& ch : key)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-') ch = '_';
        path = std::filesystem::path(cache_dir) /
               ("rule_m" + std::to_string(m) + "_k" + key + "_N" + std::to_string(N_nodes) + "_b" + std::to_string(bits) + ".txt");
        std::ifstream in(path);
        if (in) {
            QuadratureRule r = load_rule(in);
            if (r.m == m && r.N_nodes == N_nodes && r.bits == bits) return r;
        }
    }
    QuadratureRule rule = freud_gauss_rule(m, decimal_real(kappa_text), N_nodes);
    if (!cache_dir.empty()) {
        std::filesystem::create_directories(cache_dir);
        std::ofstream out(path);
        save_rule(out, rule);
    }
    return rule;
}

}  // namespace fc

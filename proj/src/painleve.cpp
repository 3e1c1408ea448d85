#include "freudcaps/painleve.hpp"

#include "freudcaps/integral.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fc {

namespace {

Ivl lo_point(const Ivl& x) { return Ivl(x.lo()); }
Ivl hi_point(const Ivl& x) { return Ivl(x.hi()); }

// f(g) = -g + sqrt(1 + g^2) for a point-like g, evaluated without cancellation.
Ivl f_branch(const Ivl& g)
{
    const Ivl r = sqrt(Ivl(1) + sqr(g));
    if (g.nonneg()) return Ivl(1) / (g + r);
    return r - g;
}

// f is decreasing: evaluate at the two endpoints of g.
Ivl f_monotone(const Ivl& g)
{
    const Ivl at_hi = f_branch(hi_point(g));
    const Ivl at_lo = f_branch(lo_point(g));
    Ivl out;
    mpfr_set(out.lo_mut(), at_hi.lo(), MPFR_RNDD);
    mpfr_set(out.hi_mut(), at_lo.hi(), MPFR_RNDU);
    return out;
}

Ivl s_map_with_root(const Ivl& b_prev, const Ivl& b_next, const Ivl& sqrt_n, const Ivl& kappa)
{
    const Ivl g = (b_prev + b_next - kappa) / (Ivl(2) * sqrt_n);
    return sqrt_n * f_monotone(g);
}

bool sandwich_holds(const Ivl& lo_n, const Ivl& hi_n, const Ivl& s_of_upper, const Ivl& s_of_lower)
{
    return lo_n.nonneg() && certainly_le(lo_n, s_of_upper) && certainly_le(s_of_upper, s_of_lower) &&
           certainly_le(s_of_lower, hi_n);
}

}  // namespace

RealFn decimal_real(const std::string& text)
{
    Ivl::parse(text);  // validates eagerly
    return [text] { return Ivl::parse(text); };
}

RealFn scaled_real(RealFn x, long num, long den)
{
    return [x = std::move(x), num, den] { return sqrt(Ivl::rational(num, den)) * x(); };
}

PainleveParams PainleveParams::from_strings(const std::string& kappa, const std::string& c_minus, const std::string& c_plus)
{
    PainleveParams p;
    p.kappa = decimal_real(kappa);
    p.c_minus = Ivl::parse(c_minus);
    p.c_plus = Ivl::parse(c_plus);
    p.validate();
    return p;
}

void PainleveParams::validate() const
{
    if (!kappa) throw std::invalid_argument("kappa not set");
    const Ivl k = kappa();
    if (!k.positive()) throw std::invalid_argument("kappa must be positive (the interval may not contain 0)");
    if (!c_minus.positive() || !certainly_lt(c_minus, Ivl(1))) throw std::invalid_argument("need 0 < c_minus < 1");
    if (!certainly_gt(c_plus, Ivl(1))) throw std::invalid_argument("need c_plus > 1");
}

Ivl s_map(const Ivl& b_prev, const Ivl& b_next, long n, const Ivl& kappa)
{
    if (n < 1) throw std::invalid_argument("s_map needs n >= 1");
    if (!b_prev.nonneg() || !b_next.nonneg()) throw std::invalid_argument("s_map needs nonnegative arguments");
    return s_map_with_root(b_prev, b_next, sqrt(Ivl(n)), kappa);
}

Ivl envelope(const Ivl& c, long n) { return c * sqrt(Ivl(n) / Ivl(3)); }

AsymptoticResiduals asymptotic_residuals(const Ivl& kappa, const Ivl& c_minus, const Ivl& c_plus, long N1)
{
    if (N1 <= 1) throw std::invalid_argument("N1 must exceed 1");
    const Ivl inv = Ivl(1) / Ivl(N1);
    const Ivl s = sqrt(Ivl(1) - inv) + sqrt(Ivl(1) + inv);
    const Ivl shift = sqrt(Ivl(3)) * kappa / sqrt(Ivl(N1));
    AsymptoticResiduals r;
    r.x_plus = c_plus * s - shift;
    r.y_minus = c_minus * s - shift;
    r.bound1 = sqrt(Ivl(12) + sqr(r.x_plus)) - Ivl(2) * c_plus - Ivl(2) * c_minus;
    r.bound2 = sqrt(Ivl(12) + sqr(Ivl(2) * c_minus)) + shift - c_minus * s - Ivl(2) * c_plus;
    return r;
}

bool verify_asymptotic_threshold(const PainleveParams& params, long N1)
{
    params.validate();
    const AsymptoticResiduals r = asymptotic_residuals(params.kappa(), params.c_minus, params.c_plus, N1);
    return r.bound1.nonneg() && mpfr_sgn(r.bound2.hi()) <= 0 && r.x_plus.nonneg() &&
           certainly_ge(r.y_minus, Ivl(-2) * params.c_minus);
}

namespace {

// Envelope sandwich check with preallocated MPFR scratch and explicit directed rounding.
// The middle inequality S b+ <= S b- follows from c- < c+ and the monotonicity of S.
class EnvelopeChecker {
public:
    EnvelopeChecker(const Ivl& kappa, const Ivl& c_minus, const Ivl& c_plus) : prec_(working_bits())
    {
        for (mpfr_ptr v : vars()) mpfr_init2(v, prec_);
        mpfr_set(k_lo_, kappa.lo(), MPFR_RNDD);
        mpfr_set(k_hi_, kappa.hi(), MPFR_RNDU);
        mpfr_set(cm_lo_, c_minus.lo(), MPFR_RNDD);
        mpfr_set(cm_hi_, c_minus.hi(), MPFR_RNDU);
        mpfr_set(cp_lo_, c_plus.lo(), MPFR_RNDD);
        mpfr_set(cp_hi_, c_plus.hi(), MPFR_RNDU);
    }
    ~EnvelopeChecker()
    {
        for (mpfr_ptr v : vars()) mpfr_clear(v);
    }
    EnvelopeChecker(const EnvelopeChecker&) = delete;
    EnvelopeChecker& operator=(const EnvelopeChecker&) = delete;

    bool holds(long n)
    {
        root_third(rp_lo_, rp_hi_, n - 1);
        root_third(rc_lo_, rc_hi_, n);
        root_third(rn_lo_, rn_hi_, n + 1);
        mpfr_sqrt_ui(sn_lo_, static_cast<unsigned long>(n), MPFR_RNDD);
        mpfr_sqrt_ui(sn_hi_, static_cast<unsigned long>(n), MPFR_RNDU);

        // Lower bound of (S b+)_n.
        mpfr_add(t_, rp_hi_, rn_hi_, MPFR_RNDU);
        mpfr_mul(t_, t_, cp_hi_, MPFR_RNDU);
        mpfr_sub(t_, t_, k_lo_, MPFR_RNDU);
        mpfr_mul_2ui(u_, mpfr_sgn(t_) >= 0 ? sn_lo_ : sn_hi_, 1, MPFR_RNDD);
        mpfr_div(g_, t_, u_, MPFR_RNDU);
        f_lower(f_, g_);
        mpfr_mul(s_up_, f_, sn_lo_, MPFR_RNDD);

        // Upper bound of (S b-)_n.
        mpfr_add(t_, rp_lo_, rn_lo_, MPFR_RNDD);
        mpfr_mul(t_, t_, cm_lo_, MPFR_RNDD);
        mpfr_sub(t_, t_, k_hi_, MPFR_RNDD);
        mpfr_mul_2ui(u_, mpfr_sgn(t_) >= 0 ? sn_hi_ : sn_lo_, 1, MPFR_RNDU);
        mpfr_div(g_, t_, u_, MPFR_RNDD);
        f_upper(f_, g_);
        mpfr_mul(s_lo_, f_, sn_hi_, MPFR_RNDU);

        mpfr_mul(t_, cm_hi_, rc_hi_, MPFR_RNDU);
        mpfr_mul(u_, cp_lo_, rc_lo_, MPFR_RNDD);
        return mpfr_lessequal_p(t_, s_up_) && mpfr_lessequal_p(s_lo_, u_);
    }

private:
    std::vector<mpfr_ptr> vars()
    {
        return {k_lo_, k_hi_, cm_lo_, cm_hi_, cp_lo_, cp_hi_, rp_lo_, rp_hi_, rc_lo_, rc_hi_, rn_lo_, rn_hi_,
                sn_lo_, sn_hi_, t_, u_, g_, f_, w_, s_up_, s_lo_};
    }

    void root_third(mpfr_ptr lo, mpfr_ptr hi, long k)
    {
        mpfr_set_ui(lo, static_cast<unsigned long>(k), MPFR_RNDD);
        mpfr_div_ui(lo, lo, 3, MPFR_RNDD);
        mpfr_sqrt(lo, lo, MPFR_RNDD);
        mpfr_set_ui(hi, static_cast<unsigned long>(k), MPFR_RNDU);
        mpfr_div_ui(hi, hi, 3, MPFR_RNDU);
        mpfr_sqrt(hi, hi, MPFR_RNDU);
    }

    // Lower bound of f(g) = -g + sqrt(1 + g^2) at the point g.
    void f_lower(mpfr_ptr out, mpfr_srcptr g)
    {
        if (mpfr_sgn(g) >= 0) {
            mpfr_sqr(w_, g, MPFR_RNDU);
            mpfr_add_ui(w_, w_, 1, MPFR_RNDU);
            mpfr_sqrt(w_, w_, MPFR_RNDU);
            mpfr_add(w_, w_, g, MPFR_RNDU);
            mpfr_ui_div(out, 1, w_, MPFR_RNDD);
        } else {
            mpfr_sqr(w_, g, MPFR_RNDD);
            mpfr_add_ui(w_, w_, 1, MPFR_RNDD);
            mpfr_sqrt(w_, w_, MPFR_RNDD);
            mpfr_sub(out, w_, g, MPFR_RNDD);
        }
    }

    // Upper bound of f(g) at the point g.
    void f_upper(mpfr_ptr out, mpfr_srcptr g)
    {
        if (mpfr_sgn(g) >= 0) {
            mpfr_sqr(w_, g, MPFR_RNDD);
            mpfr_add_ui(w_, w_, 1, MPFR_RNDD);
            mpfr_sqrt(w_, w_, MPFR_RNDD);
            mpfr_add(w_, w_, g, MPFR_RNDD);
            mpfr_ui_div(out, 1, w_, MPFR_RNDU);
        } else {
            mpfr_sqr(w_, g, MPFR_RNDU);
            mpfr_add_ui(w_, w_, 1, MPFR_RNDU);
            mpfr_sqrt(w_, w_, MPFR_RNDU);
            mpfr_sub(out, w_, g, MPFR_RNDU);
        }
    }

    long prec_;
    mpfr_t k_lo_, k_hi_, cm_lo_, cm_hi_, cp_lo_, cp_hi_;
    mpfr_t rp_lo_, rp_hi_, rc_lo_, rc_hi_, rn_lo_, rn_hi_, sn_lo_, sn_hi_;
    mpfr_t t_, u_, g_, f_, w_, s_up_, s_lo_;
};

}  // namespace

long find_N2(const PainleveParams& params, long N1)
{
    if (!verify_asymptotic_threshold(params, N1)) throw EnclosureError("asymptotic threshold does not hold at N1");
    EnvelopeChecker check(params.kappa(), params.c_minus, params.c_plus);
    for (long n = N1; n >= 1; --n)
        if (!check.holds(n)) return n;
    return 0;
}

InflationResult epsilon_inflate(const PainleveParams& params, long N2, const Ivl& b1)
{
    if (N2 < 1) throw std::invalid_argument("epsilon_inflate needs N2 >= 1");
    const Ivl kappa = params.kappa();
    const std::size_t len = static_cast<std::size_t>(N2) + 3;
    InflationResult res;
    res.lower.assign(len, Ivl(0));
    res.upper.assign(len, Ivl(0));
    for (long n = 1; n <= N2 + 2; ++n) {
        res.lower[static_cast<std::size_t>(n)] = lo_point(envelope(params.c_minus, n));
        res.upper[static_cast<std::size_t>(n)] = hi_point(envelope(params.c_plus, n));
    }
    res.lower[1] = lo_point(min(res.lower[1], b1));
    res.upper[1] = hi_point(max(res.upper[1], b1));

    const Ivl shrink = Ivl(1.0 - 0x1p-20);
    const Ivl grow = Ivl(1.0 + 0x1p-20);
    std::vector<Ivl> roots(len);
    for (long n = 1; n <= N2 + 1; ++n) roots[static_cast<std::size_t>(n)] = sqrt(Ivl(n));

    auto& lo = res.lower;
    auto& hi = res.upper;
    for (int sweep = 1;; ++sweep) {
        bool changed = false;
        for (long n = N2; n >= 1; --n) {
            const std::size_t k = static_cast<std::size_t>(n);
            const Ivl s_up = s_map_with_root(hi[k - 1], hi[k + 1], roots[k], kappa);
            const Ivl s_lo = s_map_with_root(lo[k - 1], lo[k + 1], roots[k], kappa);
            if (mpfr_less_p(s_up.lo(), lo[k].lo())) {
                lo[k] = lo_point(lo_point(s_up) * shrink);
                changed = true;
            }
            if (mpfr_greater_p(s_lo.hi(), hi[k].hi())) {
                hi[k] = hi_point(hi_point(s_lo) * grow);
                changed = true;
            }
            if (!lo[k].nonneg()) throw EnclosureError("epsilon-inflation diverged at index " + std::to_string(n));
        }
        res.sweeps = sweep;
        if (!changed) break;
        if (sweep >= 10000) throw EnclosureError("epsilon-inflation did not settle");
    }

    for (long n = 1; n <= N2 + 1; ++n) {
        const std::size_t k = static_cast<std::size_t>(n);
        const Ivl s_up = s_map_with_root(hi[k - 1], hi[k + 1], roots[k], kappa);
        const Ivl s_lo = s_map_with_root(lo[k - 1], lo[k + 1], roots[k], kappa);
        if (!sandwich_holds(lo[k], hi[k], s_up, s_lo))
            throw EnclosureError("epsilon-inflation verification failed at index " + std::to_string(n));
    }
    if (!certainly_le(lo[1], b1) || !certainly_le(b1, hi[1])) throw EnclosureError("initial datum not contained");
    lo.resize(static_cast<std::size_t>(N2) + 2);
    hi.resize(static_cast<std::size_t>(N2) + 2);
    return res;
}

Ivl b1_by_quadrature(const Ivl& kappa)
{
    const Ivl z = enclose_weighted_integral({Ivl(1)}, kappa, Ivl(2));
    const Ivl m2 = enclose_weighted_integral({Ivl(0), Ivl(0), Ivl(1)}, kappa, Ivl(2));
    return m2 / z;
}

Ivl b1_by_moments(const Ivl& kappa)
{
    return weighted_even_moment(1, kappa, Ivl(2)) / weighted_even_moment(0, kappa, Ivl(2));
}

std::vector<Ivl> forward_bn(const Ivl& kappa, const Ivl& b1, long count)
{
    std::vector<Ivl> b;
    b.reserve(static_cast<std::size_t>(count) + 1);
    b.emplace_back(0);
    b.push_back(b1);
    Ivl t;
    for (long n = 1; n < count; ++n) {
        const Ivl& bn = b[static_cast<std::size_t>(n)];
        if (!bn.positive()) break;
        Ivl next;
        div(next, Ivl(n), bn);
        sub(next, next, bn);
        sub(next, next, b[static_cast<std::size_t>(n - 1)]);
        add(next, next, kappa);
        b.push_back(std::move(next));
    }
    return b;
}

std::vector<Ivl> forward_bn_escalating(const RealFn& kappa, long count, const ForwardOptions& opt, long* bits_used)
{
    long last_valid = 0;
    for (long bits = opt.start_bits;; bits *= 2) {
        std::vector<Ivl> b;
        {
            PrecisionGuard g(bits);
            const Ivl k = kappa();
            b = forward_bn(k, b1_by_moments(k), count);
        }
        long ok = 0;
        for (long n = 1; n < static_cast<long>(b.size()) && n <= count; ++n) {
            const Ivl& x = b[static_cast<std::size_t>(n)];
            if (!x.positive() || !relatively_below(x.width(), x, opt.store_bits + 8)) break;
            ok = n;
        }
        last_valid = std::max(last_valid, ok);
        if (ok >= count) {
            if (bits_used) *bits_used = bits;
            std::vector<Ivl> out(static_cast<std::size_t>(count) + 1);
            for (long n = 0; n <= count; ++n)
                out[static_cast<std::size_t>(n)] = round_to(b[static_cast<std::size_t>(n)], opt.store_bits);
            return out;
        }
        if (bits * 2 > opt.max_bits)
            throw PrecisionExhausted("forward recursion precision ceiling reached", last_valid);
    }
}

long find_N(const PainleveParams& params, const std::vector<Ivl>& b, long N2)
{
    if (static_cast<long>(b.size()) <= N2) throw std::invalid_argument("enclosure shorter than N2");
    for (long n = N2; n >= 1; --n) {
        const Ivl& x = b[static_cast<std::size_t>(n)];
        const bool inside = certainly_ge(x, envelope(params.c_minus, n)) && certainly_le(x, envelope(params.c_plus, n));
        if (!inside) return n + 1;
    }
    return 1;
}

BnEnclosure certify_painleve(const PainleveParams& params, const PainleveOptions& opt)
{
    params.validate();
    BnEnclosure enc;
    enc.c_minus = params.c_minus;
    enc.c_plus = params.c_plus;
    enc.N1 = opt.N1;
    enc.N2 = find_N2(params, opt.N1);
    if (enc.N2 < 1) throw EnclosureError("envelope sandwich holds for every n; nothing to inflate");
    const Ivl b1q = b1_by_quadrature(params.kappa());
    InflationResult infl = epsilon_inflate(params, enc.N2, b1q);
    enc.inflation_sweeps = infl.sweeps;

    const std::vector<Ivl> fwd = forward_bn_escalating(params.kappa, enc.N2, opt.forward, &enc.forward_bits);
    enc.b.assign(static_cast<std::size_t>(enc.N2) + 1, Ivl(0));
    for (long n = 1; n <= enc.N2; ++n) {
        const std::size_t k = static_cast<std::size_t>(n);
        const auto cut = intersect(fwd[k], hull(infl.lower[k], infl.upper[k]));
        if (!cut) throw EnclosureError("forward iterate disjoint from the inflation bounds at index " + std::to_string(n));
        enc.b[k] = *cut;
    }
    const auto b1 = intersect(enc.b[1], b1q);
    if (!b1) throw EnclosureError("b1 enclosures disagree");
    enc.b1 = *b1;
    enc.lower = std::move(infl.lower);
    enc.upper = std::move(infl.upper);
    enc.N = find_N(params, enc.b, enc.N2);
    return enc;
}

namespace {

void write_section(std::ostream& os, const char* name, const std::vector<Ivl>& v)
{
    os << name << ' ' << v.size() << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) os << i << ' ' << v[i].lo_str(90) << ' ' << v[i].hi_str(90) << '\n';
}

std::vector<Ivl> read_section(std::istream& is, const std::string& name)
{
    std::string tag;
    std::size_t count = 0;
    if (!(is >> tag >> count) || tag != name) throw std::invalid_argument("missing section '" + name + "' in enclosure file");
    std::vector<Ivl> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t idx = 0;
        std::string lo;
        std::string hi;
        if (!(is >> idx >> lo >> hi) || idx != i) throw std::invalid_argument("malformed record in section '" + name + "'");
        v[i] = Ivl::parse(lo, hi);
    }
    return v;
}

std::string cache_key(const std::string& text)
{
    std::string key = text;
    for (char& ch : key)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-') ch = '_';
    return key;
}

}  // namespace

void save_enclosure(std::ostream& os, const BnEnclosure& enc, const std::string& kappa_text)
{
    nlohmann::json h;
    h["kappa"] = kappa_text;
    h["c_minus"] = {enc.c_minus.lo_str(40), enc.c_minus.hi_str(40)};
    h["c_plus"] = {enc.c_plus.lo_str(40), enc.c_plus.hi_str(40)};
    h["b1"] = {enc.b1.lo_str(90), enc.b1.hi_str(90)};
    h["N1"] = enc.N1;
    h["N2"] = enc.N2;
    h["N"] = enc.N;
    h["forward_bits"] = enc.forward_bits;
    h["inflation_sweeps"] = enc.inflation_sweeps;
    h["bits"] = std::min({min_precision(enc.b), min_precision(enc.lower), min_precision(enc.upper),
                          min_precision({enc.b1, enc.c_minus, enc.c_plus})});
    os << h.dump() << '\n';
    write_section(os, "b", enc.b);
    write_section(os, "lower", enc.lower);
    write_section(os, "upper", enc.upper);
}

BnEnclosure load_enclosure(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty enclosure file");
    const nlohmann::json h = nlohmann::json::parse(line);
    PrecisionGuard g(h.at("bits").get<long>());
    auto pair = [&](const char* key) { return Ivl::parse(h.at(key)[0].get<std::string>(), h.at(key)[1].get<std::string>()); };
    BnEnclosure enc;
    enc.c_minus = pair("c_minus");
    enc.c_plus = pair("c_plus");
    enc.b1 = pair("b1");
    enc.N1 = h.at("N1").get<long>();
    enc.N2 = h.at("N2").get<long>();
    enc.N = h.at("N").get<long>();
    enc.forward_bits = h.at("forward_bits").get<long>();
    enc.inflation_sweeps = h.at("inflation_sweeps").get<int>();
    enc.b = read_section(is, "b");
    enc.lower = read_section(is, "lower");
    enc.upper = read_section(is, "upper");
    if (static_cast<long>(enc.b.size()) != enc.N2 + 1) throw std::invalid_argument("enclosure length does not match N2");
    return enc;
}

BnEnclosure cached_painleve(const std::string& cache_dir, const std::string& kappa, const std::string& c_minus,
                            const std::string& c_plus, const PainleveOptions& opt)
{
    const PainleveParams params = PainleveParams::from_strings(kappa, c_minus, c_plus);
    std::filesystem::path path;
    if (!cache_dir.empty()) {
        path = std::filesystem::path(cache_dir) /
               ("painleve_k" + cache_key(kappa) + "_m" + cache_key(c_minus) + "_p" + cache_key(c_plus) + "_N1" +
                std::to_string(opt.N1) + "_s" + std::to_string(opt.forward.store_bits) + ".txt");
        std::ifstream in(path);
        if (in) {
            BnEnclosure enc = load_enclosure(in);
            if (enc.N1 == opt.N1) return enc;
        }
    }
    BnEnclosure enc = certify_painleve(params, opt);
    if (!cache_dir.empty()) {
        std::filesystem::create_directories(cache_dir);
        const std::filesystem::path tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp);
            save_enclosure(out, enc, kappa);
        }
        std::filesystem::rename(tmp, path);
    }
    return enc;
}

}  // namespace fc

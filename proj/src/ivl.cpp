#include "freudcaps/ivl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>

namespace fc {

namespace {

thread_local long g_bits = 256;

struct MpfrTmp {
    mpfr_t v;
    explicit MpfrTmp(long bits) { mpfr_init2(v, bits); }
    ~MpfrTmp() { mpfr_clear(v); }
    MpfrTmp(const MpfrTmp&) = delete;
    MpfrTmp& operator=(const MpfrTmp&) = delete;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\n\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\n\r");
    return s.substr(b, e - b + 1);
}

std::string endpoint_str(mpfr_srcptr x, int digits, mpfr_rnd_t rnd)
{
    if (mpfr_zero_p(x)) return "0";
    if (mpfr_inf_p(x)) return mpfr_sgn(x) > 0 ? "inf" : "-inf";
    if (mpfr_nan_p(x)) return "nan";
    mpfr_exp_t e = 0;
    char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), x, rnd);
    std::string m(raw);
    mpfr_free_str(raw);
    std::string sign;
    if (m[0] == '-') {
        sign = "-";
        m.erase(0, 1);
    }
    std::ostringstream os;
    os << sign << m[0];
    if (m.size() > 1) os << '.' << m.substr(1);
    os << 'e' << (e - 1);
    return os.str();
}

// The inward-rounded decimal when it reads back to exactly x at the precision of x,
// otherwise the outward one. Print-parse-print cycles are then stable.
std::string snapped_str(mpfr_srcptr x, int digits, mpfr_rnd_t rnd)
{
    const mpfr_rnd_t inward = rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD;
    const std::string in = endpoint_str(x, digits, inward);
    if (!mpfr_number_p(x)) return in;
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(x));
    mpfr_set_str(t, in.c_str(), 10, rnd);
    const bool exact = mpfr_equal_p(t, x) != 0;
    mpfr_clear(t);
    return exact ? in : endpoint_str(x, digits, rnd);
}

}  // namespace

long working_bits() { return g_bits; }

PrecisionGuard::PrecisionGuard(long bits) : saved_(g_bits)
{
    if (bits < 53) throw std::invalid_argument("precision must be at least 53 bits");
    g_bits = bits;
}

PrecisionGuard::~PrecisionGuard() { g_bits = saved_; }

Ivl::Ivl()
{
    mpfr_init2(lo_, g_bits);
    mpfr_init2(hi_, g_bits);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Ivl::Ivl(double v) : Ivl(v, v) {}

Ivl::Ivl(int v) : Ivl(static_cast<long>(v)) {}

Ivl::Ivl(long v)
{
    mpfr_init2(lo_, g_bits);
    mpfr_init2(hi_, g_bits);
    mpfr_set_si(lo_, v, MPFR_RNDD);
    mpfr_set_si(hi_, v, MPFR_RNDU);
}

Ivl::Ivl(double lo, double hi)
{
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) throw std::invalid_argument("invalid interval endpoints");
    mpfr_init2(lo_, std::max<long>(g_bits, 53));
    mpfr_init2(hi_, std::max<long>(g_bits, 53));
    mpfr_set_d(lo_, lo, MPFR_RNDD);
    mpfr_set_d(hi_, hi, MPFR_RNDU);
}

Ivl::Ivl(mpfr_srcptr lo, mpfr_srcptr hi)
{
    mpfr_init2(lo_, g_bits);
    mpfr_init2(hi_, g_bits);
    mpfr_set(lo_, lo, MPFR_RNDD);
    mpfr_set(hi_, hi, MPFR_RNDU);
    if (mpfr_greater_p(lo_, hi_)) throw std::invalid_argument("invalid interval endpoints");
}

Ivl::Ivl(mpfr_srcptr point) : Ivl(point, point) {}

Ivl::Ivl(const Ivl& o)
{
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Ivl::Ivl(Ivl&& o) noexcept
{
    mpfr_init2(lo_, MPFR_PREC_MIN);
    mpfr_init2(hi_, MPFR_PREC_MIN);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Ivl& Ivl::operator=(const Ivl& o)
{
    if (this != &o) {
        mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
        mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

Ivl& Ivl::operator=(Ivl&& o) noexcept
{
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
}

Ivl::~Ivl()
{
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Ivl Ivl::parse(const std::string& lo, const std::string& hi)
{
    Ivl r;
    const std::string l = trim(lo);
    const std::string h = trim(hi);
    if (mpfr_set_str(r.lo_, l.c_str(), 10, MPFR_RNDD) != 0) throw std::invalid_argument("cannot parse: " + l);
    if (mpfr_set_str(r.hi_, h.c_str(), 10, MPFR_RNDU) != 0) throw std::invalid_argument("cannot parse: " + h);
    if (mpfr_greater_p(r.lo_, r.hi_)) throw std::invalid_argument("interval with lo > hi");
    return r;
}

Ivl Ivl::parse(const std::string& s)
{
    std::string t = trim(s);
    if (!t.empty() && t.front() == '[') {
        const auto close = t.find(']');
        if (close == std::string::npos) throw std::invalid_argument("unterminated interval: " + s);
        t = t.substr(1, close - 1);
        const auto comma = t.find(',');
        if (comma == std::string::npos) return parse(t, t);
        return parse(t.substr(0, comma), t.substr(comma + 1));
    }
    const auto sp = t.find_first_of(" \t");
    if (sp != std::string::npos) return parse(t.substr(0, sp), t.substr(sp + 1));
    return parse(t, t);
}

Ivl Ivl::rational(long p, long q)
{
    if (q == 0) throw EnclosureError("rational with zero denominator");
    Ivl r;
    mpfr_set_si(r.lo_, p, MPFR_RNDD);
    mpfr_div_si(r.lo_, r.lo_, q, MPFR_RNDD);
    mpfr_set_si(r.hi_, p, MPFR_RNDU);
    mpfr_div_si(r.hi_, r.hi_, q, MPFR_RNDU);
    if (mpfr_greater_p(r.lo_, r.hi_)) mpfr_swap(r.lo_, r.hi_);
    return r;
}

Ivl Ivl::pi()
{
    Ivl r;
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

Ivl Ivl::ln2()
{
    Ivl r;
    mpfr_const_log2(r.lo_, MPFR_RNDD);
    mpfr_const_log2(r.hi_, MPFR_RNDU);
    return r;
}

long Ivl::prec() const { return static_cast<long>(std::max(mpfr_get_prec(lo_), mpfr_get_prec(hi_))); }

double Ivl::lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Ivl::hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Ivl::mid_d() const
{
    MpfrTmp t(prec() + 1);
    mpfr_add(t.v, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(t.v, t.v, 1, MPFR_RNDN);
    return mpfr_get_d(t.v, MPFR_RNDN);
}

double Ivl::mag_d() const
{
    const double a = std::fabs(mpfr_get_d(lo_, MPFR_RNDD));
    const double b = std::fabs(mpfr_get_d(hi_, MPFR_RNDU));
    return std::max(a, b);
}

double Ivl::mig_d() const
{
    if (contains_zero()) return 0.0;
    if (mpfr_sgn(lo_) > 0) return mpfr_get_d(lo_, MPFR_RNDD);
    return -mpfr_get_d(hi_, MPFR_RNDU);
}

double Ivl::width_d() const
{
    MpfrTmp t(53);
    mpfr_sub(t.v, hi_, lo_, MPFR_RNDU);
    return mpfr_get_d(t.v, MPFR_RNDU);
}

Ivl Ivl::mid() const
{
    Ivl r;
    MpfrTmp t(prec() + 1);
    mpfr_add(t.v, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(t.v, t.v, 1, MPFR_RNDN);
    mpfr_set(r.lo_, t.v, MPFR_RNDD);
    mpfr_set(r.hi_, t.v, MPFR_RNDU);
    return r;
}

Ivl Ivl::width() const
{
    Ivl r;
    mpfr_sub(r.lo_, hi_, lo_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, lo_, MPFR_RNDU);
    return r;
}

Ivl Ivl::mag() const
{
    Ivl r;
    MpfrTmp a(prec());
    mpfr_abs(a.v, lo_, MPFR_RNDU);
    if (mpfr_cmpabs(hi_, a.v) > 0) mpfr_abs(a.v, hi_, MPFR_RNDU);
    mpfr_set(r.lo_, a.v, MPFR_RNDD);
    mpfr_set(r.hi_, a.v, MPFR_RNDU);
    return r;
}

bool Ivl::contains(double x) const { return mpfr_cmp_d(lo_, x) <= 0 && mpfr_cmp_d(hi_, x) >= 0; }

bool Ivl::contains(const Ivl& x) const { return mpfr_lessequal_p(lo_, x.lo_) && mpfr_greaterequal_p(hi_, x.hi_); }

bool Ivl::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
bool Ivl::positive() const { return mpfr_sgn(lo_) > 0; }
bool Ivl::negative() const { return mpfr_sgn(hi_) < 0; }
bool Ivl::nonneg() const { return mpfr_sgn(lo_) >= 0; }
bool Ivl::is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }

std::string Ivl::lo_str(int digits) const { return snapped_str(lo_, digits, MPFR_RNDD); }
std::string Ivl::hi_str(int digits) const { return snapped_str(hi_, digits, MPFR_RNDU); }

std::string Ivl::str(int digits) const { return "[" + lo_str(digits) + ", " + hi_str(digits) + "]"; }

Ivl& Ivl::operator+=(const Ivl& o)
{
    add(*this, *this, o);
    return *this;
}

Ivl& Ivl::operator-=(const Ivl& o)
{
    sub(*this, *this, o);
    return *this;
}

Ivl& Ivl::operator*=(const Ivl& o)
{
    mul(*this, *this, o);
    return *this;
}

Ivl& Ivl::operator/=(const Ivl& o)
{
    div(*this, *this, o);
    return *this;
}

void assign(Ivl& r, const Ivl& a)
{
    if (&r == &a) return;
    mpfr_set(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, a.hi_, MPFR_RNDU);
}

namespace {

void fit(Ivl& r)
{
    if (mpfr_get_prec(r.lo()) != g_bits || mpfr_get_prec(r.hi()) != g_bits) {
        mpfr_prec_round(r.lo_mut(), g_bits, MPFR_RNDD);
        mpfr_prec_round(r.hi_mut(), g_bits, MPFR_RNDU);
    }
}

}  // namespace

void add(Ivl& r, const Ivl& a, const Ivl& b)
{
    MpfrTmp l(g_bits);
    MpfrTmp h(g_bits);
    mpfr_add(l.v, a.lo(), b.lo(), MPFR_RNDD);
    mpfr_add(h.v, a.hi(), b.hi(), MPFR_RNDU);
    fit(r);
    mpfr_set(r.lo_mut(), l.v, MPFR_RNDD);
    mpfr_set(r.hi_mut(), h.v, MPFR_RNDU);
}

void sub(Ivl& r, const Ivl& a, const Ivl& b)
{
    MpfrTmp l(g_bits);
    MpfrTmp h(g_bits);
    mpfr_sub(l.v, a.lo(), b.hi(), MPFR_RNDD);
    mpfr_sub(h.v, a.hi(), b.lo(), MPFR_RNDU);
    fit(r);
    mpfr_set(r.lo_mut(), l.v, MPFR_RNDD);
    mpfr_set(r.hi_mut(), h.v, MPFR_RNDU);
}

void mul(Ivl& r, const Ivl& a, const Ivl& b)
{
    MpfrTmp l(g_bits);
    MpfrTmp h(g_bits);
    const int al = mpfr_sgn(a.lo());
    const int ah = mpfr_sgn(a.hi());
    const int bl = mpfr_sgn(b.lo());
    const int bh = mpfr_sgn(b.hi());
    if (al >= 0 && bl >= 0) {
        mpfr_mul(l.v, a.lo(), b.lo(), MPFR_RNDD);
        mpfr_mul(h.v, a.hi(), b.hi(), MPFR_RNDU);
    } else if (ah <= 0 && bh <= 0) {
        mpfr_mul(l.v, a.hi(), b.hi(), MPFR_RNDD);
        mpfr_mul(h.v, a.lo(), b.lo(), MPFR_RNDU);
    } else if (al >= 0 && bh <= 0) {
        mpfr_mul(l.v, a.hi(), b.lo(), MPFR_RNDD);
        mpfr_mul(h.v, a.lo(), b.hi(), MPFR_RNDU);
    } else if (ah <= 0 && bl >= 0) {
        mpfr_mul(l.v, a.lo(), b.hi(), MPFR_RNDD);
        mpfr_mul(h.v, a.hi(), b.lo(), MPFR_RNDU);
    } else if (al >= 0) {
        mpfr_mul(l.v, a.hi(), b.lo(), MPFR_RNDD);
        mpfr_mul(h.v, a.hi(), b.hi(), MPFR_RNDU);
    } else if (ah <= 0) {
        mpfr_mul(l.v, a.lo(), b.hi(), MPFR_RNDD);
        mpfr_mul(h.v, a.lo(), b.lo(), MPFR_RNDU);
    } else if (bl >= 0) {
        mpfr_mul(l.v, a.lo(), b.hi(), MPFR_RNDD);
        mpfr_mul(h.v, a.hi(), b.hi(), MPFR_RNDU);
    } else if (bh <= 0) {
        mpfr_mul(l.v, a.hi(), b.lo(), MPFR_RNDD);
        mpfr_mul(h.v, a.lo(), b.lo(), MPFR_RNDU);
    } else {
        MpfrTmp t(g_bits);
        mpfr_mul(l.v, a.lo(), b.hi(), MPFR_RNDD);
        mpfr_mul(t.v, a.hi(), b.lo(), MPFR_RNDD);
        mpfr_min(l.v, l.v, t.v, MPFR_RNDD);
        mpfr_mul(h.v, a.lo(), b.lo(), MPFR_RNDU);
        mpfr_mul(t.v, a.hi(), b.hi(), MPFR_RNDU);
        mpfr_max(h.v, h.v, t.v, MPFR_RNDU);
    }
    fit(r);
    mpfr_set(r.lo_mut(), l.v, MPFR_RNDD);
    mpfr_set(r.hi_mut(), h.v, MPFR_RNDU);
}

void div(Ivl& r, const Ivl& a, const Ivl& b)
{
    if (b.contains_zero()) throw EnclosureError("division by an interval containing zero");
    MpfrTmp l(g_bits);
    MpfrTmp h(g_bits);
    const bool bpos = mpfr_sgn(b.lo()) > 0;
    const int al = mpfr_sgn(a.lo());
    const int ah = mpfr_sgn(a.hi());
    if (bpos) {
        if (al >= 0) {
            mpfr_div(l.v, a.lo(), b.hi(), MPFR_RNDD);
            mpfr_div(h.v, a.hi(), b.lo(), MPFR_RNDU);
        } else if (ah <= 0) {
            mpfr_div(l.v, a.lo(), b.lo(), MPFR_RNDD);
            mpfr_div(h.v, a.hi(), b.hi(), MPFR_RNDU);
        } else {
            mpfr_div(l.v, a.lo(), b.lo(), MPFR_RNDD);
            mpfr_div(h.v, a.hi(), b.lo(), MPFR_RNDU);
        }
    } else {
        if (al >= 0) {
            mpfr_div(l.v, a.hi(), b.hi(), MPFR_RNDD);
            mpfr_div(h.v, a.lo(), b.lo(), MPFR_RNDU);
        } else if (ah <= 0) {
            mpfr_div(l.v, a.hi(), b.lo(), MPFR_RNDD);
            mpfr_div(h.v, a.lo(), b.hi(), MPFR_RNDU);
        } else {
            mpfr_div(l.v, a.hi(), b.hi(), MPFR_RNDD);
            mpfr_div(h.v, a.lo(), b.hi(), MPFR_RNDU);
        }
    }
    fit(r);
    mpfr_set(r.lo_mut(), l.v, MPFR_RNDD);
    mpfr_set(r.hi_mut(), h.v, MPFR_RNDU);
}

Ivl operator-(const Ivl& a)
{
    Ivl r;
    mpfr_neg(r.lo_mut(), a.hi(), MPFR_RNDD);
    mpfr_neg(r.hi_mut(), a.lo(), MPFR_RNDU);
    return r;
}

Ivl operator+(const Ivl& a, const Ivl& b)
{
    Ivl r;
    add(r, a, b);
    return r;
}

Ivl operator-(const Ivl& a, const Ivl& b)
{
    Ivl r;
    sub(r, a, b);
    return r;
}

Ivl operator*(const Ivl& a, const Ivl& b)
{
    Ivl r;
    mul(r, a, b);
    return r;
}

Ivl operator/(const Ivl& a, const Ivl& b)
{
    Ivl r;
    div(r, a, b);
    return r;
}

Ivl sqr(const Ivl& a)
{
    Ivl r;
    if (mpfr_sgn(a.lo()) >= 0) {
        mpfr_sqr(r.lo_mut(), a.lo(), MPFR_RNDD);
        mpfr_sqr(r.hi_mut(), a.hi(), MPFR_RNDU);
    } else if (mpfr_sgn(a.hi()) <= 0) {
        mpfr_sqr(r.lo_mut(), a.hi(), MPFR_RNDD);
        mpfr_sqr(r.hi_mut(), a.lo(), MPFR_RNDU);
    } else {
        mpfr_set_zero(r.lo_mut(), 1);
        if (mpfr_cmpabs(a.lo(), a.hi()) > 0) {
            mpfr_sqr(r.hi_mut(), a.lo(), MPFR_RNDU);
        } else {
            mpfr_sqr(r.hi_mut(), a.hi(), MPFR_RNDU);
        }
    }
    return r;
}

Ivl sqrt(const Ivl& a)
{
    if (mpfr_sgn(a.lo()) < 0) throw EnclosureError("sqrt of an interval touching negative values");
    Ivl r;
    mpfr_sqrt(r.lo_mut(), a.lo(), MPFR_RNDD);
    mpfr_sqrt(r.hi_mut(), a.hi(), MPFR_RNDU);
    return r;
}

Ivl exp(const Ivl& a)
{
    Ivl r;
    mpfr_exp(r.lo_mut(), a.lo(), MPFR_RNDD);
    mpfr_exp(r.hi_mut(), a.hi(), MPFR_RNDU);
    return r;
}

Ivl log(const Ivl& a)
{
    if (mpfr_sgn(a.lo()) <= 0) throw EnclosureError("log of a non-positive interval");
    Ivl r;
    mpfr_log(r.lo_mut(), a.lo(), MPFR_RNDD);
    mpfr_log(r.hi_mut(), a.hi(), MPFR_RNDU);
    return r;
}

Ivl pow(const Ivl& a, int k)
{
    if (k < 0) return Ivl(1) / pow(a, -k);
    if (k == 0) return Ivl(1);
    Ivl r;
    if (mpfr_sgn(a.lo()) >= 0) {
        mpfr_pow_ui(r.lo_mut(), a.lo(), static_cast<unsigned long>(k), MPFR_RNDD);
        mpfr_pow_ui(r.hi_mut(), a.hi(), static_cast<unsigned long>(k), MPFR_RNDU);
        return r;
    }
    if (k % 2 == 1) {
        mpfr_pow_ui(r.lo_mut(), a.lo(), static_cast<unsigned long>(k), MPFR_RNDD);
        mpfr_pow_ui(r.hi_mut(), a.hi(), static_cast<unsigned long>(k), MPFR_RNDU);
        return r;
    }
    const Ivl m = abs(a);
    mpfr_pow_ui(r.lo_mut(), m.lo(), static_cast<unsigned long>(k), MPFR_RNDD);
    mpfr_pow_ui(r.hi_mut(), m.hi(), static_cast<unsigned long>(k), MPFR_RNDU);
    return r;
}

Ivl root4(const Ivl& a) { return sqrt(sqrt(a)); }

Ivl abs(const Ivl& a)
{
    if (mpfr_sgn(a.lo()) >= 0) return a;
    if (mpfr_sgn(a.hi()) <= 0) return -a;
    Ivl r;
    mpfr_set_zero(r.lo_mut(), 1);
    if (mpfr_cmpabs(a.lo(), a.hi()) > 0) {
        mpfr_neg(r.hi_mut(), a.lo(), MPFR_RNDU);
    } else {
        mpfr_set(r.hi_mut(), a.hi(), MPFR_RNDU);
    }
    return r;
}

Ivl max(const Ivl& a, const Ivl& b)
{
    Ivl r;
    mpfr_max(r.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_max(r.hi_mut(), a.hi(), b.hi(), MPFR_RNDU);
    return r;
}

Ivl min(const Ivl& a, const Ivl& b)
{
    Ivl r;
    mpfr_min(r.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_min(r.hi_mut(), a.hi(), b.hi(), MPFR_RNDU);
    return r;
}

Ivl hull(const Ivl& a, const Ivl& b)
{
    Ivl r;
    mpfr_min(r.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_max(r.hi_mut(), a.hi(), b.hi(), MPFR_RNDU);
    return r;
}

std::optional<Ivl> intersect(const Ivl& a, const Ivl& b)
{
    Ivl r;
    mpfr_max(r.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_min(r.hi_mut(), a.hi(), b.hi(), MPFR_RNDU);
    if (mpfr_greater_p(r.lo(), r.hi())) return std::nullopt;
    return r;
}

Ivl round_to(const Ivl& a, long bits)
{
    PrecisionGuard g(bits);
    Ivl r;
    mpfr_set(r.lo_mut(), a.lo(), MPFR_RNDD);
    mpfr_set(r.hi_mut(), a.hi(), MPFR_RNDU);
    return r;
}

Ivl symmetric(double r)
{
    if (!(r >= 0)) throw std::invalid_argument("symmetric interval needs r >= 0");
    return Ivl(-r, r);
}

Ivl symmetric(const Ivl& r)
{
    Ivl m = abs(r);
    Ivl out;
    mpfr_set(out.hi_mut(), m.hi(), MPFR_RNDU);
    mpfr_neg(out.lo_mut(), out.hi(), MPFR_RNDD);
    return out;
}

bool relatively_below(const Ivl& err, const Ivl& ref, long bits)
{
    if (ref.contains_zero()) return false;
    const Ivl e = abs(err);
    const Ivl r = abs(ref);
    MpfrTmp t(r.prec());
    mpfr_mul_2si(t.v, r.lo(), -bits, MPFR_RNDD);
    return mpfr_cmp(e.hi(), t.v) <= 0;
}

Ivl inflate(const Ivl& a, double rel)
{
    Ivl r = a;
    MpfrTmp t(g_bits);
    mpfr_sub(t.v, a.hi(), a.lo(), MPFR_RNDU);
    mpfr_mul_d(t.v, t.v, rel, MPFR_RNDU);
    mpfr_sub(r.lo_mut(), a.lo(), t.v, MPFR_RNDD);
    mpfr_add(r.hi_mut(), a.hi(), t.v, MPFR_RNDU);
    return r;
}

bool certainly_lt(const Ivl& a, const Ivl& b) { return mpfr_less_p(a.hi(), b.lo()) != 0; }
bool certainly_le(const Ivl& a, const Ivl& b) { return mpfr_lessequal_p(a.hi(), b.lo()) != 0; }
bool certainly_gt(const Ivl& a, const Ivl& b) { return certainly_lt(b, a); }
bool certainly_ge(const Ivl& a, const Ivl& b) { return certainly_le(b, a); }

long min_precision(const std::vector<Ivl>& v)
{
    if (v.empty()) return working_bits();
    long p = v.front().prec();
    for (const Ivl& x : v) p = std::min({p, static_cast<long>(mpfr_get_prec(x.lo())), static_cast<long>(mpfr_get_prec(x.hi()))});
    return p;
}

}  // namespace fc

#pragma once

#include <mpfr.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fc {

struct PrecisionContext {
    long bits = 256;
};

// Working precision of the calling thread.
long working_bits();

class PrecisionGuard {
public:
    explicit PrecisionGuard(long bits);
    explicit PrecisionGuard(const PrecisionContext& ctx) : PrecisionGuard(ctx.bits) {}
    ~PrecisionGuard();
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    long saved_;
};

class EnclosureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PrecisionExhausted : public std::runtime_error {
public:
    PrecisionExhausted(const std::string& what, long last_valid)
        : std::runtime_error(what), last_valid_index(last_valid) {}
    long last_valid_index;
};

// Closed interval [lo, hi] with MPFR endpoints, rounded outward at the
// working precision of the thread that produced it.
class Ivl {
public:
    Ivl();
    Ivl(double v);  // NOLINT(google-explicit-constructor)
    Ivl(int v);     // NOLINT(google-explicit-constructor)
    Ivl(long v);    // NOLINT(google-explicit-constructor)
    Ivl(double lo, double hi);
    Ivl(mpfr_srcptr lo, mpfr_srcptr hi);
    explicit Ivl(mpfr_srcptr point);

    Ivl(const Ivl& o);
    Ivl(Ivl&& o) noexcept;
    Ivl& operator=(const Ivl& o);
    Ivl& operator=(Ivl&& o) noexcept;
    ~Ivl();

    // Accepts "x", "[lo, hi]" or "lo hi" in decimal; rounds outward.
    static Ivl parse(const std::string& s);
    static Ivl parse(const std::string& lo, const std::string& hi);
    static Ivl rational(long p, long q);
    static Ivl pi();
    static Ivl ln2();

    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }
    mpfr_ptr lo_mut() { return lo_; }
    mpfr_ptr hi_mut() { return hi_; }
    long prec() const;

    double lo_d() const;
    double hi_d() const;
    double mid_d() const;
    // Upper bound of max(|lo|, |hi|).
    double mag_d() const;
    // Lower bound of min |x| over the interval.
    double mig_d() const;
    double width_d() const;
    Ivl mid() const;
    Ivl width() const;
    Ivl mag() const;

    bool contains(double x) const;
    bool contains(const Ivl& x) const;
    bool contains_zero() const;
    bool positive() const;
    bool negative() const;
    bool nonneg() const;
    bool is_point() const;

    // Decimal endpoint strings, "digits" significant digits. Reading a string back with
    // Ivl::parse at a precision not above prec() gives an interval containing this one.
    std::string lo_str(int digits = 40) const;
    std::string hi_str(int digits = 40) const;
    std::string str(int digits = 17) const;

    Ivl& operator+=(const Ivl& o);
    Ivl& operator-=(const Ivl& o);
    Ivl& operator*=(const Ivl& o);
    Ivl& operator/=(const Ivl& o);

private:
    mpfr_t lo_;
    mpfr_t hi_;
    friend void assign(Ivl& r, const Ivl& a);
};

Ivl operator-(const Ivl& a);
Ivl operator+(const Ivl& a, const Ivl& b);
Ivl operator-(const Ivl& a, const Ivl& b);
Ivl operator*(const Ivl& a, const Ivl& b);
Ivl operator/(const Ivl& a, const Ivl& b);

// In-place kernels for hot loops: r may alias an argument.
void add(Ivl& r, const Ivl& a, const Ivl& b);
void sub(Ivl& r, const Ivl& a, const Ivl& b);
void mul(Ivl& r, const Ivl& a, const Ivl& b);
void div(Ivl& r, const Ivl& a, const Ivl& b);
void assign(Ivl& r, const Ivl& a);

Ivl sqr(const Ivl& a);
Ivl sqrt(const Ivl& a);
Ivl exp(const Ivl& a);
Ivl log(const Ivl& a);
Ivl pow(const Ivl& a, int k);
Ivl root4(const Ivl& a);
Ivl abs(const Ivl& a);
Ivl max(const Ivl& a, const Ivl& b);
Ivl min(const Ivl& a, const Ivl& b);
Ivl hull(const Ivl& a, const Ivl& b);
std::optional<Ivl> intersect(const Ivl& a, const Ivl& b);
// Outward rounding to a (usually lower) precision.
Ivl round_to(const Ivl& a, long bits);
// [-r, r] for r >= 0.
Ivl symmetric(double r);
// [-m, m] with m = max |x| over r.
Ivl symmetric(const Ivl& r);
// True if mag(err) <= 2^{-bits} min |ref|, checked in MPFR.
bool relatively_below(const Ivl& err, const Ivl& ref, long bits);
Ivl inflate(const Ivl& a, double rel);

// Smallest endpoint precision in v (the safe precision for re-reading serialized values).
long min_precision(const std::vector<Ivl>& v);

// Rigorous order predicates: true only if the relation holds for every pair.

bool certainly_lt(const Ivl& a, const Ivl& b);
bool certainly_le(const Ivl& a, const Ivl& b);
bool certainly_gt(const Ivl& a, const Ivl& b);
bool certainly_ge(const Ivl& a, const Ivl& b);

}  // namespace fc

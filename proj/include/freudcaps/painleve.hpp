#pragma once

#include "freudcaps/ivl.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace fc {

// A real constant that can be re-evaluated at the current working precision.
using RealFn = std::function<Ivl()>;
RealFn decimal_real(const std::string& text);
// sqrt(num / den) * x
RealFn scaled_real(RealFn x, long num, long den);

struct PainleveParams {
    RealFn kappa;
    Ivl c_minus;
    Ivl c_plus;

    static PainleveParams from_strings(const std::string& kappa, const std::string& c_minus, const std::string& c_plus);
    Ivl kappa_value() const { return kappa(); }
    // Throws std::invalid_argument unless 0 < c_minus < 1 < c_plus and kappa > 0.
    void validate() const;
};

struct BnEnclosure {
    std::vector<Ivl> b;  // b[n] for 0 <= n <= N2, with b[0] = 0
    std::vector<Ivl> lower;  // epsilon-inflation bounds b^-_n, 1 <= n <= N2 + 1
    std::vector<Ivl> upper;  // b^+_n
    Ivl c_minus;
    Ivl c_plus;
    Ivl b1;
    long N1 = 0;
    long N2 = 0;
    long N = 0;
    long forward_bits = 0;
    int inflation_sweeps = 0;
};

// sqrt(n) f((b_prev + b_next - kappa) / (2 sqrt n)) with f(g) = -g + sqrt(1 + g^2).
Ivl s_map(const Ivl& b_prev, const Ivl& b_next, long n, const Ivl& kappa);

// Envelope c sqrt(n / 3).
Ivl envelope(const Ivl& c, long n);

struct AsymptoticResiduals {
    Ivl bound1;  // must be >= 0
    Ivl bound2;  // must be <= 0
    Ivl x_plus;  // c+ (sqrt(1 - 1/N1) + sqrt(1 + 1/N1)) - sqrt(3) kappa / sqrt(N1), must be >= 0
    Ivl y_minus; // same with c-, must be >= -2 c-
};

AsymptoticResiduals asymptotic_residuals(const Ivl& kappa, const Ivl& c_minus, const Ivl& c_plus, long N1);
bool verify_asymptotic_threshold(const PainleveParams& params, long N1);

// Smallest N2 such that the envelope sandwich holds for every N2 < n <= N1.
long find_N2(const PainleveParams& params, long N1);

struct InflationResult {
    std::vector<Ivl> lower;  // indices 0..N2+1, lower[0] = 0
    std::vector<Ivl> upper;
    int sweeps = 0;
};

// Widens the envelope for n <= N2 until 0 <= b^- <= S b^+ <= S b^- <= b^+ holds for
// all n >= 1, then re-verifies every inequality for 1 <= n <= N2 + 1.
InflationResult epsilon_inflate(const PainleveParams& params, long N2, const Ivl& b1);

// Rigorous b_1 = int x^2 dnu from the weighted integral enclosure (subdivision route).
Ivl b1_by_quadrature(const Ivl& kappa);
// Rigorous b_1 from the moment series; cheap at any precision.
Ivl b1_by_moments(const Ivl& kappa);

// Interval forward recursion b_{n+1} = n / b_n - b_n - b_{n-1} + kappa at the current
// precision, stopping early (returned vector shorter) if an iterate loses positivity.
std::vector<Ivl> forward_bn(const Ivl& kappa, const Ivl& b1, long count);

struct ForwardOptions {
    long start_bits = 1024;
    long max_bits = 1L << 18;
    long store_bits = 256;  // stored iterates are rounded outward to this precision
};

// Forward recursion with precision doubling until every iterate 1..count has relative
// width below 2^{-(store_bits - 8)}. Throws PrecisionExhausted with the last index that met
// the target at max_bits.
std::vector<Ivl> forward_bn_escalating(const RealFn& kappa, long count, const ForwardOptions& opt, long* bits_used = nullptr);

// 1 + the largest n <= N2 whose enclosure is not certainly inside the envelope.
long find_N(const PainleveParams& params, const std::vector<Ivl>& b, long N2);

struct PainleveOptions {
    long N1 = 9000000;
    ForwardOptions forward;
};

// Steps: asymptotic threshold, N2 loop, epsilon-inflation, forward recursion, N.
BnEnclosure certify_painleve(const PainleveParams& params, const PainleveOptions& opt);

// Text format: a JSON header line, then "b", "lower" and "upper" sections of "n lo hi" records.
void save_enclosure(std::ostream& os, const BnEnclosure& enc, const std::string& kappa_text);
BnEnclosure load_enclosure(std::istream& is);

// certify_painleve with an on-disk cache keyed by the parameter strings, N1 and the store precision.
BnEnclosure cached_painleve(const std::string& cache_dir, const std::string& kappa, const std::string& c_minus,
                            const std::string& c_plus, const PainleveOptions& opt);

}  // namespace fc

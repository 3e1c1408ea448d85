#pragma once

#include "freudcaps/banded.hpp"
#include "freudcaps/freud.hpp"
#include "freudcaps/ivl.hpp"

namespace fc {

// alpha_n >= C_alpha n^{3/4} and beta_n / alpha_n <= theta for n >= N.
struct CompactnessBounds {
    Ivl C_alpha;
    Ivl theta;
    long N = 0;
    Ivl c_plus;
};

// 3^{1/4} / sqrt(c+).
Ivl alpha_growth_constant(const Ivl& c_plus);
// (c+)^2 / 3 ((1 + 1/(N-1)) (1 + 2/(N-1)))^{1/4}.
Ivl beta_ratio_constant(const Ivl& c_plus, long N);

// Closed forms above; both inequalities are re-checked on every available index N <= n <= length - 2.
CompactnessBounds compactness_constants(const FreudCoeffs& coeffs, long N, const Ivl& c_plus);

struct EmbeddingConstants {
    Ivl C_alpha;
    Ivl theta;
    Ivl C12;
    Ivl C22;
    Ivl C;
    int n_split = 0;  // last index of the finite block
    Parity parity = Parity::Even;
};

// Last index of the finite block of the given parity: the first index >= n_split of that parity.
int split_index(int n_split, Parity parity);

// Finite block of P on one parity, indices parity, parity + 2, ..., s. With drop_leading on the
// even block the constant mode is removed, which leaves the finite part of D_0.
BandedUpperIvl parity_block(const FreudCoeffs& coeffs, int s, Parity parity, bool drop_leading = false);

// C12 = beta_s |(Pbar^{-1})_{:,-1}| / (C_alpha sqrt(1 - theta^2)), C22 = 1 / (C_alpha (1 - theta)).
EmbeddingConstants tail_constants(const FreudCoeffs& coeffs, int n_split, const CompactnessBounds& cb, Parity parity);
// Maximum of C over both parity blocks.
EmbeddingConstants compactness_constant(const FreudCoeffs& coeffs, int n_split, const CompactnessBounds& cb);

struct PoincareResult {
    Ivl lower;  // enclosure of |Dbar_0^{-1}|^2, maximized over parities
    Ivl upper;  // upper bound of C_P
    int n = 0;
    Ivl lower_even;
    Ivl lower_odd;

    Ivl enclosure() const;  // [lower.lo, upper.hi]
};

// Enclosure of |Dbar_0^{-1}|^2 for the block of the given parity truncated at index n (any n).
Ivl poincare_block_lower(const FreudCoeffs& coeffs, int n, Parity parity);
// Maximum over both parity blocks.
Ivl poincare_lower(const FreudCoeffs& coeffs, int n);
// Lower and upper bounds of C_P; needs n >= N for the tail terms.
PoincareResult poincare_enclosure(const FreudCoeffs& coeffs, int n, const CompactnessBounds& cb);

// Spectral norm of [[a, b], [0, d]] for nonnegative a, b, d.
Ivl upper_triangular_norm(const Ivl& a, const Ivl& b, const Ivl& d);

struct FluxConstants {
    Ivl c;             // c_alpha_part + c_beta_part on the worse parity
    Ivl c_alpha_part;
    Ivl c_beta_part;
    Ivl c_even;        // bound on the even block alone
    Ivl linf_const;    // |exp(-V/2) u|_inf <= linf_const |u|_{H^1}
    Ivl h1R_const;     // |exp(-V/2) u|_{H^1(R)} <= h1R_const |u|_{H^1}
    Ivl Z;
};

// Bound c on |(-V' + d/dx) u|_{L^2} <= c |u|_{H^1}, and the sup-norm and H^1(R) constants.
FluxConstants flux_bound(const FreudCoeffs& coeffs, int n_split, const Ivl& c_minus, const CompactnessBounds& cb,
                         const Ivl& C_P_upper);

}  // namespace fc

#pragma once

#include "freudcaps/banded.hpp"
#include "freudcaps/ivl.hpp"
#include "freudcaps/painleve.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace fc {

// Recurrence data of the Freud weight exp(-x^4/4 + kappa x^2/2).
// b, a: indices 0..length; alpha: 1..length; beta: 1..length-2 (index 0 holds 0).
struct FreudCoeffs {
    Ivl kappa;
    int length = 0;
    std::vector<Ivl> b;
    std::vector<Ivl> a;
    std::vector<Ivl> alpha;
    std::vector<Ivl> beta;
};

// Builds the coefficients from b_0 = 0, b_1, ..., b_length.
FreudCoeffs coeffs_from_bn(const std::vector<Ivl>& b, const Ivl& kappa, int length);
// As above, additionally checking the envelope c- sqrt(n/3) <= b_n <= c+ sqrt(n/3) for N <= n <= length.
FreudCoeffs coeffs_from_enclosure(const BnEnclosure& enc, const Ivl& kappa, int length);

// p_n(x) by the forward three-term recurrence x p_k = a_{k+1} p_{k+1} + a_k p_{k-1}.
Ivl eval_pn(const FreudCoeffs& c, int n, const Ivl& x);
// p_0(x), ..., p_n(x).
std::vector<Ivl> eval_p_all(const FreudCoeffs& c, int n, const Ivl& x);

// Differentiation matrix in the basis (p_n): D(k, k+1) = alpha_{k+1}, D(k, k+3) = beta_{k+1}.
BandedUpperIvl build_D(const FreudCoeffs& c, int dim);
// Change of basis P: P(0,0) = 1, P(i,i) = alpha_i, P(i,i+2) = beta_i for i >= 1.
BandedUpperIvl build_P(const FreudCoeffs& c, int dim);
// Tridiagonal Jacobi matrix of multiplication by x, as a dense dim x dim interval matrix.
DenseIvlMatrix jacobi_matrix(const FreudCoeffs& c, int dim);

enum class Basis { P, Q };
enum class Parity { Even, Odd, Mixed };

// Coefficient vector of a function in the basis (p_n) or (q_n).
struct CoeffVec {
    Basis basis = Basis::P;
    Parity parity = Parity::Mixed;
    std::vector<Ivl> entries;

    int dim() const { return static_cast<int>(entries.size()); }
    Ivl norm() const { return norm2(entries); }
    // Checks that entries of the opposite parity are exactly zero.
    bool parity_consistent() const;
};

// P^{-1} v: coefficients in (p_n) of a function given in (q_n).
CoeffVec q_to_p(const FreudCoeffs& c, const CoeffVec& v);
// P v: coefficients in (q_n) of a function given in (p_n).
CoeffVec p_to_q(const FreudCoeffs& c, const CoeffVec& v);

struct Rational {
    long num = 0;
    long den = 1;
};

// Homogeneous polynomial in b_{n-j}, ..., b_{n+j}; key = exponent vector of length 2j + 1.
using Monomials = std::map<std::vector<int>, long>;

// For V(x) = sum_{j=1}^k c_j x^{2j} / (2j): n / b_n = sum_{j=1}^k c_j R_{j-1}(b_{n-j+1}, ..., b_{n+j-1}),
// where R_j is homogeneous of degree j in 2j + 1 variables with positive integer coefficients.
struct GeneralRecurrence {
    int k = 0;
    std::vector<Rational> c;   // c_1..c_k stored at indices 0..k-1
    std::vector<Monomials> R;  // R_0..R_{k-1}

    // R_j evaluated at b_{n-j}, ..., b_{n+j}.
    Ivl eval_R(int j, const std::vector<Ivl>& b, int n) const;
    // n / b_n - sum c_j R_{j-1}.
    Ivl residual(const std::vector<Ivl>& b, int n) const;
};

// v = monomial coefficients of V (v[i] multiplies x^i); V must be even with positive leading term.
GeneralRecurrence derive_general_recurrence(const std::vector<Rational>& v);

// Coefficient files: one "n lo hi" record per line, decimal scientific notation.
void write_coefficients(std::ostream& os, const std::vector<Ivl>& values, int first_index = 0, int digits = 80);
std::vector<Ivl> read_coefficients(std::istream& is);

}  // namespace fc

#pragma once

#include "freudcaps/embed.hpp"
#include "freudcaps/freud.hpp"
#include "freudcaps/ivl.hpp"
#include "freudcaps/midrad.hpp"
#include "freudcaps/quad.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace fc {

// -phi'' + W phi + phi^3 = omega phi with W = x^6/4 - kappa x^4/2 + c x^2 + d.
struct GPParams {
    Rational kappa{4, 1};
    Rational c{5, 2};
    Rational d{2, 1};
    Rational omega{8, 1};

    Ivl kappa_ivl() const;
    Ivl c_ivl() const;
    Ivl d_ivl() const;
    Ivl omega_ivl() const;
};

// 6 + 4c - kappa^2 = 0 and 2d - kappa = 0, checked in exact integer arithmetic.
bool check_params(const GPParams& params);
Rational parse_rational(const std::string& text);
std::string rational_str(const Rational& r);

// Everything the proof needs besides the approximate solution, on the even block 0..n.
struct GPSetup {
    GPParams params;
    int n = 0;
    int K = 0;  // number of even modes, n / 2 + 1
    FreudCoeffs coeffs;
    BandedUpperIvl pbar;     // even block of P, indices 0, 2, ..., n
    MidRadMatrix pinv;       // Pbar^{-1}
    MidRadMatrix m4;         // pseudo-Vandermonde for exp(-2V), even p_j up to n
    MidRadMatrix m6;         // pseudo-Vandermonde for exp(-3V)
    QuadratureRule rule4;
    QuadratureRule rule6;
    EmbeddingConstants tail; // even block split at n
    FluxConstants flux;
    Ivl C_P;                 // upper bound of the Poincare constant
    Ivl linf_const;
    Ivl h1R_const;
};

struct GPSetupOptions {
    std::string cache_dir;
    std::string kappa_text = "4";
    int node_margin = 16;
};

// n must be even and at least cb.N. flux and C_P come from the embed module.
GPSetup prepare_gp(const GPParams& params, const FreudCoeffs& coeffs, const CompactnessBounds& cb,
                   const FluxConstants& flux, const Ivl& C_P_upper, int n, const GPSetupOptions& opt);

struct ApproxSolution {
    CoeffVec ubar;  // Q basis, even, dim n + 1
    int n = 0;
    Ivl residual_norm;  // |Pi_n F(ubar)| in H^1, rigorous
    int iterations = 0;
};

class NewtonStagnation : public std::runtime_error {
public:
    NewtonStagnation(const std::string& what, double last) : std::runtime_error(what), last_residual(last) {}
    double last_residual;
};

// Seeds in the Q basis: gamma * q_0 for the positive branch, and the second even eigenfunction
// of the linear operator scaled to balance the cubic term for the sign-changing branch.
CoeffVec bump_seed(const GPSetup& setup);
CoeffVec signed_seed(const GPSetup& setup);

ApproxSolution newton_solve(const GPSetup& setup, const CoeffVec& seed, double tol = 1e-13, int max_iter = 60);

// Pi_n F(ubar) and the quantities it is built from, streamed over the quadrature nodes in MPFR.
struct NonlinearEval {
    std::vector<Ivl> c;  // Pbar^{-1} v
    std::vector<Ivl> g;  // <p_j, exp(-V) ubar^3>
    std::vector<Ivl> f;  // omega c + c_0 e_0 - g
    std::vector<Ivl> F;  // v - Pbar^{-T} f
    Ivl S6;              // |exp(-V) ubar^3|^2, only when requested
};

NonlinearEval evaluate_F(const GPSetup& setup, const std::vector<double>& v, bool with_S6);

struct GPOperators {
    std::vector<double> v;   // even H^1 coordinates of ubar
    NonlinearEval nl;
    MidRadMatrix c;          // even L^2 coordinates Pbar^{-1} v, K x 1
    MidRadMatrix y6;         // m6 c
    MidRadMatrix G;          // <p_i, exp(-V) ubar^2 p_j>
    MidRadMatrix Df;         // omega I + e0 e0^T - 3 G
    MidRadMatrix DF;         // I - Pbar^{-T} Df Pbar^{-1}
    MidRadMatrix An;         // numerical inverse of mid(DF), as a point matrix
};

GPOperators assemble_operators(const GPSetup& setup, const CoeffVec& ubar);

struct ProofBounds {
    Ivl Y, Z11, Z12, Z21, Z22, Z1, Z2, Z3;
    Ivl An_norm;
};

Ivl bound_Y(const GPSetup& setup, const GPOperators& ops);
// Fills Z11, Z12, Z21, Z22 and Z1 of out.
void bound_Z1(const GPSetup& setup, const GPOperators& ops, ProofBounds& out);
// Fills Z2, Z3 and An_norm of out.
void bound_Z2_Z3(const GPSetup& setup, const GPOperators& ops, ProofBounds& out);
ProofBounds compute_bounds(const GPSetup& setup, const GPOperators& ops);

struct RadiiResult {
    Ivl delta_lo;  // smallest positive root of Q
    Ivl delta_hi;  // positive root of R, or the cap when R < 0 everywhere
    Ivl delta;     // certified radius with Q(delta) < 0
    bool success = false;
    bool delta_hi_capped = false;
};

inline constexpr double kRadiusCap = 1e300;

// Q(d) = Y - d + Z1 d + Z2 d^2 / 2 + Z3 d^3 / 6, R(d) = -1 + Z1 + Z2 d + Z3 d^2 / 2.
Ivl radii_Q(const ProofBounds& b, const Ivl& delta);
Ivl radii_R(const ProofBounds& b, const Ivl& delta);
RadiiResult radii(const Ivl& Y, const Ivl& Z1, const Ivl& Z2, const Ivl& Z3);

struct PositivityResult {
    bool positive = false;
    Ivl r0;          // W - omega > 0 for |x| >= r0
    Ivl sup_error;   // |phi - phibar|_inf
    Ivl lipschitz;   // bound on |phibar'|
    long evaluations = 0;
    std::string reason;
};

// phibar = exp(-V/2) ubar; proves phi > 0 on R or reports an inconclusive verdict.
PositivityResult positivity_check(const GPSetup& setup, const CoeffVec& ubar, const Ivl& delta, long budget = 200000);

// |phi* - phibar|_{H^1(R)} <= h1R_const delta.
Ivl h1R_error(const Ivl& delta, const FluxConstants& flux);

// Numerical values of phibar at a, a + step, ..., b as "x,phi" lines.
void export_profile(std::ostream& os, const GPSetup& setup, const CoeffVec& ubar, double a, double b, double step);

// Even H^1 coordinates <-> full Q-basis coefficient vector of dimension n + 1.
CoeffVec even_to_coeffvec(const std::vector<double>& v, int n);
std::vector<double> coeffvec_to_even(const CoeffVec& u, int n);

}  // namespace fc

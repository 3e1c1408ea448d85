#pragma once

#include "freudcaps/freud.hpp"
#include "freudcaps/ivl.hpp"
#include "freudcaps/midrad.hpp"
#include "freudcaps/painleve.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fc {

struct RescaledWeight {
    Ivl s;            // x = s y
    Ivl kappa_tilde;  // exp(-m V(s y) / 2) = exp(-y^4/4 + kappa_tilde y^2 / 2)
};

// s = (2/m)^{1/4}, kappa_tilde = sqrt(m/2) kappa, for m in {2, 4, 6}.
RescaledWeight rescale_weight(int m, const Ivl& kappa);

// Rigorous enclosures of p_0(x), ..., p_n(x) for x p_j = a_{j+1} p_{j+1} + a_j p_{j-1}.
// The error is carried in a rotating orthogonal frame (QR propagation), so the loss of
// accuracy follows the conditioning of the recurrence instead of growing with every step.
class RecurrenceEvaluator {
public:
    RecurrenceEvaluator() = default;
    // a[1..] are the recurrence coefficients; a[0] is ignored. Each a_j is multiplied by scale.
    explicit RecurrenceEvaluator(const std::vector<Ivl>& a, const Ivl& scale = Ivl(1));

    int max_degree() const { return static_cast<int>(inv_next_.size()); }
    // Enclosures of p_0(x), ..., p_n(x) at the working precision.
    std::vector<Ivl> values(const Ivl& x, int n) const;
    // Approximate p_n(x) and p_n'(x) in plain MPFR arithmetic (for Newton steps).
    void value_and_derivative(mpfr_srcptr x, int n, mpfr_ptr p, mpfr_ptr dp) const;

private:
    std::vector<Ivl> inv_next_;  // 1 / a_{j+1}
    std::vector<Ivl> ratio_;     // a_j / a_{j+1}
};

struct QuadratureRule {
    int m = 4;
    Ivl kappa;
    int N_nodes = 0;  // total number of nodes, even
    long bits = 0;
    Ivl s;
    Ivl kappa_tilde;
    std::vector<Ivl> a_tilde;  // recurrence coefficients of the weight in the y variable, 0..N_nodes
    std::vector<Ivl> nodes;    // positive nodes in the x variable, increasing
    std::vector<Ivl> weights;  // weight of each of +x_i and -x_i for the probability measure
    Ivl z_ratio;               // int exp(-m V / 2) dx / int exp(-V) dx

    int half() const { return static_cast<int>(nodes.size()); }
};

// Gauss rule with N_nodes nodes for exp(-m V / 2). N_nodes must be even.
QuadratureRule freud_gauss_rule(int m, const RealFn& kappa, int N_nodes);
// Smallest even N with 2N - 1 >= degree, plus margin.
int nodes_for_degree(int degree, int margin = 16);

// Maximum of |rule(p~_i p~_j) - delta_ij| over 0 <= i, j <= n, as an interval upper bound.
Ivl orthonormality_defect(const QuadratureRule& rule, int n);

// (1/Z) int prod_k f_k exp(-m V / 2) dx for P-basis coefficient vectors f_k of the weight exp(-V).
Ivl integrate_product(const QuadratureRule& rule, const FreudCoeffs& coeffs, const std::vector<CoeffVec>& polys);

// Rows: positive nodes; columns: p_j for j = parity, parity + 2, ..., <= n.
// Entry (i, k) = (2 W_i Z~/Z)^{1/m} p_j(x_i), so that M^T Diag(...) M reproduces integrals.
MidRadMatrix vandermonde_bar(const QuadratureRule& rule, const FreudCoeffs& coeffs, int n, int parity);

// G = Mbar^T Diag(Mbar c)^2 Mbar for the m = 4 rule: G_ij = <p_i, exp(-V) u^2 p_j>.
MidRadMatrix build_nonlinearity(const MidRadMatrix& mbar, const std::vector<double>& c_mid, const std::vector<double>& c_rad);

void save_rule(std::ostream& os, const QuadratureRule& rule);
QuadratureRule load_rule(std::istream& is);
// Loads the rule from cache_dir if present with matching parameters, otherwise builds and stores it.
QuadratureRule cached_rule(const std::string& cache_dir, int m, const std::string& kappa_text, int N_nodes);

}  // namespace fc

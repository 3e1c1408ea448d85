#pragma once

#include "freudcaps/ivl.hpp"

#include <Eigen/Dense>

#include <vector>

namespace fc {

// Switches the FPU to upward rounding for the lifetime of the object.
class RoundUpward {
public:
    RoundUpward();
    ~RoundUpward();
    RoundUpward(const RoundUpward&) = delete;
    RoundUpward& operator=(const RoundUpward&) = delete;

private:
    int saved_;
};

// Magnitudes below this threshold are folded into the radius so that the
// double kernels never touch subnormal numbers.
inline constexpr double kTiny = 1e-150;

// Dense interval matrix in midpoint-radius form with double components.
// Entry (i, j) encloses [mid - rad, mid + rad].
class MidRadMatrix {
public:
    MidRadMatrix() = default;
    MidRadMatrix(int rows, int cols);

    static MidRadMatrix identity(int n);
    static MidRadMatrix point(const Eigen::MatrixXd& m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& mid(int i, int j) { return mid_[idx(i, j)]; }
    double mid(int i, int j) const { return mid_[idx(i, j)]; }
    double& rad(int i, int j) { return rad_[idx(i, j)]; }
    double rad(int i, int j) const { return rad_[idx(i, j)]; }
    const std::vector<double>& mids() const { return mid_; }
    const std::vector<double>& rads() const { return rad_; }
    std::vector<double>& mids() { return mid_; }
    std::vector<double>& rads() { return rad_; }

    void set(int i, int j, const Ivl& v);
    Ivl get(int i, int j) const;
    // Upper bound of |entry|.
    double mag(int i, int j) const;

    bool is_point() const;
    MidRadMatrix transpose() const;
    Eigen::MatrixXd mid_matrix() const;
    void sanitize();

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * cols_ + j; }
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> mid_;
    std::vector<double> rad_;
};

// Enclosure of the product of every pair of member matrices.
MidRadMatrix multiply(const MidRadMatrix& a, const MidRadMatrix& b);
MidRadMatrix add(const MidRadMatrix& a, const MidRadMatrix& b);
MidRadMatrix subtract(const MidRadMatrix& a, const MidRadMatrix& b);
MidRadMatrix scale(const MidRadMatrix& a, const Ivl& s);
// Left multiplication by a diagonal interval matrix.
MidRadMatrix scale_rows(const MidRadMatrix& a, const std::vector<Ivl>& d);

double norm1_upper(const MidRadMatrix& a);
double norminf_upper(const MidRadMatrix& a);
// Upper bound of the Frobenius norm.
double frobenius_upper(const MidRadMatrix& a);
Ivl l2_norm_upper(const MidRadMatrix& a);
Ivl gershgorin_spectrum_bound(const MidRadMatrix& a);
MidRadMatrix certified_inverse(const MidRadMatrix& a);

// Upper bound of |A x| for an interval vector x given as (mid, rad).
std::vector<double> matvec_mag(const MidRadMatrix& a, const std::vector<double>& xm, const std::vector<double>& xr);

struct SymmetricTopEigen {
    Ivl upper;                 // hi bounds every eigenvalue of every member
    Eigen::VectorXd vector;    // numerical eigenvector of the largest eigenvalue
    double numeric_value = 0;  // numerical largest eigenvalue
};

// Certified upper bound for the spectrum of a symmetric interval matrix via a
// numerical diagonalization Q, a certified Q^{-1} and Gershgorin on Q^{-1} M Q.
SymmetricTopEigen symmetric_top_eigen(const MidRadMatrix& m);

// Upper bound of the spectral norm via the largest eigenvalue of A^T A.
Ivl spectral_norm_upper(const MidRadMatrix& a);

}  // namespace fc

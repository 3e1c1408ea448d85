#pragma once

#include "freudcaps/ivl.hpp"
#include "freudcaps/midrad.hpp"

#include <vector>

namespace fc {

// The dense interval matrix type of the library is the mid-rad matrix.
using DenseIvlMatrix = MidRadMatrix;

// Upper-triangular banded interval matrix; entries outside the band are zero.
// band(d, i) holds A(i, i + d) for 0 <= d <= bandwidth.
class BandedUpperIvl {
public:
    BandedUpperIvl() = default;
    BandedUpperIvl(int dim, int bandwidth);

    int dim() const { return dim_; }
    int bandwidth() const { return bw_; }

    Ivl& band(int d, int i) { return diags_[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)]; }
    const Ivl& band(int d, int i) const { return diags_[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)]; }
    Ivl entry(int i, int j) const;

    // Solves A x = b by back substitution.
    std::vector<Ivl> solve(const std::vector<Ivl>& b) const;
    // Solves A^T x = b by forward substitution.
    std::vector<Ivl> solve_transpose(const std::vector<Ivl>& b) const;
    std::vector<Ivl> apply(const std::vector<Ivl>& x) const;
    std::vector<Ivl> apply_transpose(const std::vector<Ivl>& x) const;

    // Top-left n x n block.
    BandedUpperIvl leading(int n) const;
    // Rows and columns with index = parity (mod 2); odd offsets must vanish.
    BandedUpperIvl restrict_parity(int parity) const;

    DenseIvlMatrix to_dense() const;
    // Column-by-column back substitution, streamed into mid-rad form.
    DenseIvlMatrix inverse_dense() const;
    // Column j of A^{-1}.
    std::vector<Ivl> inverse_column(int j) const;

private:
    int dim_ = 0;
    int bw_ = 0;
    std::vector<std::vector<Ivl>> diags_;
};

std::vector<Ivl> unit_vector(int dim, int k);
// Upper bound of the Euclidean norm of an interval vector.
Ivl norm2(const std::vector<Ivl>& v);
Ivl dot(const std::vector<Ivl>& a, const std::vector<Ivl>& b);

}  // namespace fc

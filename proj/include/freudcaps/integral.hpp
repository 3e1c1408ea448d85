#pragma once

#include "freudcaps/ivl.hpp"

#include <limits>
#include <vector>

namespace fc {

// Encloses the integral over the real line of poly(x) exp(-(m/2)(x^4/4 - kappa x^2/2)),
// poly given by its monomial coefficients. The half line [0, X] is split into
// subintervals carrying a Taylor model with a Cauchy remainder; |x| > X is
// dominated by a Gaussian. Throws EnclosureError when the enclosure is wider than
// max_width.
Ivl enclose_weighted_integral(const std::vector<Ivl>& poly, const Ivl& kappa, const Ivl& m,
                              double max_width = std::numeric_limits<double>::infinity());

// Integral over the real line of x^{2p} exp(-(m/2)(x^4/4 - kappa x^2/2)) by the
// power series in kappa with a geometric tail bound.
Ivl weighted_even_moment(int p, const Ivl& kappa, const Ivl& m);

// Arithmetic-geometric mean of positive a, b.
Ivl agm(const Ivl& a, const Ivl& b);
// Gamma(1/4) from Gamma(1/4)^2 = (2 pi)^{3/2} / AGM(1, sqrt 2).
Ivl gamma_quarter();

}  // namespace fc

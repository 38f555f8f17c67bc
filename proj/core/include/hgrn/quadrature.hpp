#pragma once

#include <cstddef>
#include <vector>

namespace hgrn {

struct QuadratureRule
{
    std::vector<double> nodes;   //!< on [-1, 1]
    std::vector<double> weights;
};

//! Gauss-Legendre rule with `points` nodes (cached for repeated calls).
const QuadratureRule& gauss_legendre(std::size_t points);

/*!
 * Gauss-Jacobi rule for the weight (1 - t)^alpha (1 + t)^beta on [-1, 1],
 * alpha, beta > -1, computed by Golub-Welsch.
 */
QuadratureRule gauss_jacobi(std::size_t points, double alpha, double beta);

//! Integral of y^p over [lo, hi], 0 <= lo <= hi; lo == 0 requires p > -1.
//! Stable when p is close to -1.
double power_integral(double lo, double hi, double p);

} // namespace hgrn

#pragma once

#include <cstddef>

#include "hgrn/grid.hpp"
#include "hgrn/model.hpp"

namespace hgrn {

enum class EquilibriumMethod
{
    automatic,   //!< closed form when both rates are constant
    closed_form, //!< incomplete Beta functions; constant rates only
    quadrature,
};

const char* to_string(EquilibriumMethod m);

/*!
 * Stationary density of the transformed system, normalized to mass 1.
 *
 * The zero-flux relation b x w1 = d (1 - x) w2 reduces the stationary system
 * to a scalar ODE for q = b x w1:
 *
 *   q(x) = C x^{nu(0)/b} (1-x)^{mu(1)/d} exp(E(x)),
 *   E(x) = int_0^x (nu(s)-nu(0))/(b s) - (mu(s)-mu(1))/(d (1-s)) ds,
 *
 * with w1 = q/(b x) and w2 = q/(d (1-x)). E is evaluated exactly for
 * piecewise-linear rates.
 */
struct EquilibriumDensity
{
    GridDensity w;
    double C = 0.0; //!< normalizing constant of q
    EquilibriumMethod method = EquilibriumMethod::closed_form;
    CanonicalModel model;

    //! Point values of the two components (not cell averages).
    double value1(double x) const;
    double value2(double x) const;
};

//! Throws QuadratureFailure when a cell integral is not finite, and
//! ParameterError when closed_form is requested for non-constant rates.
EquilibriumDensity stationary_density(const CanonicalModel& model,
                                      std::size_t n,
                                      EquilibriumMethod method = EquilibriumMethod::automatic);

//! mass(u) * w.
GridDensity project(const EquilibriumDensity& w, const GridDensity& u);

} // namespace hgrn

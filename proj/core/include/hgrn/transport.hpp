#pragma once

#include "hgrn/grid.hpp"

namespace hgrn {

//---------------------------------------------------------------------------//
/*!
 * \file transport.hpp
 *
 * The two transport semigroups on L1([0,1]) and their resolvents:
 *
 *   T1(t) f(x) = e^t f(x e^t)          for x <= e^{-t}, else 0
 *   T2(t) f(x) = e^t f(1-(1-x) e^t)    for x >= 1 - e^{-t}, else 0
 *
 *   R(l,C1) f(x)  = x^{l-1} int_x^1 f(y) y^{-l} dy
 *   R(l,C2) f(x)  = (1-x)^{l-1} int_0^x f(y) (1-y)^{-l} dy
 *   R(l,C1') g(y) = y^{-l} int_0^y g(x) x^{l-1} dx
 *   R(l,C2') g(y) = (1-y)^{-l} int_y^1 g(x) (1-x)^{l-1} dx
 *
 * T2, R(l,C2) and R(l,C2') are obtained from their C1 counterparts through
 * the reflection Q f(x) = f(1-x), which is exact on a uniform grid.
 *
 * Densities (T, R) are reconstructed piecewise linearly inside each cell;
 * dual inputs g are L-infinity functions and are taken piecewise constant.
 * All kernel integrals against the reconstruction are evaluated in closed
 * form, or by Gauss quadrature where the integrand is smooth.
 */
//---------------------------------------------------------------------------//

ScalarField reflect(const ScalarField& f);

//! Pushforward of f under x -> x e^{-t}. Throws NegativeTime.
ScalarField apply_T1(double t, const ScalarField& f);
//! Pushforward of f under x -> 1 - (1 - x) e^{-t}. Throws NegativeTime.
ScalarField apply_T2(double t, const ScalarField& f);

//! Cell averages of R(lambda, C1) f. Throws NonpositiveLambda.
ScalarField resolvent_C1(double lambda, const ScalarField& f);
ScalarField resolvent_C2(double lambda, const ScalarField& f);

//! Cell averages of R(lambda, C1') g for piecewise-constant g.
ScalarField dual_resolvent_C1(double lambda, const ScalarField& g);
ScalarField dual_resolvent_C2(double lambda, const ScalarField& g);

//! Point values of the dual resolvents for piecewise-constant g.
double dual_resolvent_C1_at(double lambda, const ScalarField& g, double y);
double dual_resolvent_C2_at(double lambda, const ScalarField& g, double y);

} // namespace hgrn

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hgrn/equilibrium.hpp"
#include "hgrn/evolve.hpp"
#include "hgrn/grid.hpp"
#include "hgrn/model.hpp"

namespace hgrn {

//---------------------------------------------------------------------------//
// Parameters of the comparison semigroup
//---------------------------------------------------------------------------//

struct EpsilonGammaLambda
{
    double epsilon = 0.0;
    double gamma = 0.0;
    double lambda0 = 0.0;
};

/*!
 * gamma = 1.1 max(|nu|, |mu|), epsilon = 0.5 min(gamma - max, min nu, min mu),
 * lambda0 = 1.1 max(gamma, 2 epsilon, b, d).
 */
EpsilonGammaLambda choose_parameters(const CanonicalModel& model);

struct ParameterChecks
{
    bool epsilon_below_rates = false;  //!< epsilon < min(nu, mu)
    bool epsilon_below_gap = false;    //!< epsilon < gamma - max(|nu|, |mu|)
    bool lambda0_dominates = false;    //!< lambda0 > max(gamma, 2 epsilon)
    bool perturbation_small = false;   //!< 2 epsilon / lambda0 < 1

    bool all() const { return epsilon_below_rates && epsilon_below_gap && lambda0_dominates && perturbation_small; }
};

ParameterChecks check_parameters(const CanonicalModel& model, const EpsilonGammaLambda& p);

//! {1, 2, 5, 10} * max(b, d); entries not above lambda0 are replaced by
//! 1.25 lambda0 (duplicates dropped).
std::vector<double> default_lambda_grid(const CanonicalModel& model);

//---------------------------------------------------------------------------//
// Positivity of the dual resolvent
//---------------------------------------------------------------------------//

struct NamedDual
{
    std::string name;
    DualGridFunction g;
};

/*!
 * Constant one, the ramp (x, 1 - x), and the indicator of the middle cell in
 * each component. The middle cell is the one reached fastest from the worst
 * starting point, so its constant decays slowest as lambda grows (roughly
 * like exp(-lambda ln 2 / min(b, d))).
 */
std::vector<NamedDual> default_g_battery(std::size_t n);

NamedDual cell_indicator(std::size_t n, int comp, std::size_t cell);

//! min over all cells of dual_apply(rm, g). Throws DomainError unless g >= 0
//! and g != 0.
double dual_positivity_check(const ResolventMatrix& rm, const DualGridFunction& g);

//! Assembles the resolvent first; throws DomainError unless lambda > lambda0.
double dual_positivity_check(const CanonicalModel& model,
                             double lambda,
                             const DualGridFunction& g,
                             const LaplaceQuadConfig& quad = {});

//! c > 1e-8 sup(g).
bool dual_positivity_passes(double c, const DualGridFunction& g);

//---------------------------------------------------------------------------//
// First Dyson-Phillips term and the kernel bound
//---------------------------------------------------------------------------//

/*!
 * U1(t) f = int_0^t T(t-s) E T(s) f ds with T = diag(T1(b .), T2(d .)) and
 * E g = epsilon (g1 + g2, g1 + g2), by composite Simpson. The panel count
 * is at least max(`panels`, 64, 4 t max(b, d) n), rounded up to even.
 */
GridDensity dyson_u1(const CanonicalModel& model, double epsilon, double t, const GridDensity& f, std::size_t panels = 64);

enum class KernelOrientation
{
    from2to1, //!< int T1(b(t-s)) T2(ds) ds, used when d <= b
    from1to2, //!< int T2(d(t-s)) T1(bs) ds, used when b < d
};

KernelOrientation kernel_orientation(const CanonicalModel& model);

//! Argument of f inside the composed transport at time s in [0, t].
double phi(const CanonicalModel& model, KernelOrientation o, double t, double x, double s);
double dphi_ds(const CanonicalModel& model, KernelOrientation o, double t, double x, double s);

//! Solves phi(x, s) = y for s in [0, t] by bisection. Throws InversionFailure.
double invert_phi(const CanonicalModel& model, KernelOrientation o, double t, double x, double y);

/*!
 * k_t(x, y) = 1 / |d phi / ds| at s(x, y) for y between phi(x, t) and
 * phi(x, 0) (clipped to [0,1]), zero elsewhere. Rows are x = cell centers,
 * columns y = cell centers.
 */
struct KernelLowerBound
{
    double t = 0.0;
    KernelOrientation orientation = KernelOrientation::from2to1;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> support_lo;
    std::vector<double> support_hi;
    Eigen::MatrixXd k;
};

KernelLowerBound phi_kernel(const CanonicalModel& model, double t, std::size_t n = 128);

//! Support [lo, hi] of k_t(x, .) within [0,1]; empty when lo >= hi.
std::pair<double, double> kernel_support(const CanonicalModel& model, KernelOrientation o, double t, double x);

//! int k_t(x, y) f(y) dy over the support.
double kernel_integral(const CanonicalModel& model,
                       KernelOrientation o,
                       double t,
                       double x,
                       const std::function<double(double)>& f);

struct PartialIntegralResult
{
    bool pass = true;
    double margin = 0.0; //!< smallest relative slack over cells where the bound is active
    double t = 0.0;
    double epsilon = 0.0;
    KernelOrientation orientation = KernelOrientation::from2to1;
    std::size_t trials = 0;
};

/*!
 * Checks U1(t) >= epsilon K_t on the relevant off-diagonal block, cell by
 * cell, for each test function: the computed U1 entry must not fall below
 * the kernel integral by more than 1e-8 ||f||_1.
 */
PartialIntegralResult partial_integral_check(const CanonicalModel& model,
                                             double epsilon,
                                             double t,
                                             const std::vector<std::function<double(double)>>& fs,
                                             std::size_t n = 128,
                                             std::size_t panels = 64);

//! Random nonnegative quartic test functions (Bernstein form) from `seed`.
PartialIntegralResult partial_integral_check(const CanonicalModel& model,
                                             double epsilon,
                                             double t,
                                             std::size_t trials,
                                             std::size_t n = 128,
                                             std::uint64_t seed = 1,
                                             std::size_t panels = 64);

std::function<double(double)> random_bernstein(std::uint64_t seed, std::size_t degree = 4);

//---------------------------------------------------------------------------//
// Operator-norm convergence to the projection
//---------------------------------------------------------------------------//

struct ConvergenceOptions
{
    double tail_fraction = 0.5; //!< fraction of the times used by the rate fit
    int order = 2;
    unsigned workers = 1;
};

struct ConvergenceReport
{
    std::vector<double> times;
    std::vector<double> norms; //!< max over unit cell masses of |S(t) e - P e|_1
    double rate = 0.0;         //!< fitted decay rate, norm ~ exp(-rate t)
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t fit_points = 0;
    std::size_t n = 0;
    double dt = 0.0;

    //! Non-increasing over the fit window, up to `slack`.
    bool monotone_tail(double slack = 1e-10) const;
};

ConvergenceReport norm_convergence(const CanonicalModel& model,
                                   const std::vector<double>& times,
                                   std::size_t n,
                                   double dt,
                                   const ConvergenceOptions& opts = {});

struct LinearFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

//! Least-squares line through (x, y).
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace hgrn

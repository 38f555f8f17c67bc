#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "hgrn/coupling.hpp"
#include "hgrn/grid.hpp"
#include "hgrn/model.hpp"

namespace hgrn {

//! Operator splitting of the generator into transport and switching.
//! order 1 is Lie (transport, then switching); order 2 is Strang.
struct SplittingConfig
{
    double dt = 1e-3;
    int order = 2;

    void validate() const; //!< throws ParameterError
};

/*!
 * One splitting step of length cfg.dt. Component 1 is transported by
 * T1(b dt) and component 2 by T2(d dt); the switching sub-step is the exact
 * cellwise matrix exponential. Mass is conserved to round-off and
 * nonnegative data stay nonnegative.
 */
GridDensity step(const CanonicalModel& model, const SplittingConfig& cfg, const GridDensity& u);

//! Same, with a precomputed switching field and explicit step length.
void step_inplace(const CanonicalModel& model,
                  const SwitchingMatrixField& field,
                  int order,
                  double dt,
                  GridDensity& u);

struct Snapshot
{
    double t = 0.0;
    GridDensity u;
};

using StepObserver = std::function<void(double t, const GridDensity& u)>;

/*!
 * Evolves u0 to `horizon`, recording the requested snapshot times (sorted,
 * within [0, horizon]; empty means {horizon}). Between consecutive snapshots
 * the step is shortened uniformly so every snapshot is hit exactly.
 * `observer`, if set, sees the state after every step.
 */
std::vector<Snapshot> evolve(const CanonicalModel& model,
                             const SplittingConfig& cfg,
                             const GridDensity& u0,
                             double horizon,
                             std::vector<double> snapshot_times = {},
                             const StepObserver& observer = {});

//---------------------------------------------------------------------------//
// Resolvent of the full generator as a dense matrix
//---------------------------------------------------------------------------//

struct LaplaceQuadConfig
{
    std::size_t n = 128;
    double dt = 1e-2;       //!< time step of both the solver and the quadrature
    double tail_tol = 1e-8; //!< horizon chosen so that e^{-lambda T} <= tail_tol
    int order = 2;
    unsigned workers = 1;
};

/*!
 * Dense approximation of R(lambda, A + B) on stacked cell values
 * (comp1 cells 0..n-1, then comp2 cells 0..n-1). Column j is the truncated
 * Laplace transform of the solution started from the j-th cell indicator;
 * between solver steps the trajectory is interpolated linearly in time and
 * integrated against e^{-lambda t} exactly.
 */
struct ResolventMatrix
{
    double lambda = 1.0;
    std::size_t n = 0;
    double horizon = 0.0;
    double dt = 0.0;
    int quad_order = 2;     //!< piecewise-linear-in-time product quadrature
    double tail_bound = 0.0; //!< e^{-lambda T} / lambda, per unit input mass
    Eigen::MatrixXd matrix;
};

ResolventMatrix assemble_resolvent(const CanonicalModel& model, double lambda, const LaplaceQuadConfig& quad = {});

GridDensity apply(const ResolventMatrix& rm, const GridDensity& f);
//! Transpose action, the dual resolvent on L-infinity functions.
DualGridFunction dual_apply(const ResolventMatrix& rm, const DualGridFunction& g);

//! Header row (lambda,n,horizon,dt,quad_order,tail_bound), its values, then
//! the matrix row-major.
void write_resolvent_csv(std::ostream& os, const ResolventMatrix& rm);

//! Stacked vector helpers.
Eigen::VectorXd stack(const GridDensity& f);
GridDensity unstack(const Eigen::VectorXd& v);

} // namespace hgrn

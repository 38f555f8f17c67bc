#include "hgrn/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "hgrn/csv.hpp"
#include "hgrn/errors.hpp"
#include "hgrn/transport.hpp"

namespace hgrn {

void SplittingConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ParameterError("dt>0");
    if (order != 1 && order != 2)
        throw ParameterError("order must be 1 (Lie) or 2 (Strang)");
}

namespace {

void transport_inplace(const CanonicalModel& model, double dt, GridDensity& u)
{
    u.comp1 = apply_T1(model.b * dt, ScalarField(std::move(u.comp1))).values;
    u.comp2 = apply_T2(model.d * dt, ScalarField(std::move(u.comp2))).values;
}

std::size_t steps_for(double span, double dt)
{
    const double k = std::ceil(span / dt - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

} // namespace

void step_inplace(const CanonicalModel& model,
                  const SwitchingMatrixField& field,
                  int order,
                  double dt,
                  GridDensity& u)
{
    if (dt < 0.0)
        throw NegativeTime(dt);
    if (dt == 0.0)
        return;
    if (order == 2)
    {
        exp_B_inplace(field, 0.5 * dt, u);
        transport_inplace(model, dt, u);
        exp_B_inplace(field, 0.5 * dt, u);
    }
    else
    {
        transport_inplace(model, dt, u);
        exp_B_inplace(field, dt, u);
    }
}

GridDensity step(const CanonicalModel& model, const SplittingConfig& cfg, const GridDensity& u)
{
    if (cfg.dt == 0.0)
        return u;
    cfg.validate();
    if (u.comp1.size() != u.comp2.size())
        throw SizeMismatch(u.comp1.size(), u.comp2.size());
    GridDensity out = u;
    step_inplace(model, SwitchingMatrixField::from_model(model, u.cells()), cfg.order, cfg.dt, out);
    return out;
}

std::vector<Snapshot> evolve(const CanonicalModel& model,
                             const SplittingConfig& cfg,
                             const GridDensity& u0,
                             double horizon,
                             std::vector<double> snapshot_times,
                             const StepObserver& observer)
{
    cfg.validate();
    if (horizon < 0.0)
        throw NegativeTime(horizon);
    if (u0.comp1.size() != u0.comp2.size())
        throw SizeMismatch(u0.comp1.size(), u0.comp2.size());
    if (snapshot_times.empty())
        snapshot_times.push_back(horizon);
    for (std::size_t k = 0; k < snapshot_times.size(); ++k)
    {
        const double t = snapshot_times[k];
        if (t < 0.0)
            throw NegativeTime(t);
        if (t > horizon)
            throw DomainError("snapshot time beyond the horizon");
        if (k > 0 && t < snapshot_times[k - 1])
            throw DomainError("snapshot times must be sorted");
    }

    const SwitchingMatrixField field = SwitchingMatrixField::from_model(model, u0.cells());
    std::vector<Snapshot> out;
    out.reserve(snapshot_times.size());
    GridDensity u = u0;
    double t = 0.0;

    auto advance_to = [&](double target) {
        const double span = target - t;
        if (span <= 0.0)
            return;
        const std::size_t steps = steps_for(span, cfg.dt);
        const double dt = span / static_cast<double>(steps);
        for (std::size_t k = 0; k < steps; ++k)
        {
            step_inplace(model, field, cfg.order, dt, u);
            const double now = (k + 1 == steps) ? target : t + dt * static_cast<double>(k + 1);
            if (observer)
                observer(now, u);
        }
        t = target;
    };

    for (double target : snapshot_times)
    {
        advance_to(target);
        out.push_back({target, u});
    }
    advance_to(horizon);
    return out;
}

//---------------------------------------------------------------------------//
// Resolvent matrix
//---------------------------------------------------------------------------//

namespace {

// Weights of int_0^tau e^{-l s} [(1 - s/tau) u0 + (s/tau) u1] ds = w0 u0 + w1 u1.
std::pair<double, double> laplace_weights(double lambda, double tau)
{
    const double z = lambda * tau;
    if (z < 0.5)
    {
        // w0/tau = sum (-z)^k/(k+2)!,  w1/tau = sum (-z)^k (k+1)/(k+2)!
        double s0 = 0.0;
        double s1 = 0.0;
        double term = 0.5; // (-z)^k / (k+2)!
        for (int k = 0; k < 30; ++k)
        {
            s0 += term;
            s1 += term * (k + 1);
            term *= -z / (k + 3);
        }
        return {tau * s0, tau * s1};
    }
    const double e = std::exp(-z);
    const double w0 = (z - 1.0 + e) / (z * z);
    const double w1 = (1.0 - e - z * e) / (z * z);
    return {tau * w0, tau * w1};
}

} // namespace

Eigen::VectorXd stack(const GridDensity& f)
{
    const auto n = static_cast<Eigen::Index>(f.cells());
    Eigen::VectorXd v(2 * n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        v[i] = f.comp1[static_cast<std::size_t>(i)];
        v[n + i] = f.comp2[static_cast<std::size_t>(i)];
    }
    return v;
}

GridDensity unstack(const Eigen::VectorXd& v)
{
    const auto n = v.size() / 2;
    GridDensity f = GridDensity::zeros(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
    {
        f.comp1[static_cast<std::size_t>(i)] = v[i];
        f.comp2[static_cast<std::size_t>(i)] = v[n + i];
    }
    return f;
}

ResolventMatrix assemble_resolvent(const CanonicalModel& model, double lambda, const LaplaceQuadConfig& quad)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw NonpositiveLambda(lambda);
    if (quad.n == 0)
        throw ParameterError("n>0");
    SplittingConfig{quad.dt, quad.order}.validate();
    if (!(quad.tail_tol > 0.0 && quad.tail_tol < 1.0))
        throw ParameterError("0<tail_tol<1");

    const std::size_t n = quad.n;
    const auto steps = static_cast<std::size_t>(std::ceil(std::log(1.0 / quad.tail_tol) / lambda / quad.dt));
    const double horizon = static_cast<double>(steps) * quad.dt;
    const auto [w0, w1] = laplace_weights(lambda, quad.dt);
    const double decay = std::exp(-lambda * quad.dt);

    ResolventMatrix rm;
    rm.lambda = lambda;
    rm.n = n;
    rm.horizon = horizon;
    rm.dt = quad.dt;
    rm.tail_bound = std::exp(-lambda * horizon) / lambda;
    rm.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));

    const SwitchingMatrixField field = SwitchingMatrixField::from_model(model, n);

    auto column = [&](std::size_t j) {
        GridDensity u = GridDensity::zeros(n);
        (j < n ? u.comp1[j] : u.comp2[j - n]) = 1.0;
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n));
        Eigen::VectorXd prev = stack(u);
        double weight = 1.0; // e^{-lambda t_k}
        for (std::size_t k = 0; k < steps; ++k)
        {
            step_inplace(model, field, quad.order, quad.dt, u);
            Eigen::VectorXd next = stack(u);
            acc += weight * (w0 * prev + w1 * next);
            prev.swap(next);
            weight *= decay;
        }
        rm.matrix.col(static_cast<Eigen::Index>(j)) = acc;
    };

    const std::size_t columns = 2 * n;
    const unsigned workers = std::max(1u, std::min<unsigned>(quad.workers, static_cast<unsigned>(columns)));
    if (workers == 1)
    {
        for (std::size_t j = 0; j < columns; ++j)
            column(j);
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t j = w; j < columns; j += workers)
                    column(j);
            });
        for (auto& th : pool)
            th.join();
    }
    return rm;
}

GridDensity apply(const ResolventMatrix& rm, const GridDensity& f)
{
    if (f.cells() != rm.n || f.comp2.size() != rm.n)
        throw SizeMismatch(f.cells(), rm.n);
    return unstack(rm.matrix * stack(f));
}

DualGridFunction dual_apply(const ResolventMatrix& rm, const DualGridFunction& g)
{
    if (g.cells() != rm.n || g.comp2.size() != rm.n)
        throw SizeMismatch(g.cells(), rm.n);
    const GridDensity as_density{g.comp1, g.comp2};
    const GridDensity out = unstack(rm.matrix.transpose() * stack(as_density));
    return {out.comp1, out.comp2};
}

void write_resolvent_csv(std::ostream& os, const ResolventMatrix& rm)
{
    write_csv_row(os, {"lambda", "n", "horizon", "dt", "quad_order", "tail_bound"});
    write_csv_row(os, {format_double(rm.lambda), std::to_string(rm.n), format_double(rm.horizon),
                       format_double(rm.dt), std::to_string(rm.quad_order), format_double(rm.tail_bound)});
    std::vector<std::string> row(static_cast<std::size_t>(rm.matrix.cols()));
    for (Eigen::Index i = 0; i < rm.matrix.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < rm.matrix.cols(); ++j)
            row[static_cast<std::size_t>(j)] = format_double(rm.matrix(i, j));
        write_csv_row(os, row);
    }
}

} // namespace hgrn

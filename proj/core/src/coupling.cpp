#include "hgrn/coupling.hpp"

#include <cmath>

#include "hgrn/errors.hpp"

namespace hgrn {

namespace {

void check_sizes(const SwitchingMatrixField& field, const GridDensity& u)
{
    if (u.comp1.size() != u.comp2.size())
        throw SizeMismatch(u.comp1.size(), u.comp2.size());
    if (field.mu.size() != field.nu.size())
        throw SizeMismatch(field.nu.size(), field.mu.size());
    if (field.cells() != u.cells())
        throw SizeMismatch(field.cells(), u.cells());
}

} // namespace

SwitchingMatrixField SwitchingMatrixField::from_model(const CanonicalModel& model, std::size_t n)
{
    SwitchingMatrixField f{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i)
    {
        const double x = cell_center(i, n);
        f.nu[i] = model.nu(x);
        f.mu[i] = model.mu(x);
    }
    return f;
}

SwitchingMatrixField SwitchingMatrixField::constant(double nu, double mu, std::size_t n)
{
    return {std::vector<double>(n, nu), std::vector<double>(n, mu)};
}

GridDensity apply_B(const SwitchingMatrixField& field, const GridDensity& u)
{
    check_sizes(field, u);
    GridDensity out = GridDensity::zeros(u.cells());
    for (std::size_t i = 0; i < u.cells(); ++i)
    {
        const double flux = field.nu[i] * u.comp1[i] - field.mu[i] * u.comp2[i];
        out.comp1[i] = -flux;
        out.comp2[i] = flux;
    }
    return out;
}

void exp_B_inplace(const SwitchingMatrixField& field, double t, GridDensity& u)
{
    if (t < 0.0)
        throw NegativeTime(t);
    check_sizes(field, u);
    if (t == 0.0)
        return;
    for (std::size_t i = 0; i < u.cells(); ++i)
    {
        const double nu = field.nu[i];
        const double mu = field.mu[i];
        const double s = nu + mu;
        const double decay = std::exp(-s * t);
        const double m = u.comp1[i] + u.comp2[i];
        // Convex combination of the current state and the local equilibrium.
        const double v1 = decay * u.comp1[i] + (1.0 - decay) * (mu / s) * m;
        u.comp1[i] = v1;
        u.comp2[i] = m - v1;
        if (u.comp2[i] < 0.0 && m >= 0.0 && u.comp1[i] >= 0.0)
        {
            u.comp2[i] = 0.0;
            u.comp1[i] = m;
        }
    }
}

GridDensity exp_B(const SwitchingMatrixField& field, double t, const GridDensity& u)
{
    GridDensity out = u;
    exp_B_inplace(field, t, out);
    return out;
}

} // namespace hgrn

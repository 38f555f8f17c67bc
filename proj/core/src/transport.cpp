#include "hgrn/transport.hpp"

#include <algorithm>
#include <cmath>

#include "hgrn/errors.hpp"
#include "hgrn/quadrature.hpp"

namespace hgrn {

namespace {

constexpr std::size_t own_cell_points = 12;

void require_positive(double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw NonpositiveLambda(lambda);
}

bool is_nonnegative(const ScalarField& f)
{
    return std::all_of(f.values.begin(), f.values.end(), [](double v) { return v >= 0.0; });
}

// expm1(q L) / q with the q -> 0 limit L.
double expm1_ratio(double q, double log_ratio)
{
    return q == 0.0 ? log_ratio : std::expm1(q * log_ratio) / q;
}

} // namespace

ScalarField reflect(const ScalarField& f)
{
    return ScalarField(std::vector<double>(f.values.rbegin(), f.values.rend()));
}

ScalarField apply_T1(double t, const ScalarField& f)
{
    if (t < 0.0)
        throw NegativeTime(t);
    if (t == 0.0)
        return f;
    const std::size_t n = f.cells();
    const double contraction = std::exp(-t);
    std::vector<double> edges(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        edges[i] = cell_edge(i, n) * contraction;
    return ScalarField(conservative_remap(f.values, edges, n));
}

ScalarField apply_T2(double t, const ScalarField& f)
{
    if (t < 0.0)
        throw NegativeTime(t);
    return reflect(apply_T1(t, reflect(f)));
}

ScalarField resolvent_C1(double lambda, const ScalarField& f)
{
    require_positive(lambda);
    const std::size_t n = f.cells();
    const double h = cell_width(n);
    const std::vector<double> slope = limited_slopes(f.values);
    const bool clip = is_nonnegative(f);

    // On cell k the reconstruction is offset[k] + slope[k] * y.
    std::vector<double> offset(n);
    for (std::size_t k = 0; k < n; ++k)
        offset[k] = f[k] - slope[k] * cell_center(k, n);

    // tail[i] = int_{x_{i+1}}^1 f(y) y^{-lambda} dy
    std::vector<double> tail(n, 0.0);
    double acc = 0.0;
    for (std::size_t k = n; k-- > 1;)
    {
        tail[k] = acc;
        const double lo = cell_edge(k, n);
        const double hi = cell_edge(k + 1, n);
        double piece = offset[k] * power_integral(lo, hi, -lambda)
                       + slope[k] * power_integral(lo, hi, 1.0 - lambda);
        if (clip)
            piece = std::max(piece, 0.0);
        acc += piece;
    }
    tail[0] = acc;

    const QuadratureRule& gl = gauss_legendre(own_cell_points);
    ScalarField out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double lo = cell_edge(i, n);
        const double hi = cell_edge(i + 1, n);
        const double weight = power_integral(lo, hi, lambda - 1.0);
        double own;
        if (i == 0)
        {
            // Swap the order of integration: int_0^c y^{-l} int_0^y x^{l-1} dx dy.
            own = offset[0] * hi / lambda + slope[0] * hi * hi / (2.0 * lambda);
        }
        else
        {
            own = 0.0;
            const double half = 0.5 * (hi - lo);
            const double mid = 0.5 * (hi + lo);
            for (std::size_t q = 0; q < gl.nodes.size(); ++q)
            {
                const double x = mid + half * gl.nodes[q];
                const double log_ratio = std::log(hi / x);
                // x^{l-1} int_x^hi y^{-l} dy  and  x^{l-1} int_x^hi y^{1-l} dy
                const double k0 = expm1_ratio(1.0 - lambda, log_ratio);
                const double k1 = x * expm1_ratio(2.0 - lambda, log_ratio);
                double inner = offset[i] * k0 + slope[i] * k1;
                if (clip)
                    inner = std::max(inner, 0.0);
                own += gl.weights[q] * inner;
            }
            own *= half;
        }
        double value = (tail[i] * weight + own) / h;
        if (clip)
            value = std::max(value, 0.0);
        out[i] = value;
    }
    return out;
}

ScalarField resolvent_C2(double lambda, const ScalarField& f)
{
    require_positive(lambda);
    return reflect(resolvent_C1(lambda, reflect(f)));
}

namespace {

// Running sums for R(lambda, C1') with piecewise-constant g:
// weighted[i] = sum_{k<i} g_k s_k and plain[i] = sum_{k<i} s_k, where
// s_k = int_{cell k} x^{lambda-1} dx.
struct DualPrefix
{
    std::vector<double> weighted;
    std::vector<double> plain;
};

DualPrefix dual_prefix(double lambda, const ScalarField& g)
{
    const std::size_t n = g.cells();
    DualPrefix p{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
    for (std::size_t k = 0; k < n; ++k)
    {
        const double s = power_integral(cell_edge(k, n), cell_edge(k + 1, n), lambda - 1.0);
        p.weighted[k + 1] = p.weighted[k] + g[k] * s;
        p.plain[k + 1] = p.plain[k] + s;
    }
    return p;
}

} // namespace

ScalarField dual_resolvent_C1(double lambda, const ScalarField& g)
{
    require_positive(lambda);
    const std::size_t n = g.cells();
    const double h = cell_width(n);
    const DualPrefix p = dual_prefix(lambda, g);
    const bool clip = is_nonnegative(g);

    ScalarField out(n, 0.0);
    out[0] = g[0] / lambda;
    for (std::size_t i = 1; i < n; ++i)
    {
        // int_0^y g x^{l-1} dx = deficit + g_i y^l / l  for y in cell i
        const double deficit = p.weighted[i] - g[i] * p.plain[i];
        const double lo = cell_edge(i, n);
        const double hi = cell_edge(i + 1, n);
        double value = (deficit * power_integral(lo, hi, -lambda) + g[i] * h / lambda) / h;
        if (clip)
            value = std::max(value, 0.0);
        out[i] = value;
    }
    return out;
}

ScalarField dual_resolvent_C2(double lambda, const ScalarField& g)
{
    require_positive(lambda);
    return reflect(dual_resolvent_C1(lambda, reflect(g)));
}

double dual_resolvent_C1_at(double lambda, const ScalarField& g, double y)
{
    require_positive(lambda);
    const std::size_t n = g.cells();
    if (!(y >= 0.0 && y <= 1.0))
        throw DomainError("evaluation point outside [0,1]");
    const auto i = std::min(n - 1, static_cast<std::size_t>(y * static_cast<double>(n)));
    if (i == 0 || y == 0.0)
        return g[0] / lambda;
    const DualPrefix p = dual_prefix(lambda, g);
    const double deficit = p.weighted[i] - g[i] * p.plain[i];
    return deficit / std::pow(y, lambda) + g[i] / lambda;
}

double dual_resolvent_C2_at(double lambda, const ScalarField& g, double y)
{
    return dual_resolvent_C1_at(lambda, reflect(g), 1.0 - y);
}

} // namespace hgrn

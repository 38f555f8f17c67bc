#include "hgrn/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "hgrn/errors.hpp"
#include "hgrn/quadrature.hpp"

namespace hgrn {

namespace {

constexpr std::size_t legendre_points = 12;
constexpr std::size_t jacobi_points = 16;

// int_0^x (r(s) - r(0)) / s ds for a piecewise-linear r.
double log_integral_left(const RateFunction& r, double x)
{
    const auto nodes = r.nodes();
    const auto values = r.values();
    const double r0 = r(0.0);
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
    {
        const double lo = std::max(nodes[k], 0.0);
        const double hi = std::min(nodes[k + 1], x);
        if (hi <= lo)
            continue;
        const double slope = (values[k + 1] - values[k]) / (nodes[k + 1] - nodes[k]);
        const double offset = values[k] - slope * nodes[k];
        // (offset + slope s - r0)/s; on the segment touching 0 the offset is r0.
        const double a = lo == 0.0 ? 0.0 : offset - r0;
        s += slope * (hi - lo);
        if (a != 0.0)
            s += a * std::log(hi / lo);
    }
    return s;
}

// int_0^x (r(s) - r(1)) / (1 - s) ds for a piecewise-linear r.
double log_integral_right(const RateFunction& r, double x)
{
    const auto nodes = r.nodes();
    const auto values = r.values();
    const double r1 = r(1.0);
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
    {
        const double lo = std::max(nodes[k], 0.0);
        const double hi = std::min({nodes[k + 1], x, 1.0});
        if (hi <= lo)
            continue;
        // r(s) = offset + slope (1 - s) on the segment.
        const double slope = -(values[k + 1] - values[k]) / (nodes[k + 1] - nodes[k]);
        const double offset = values[k] - slope * (1.0 - nodes[k]);
        const double a = nodes[k + 1] >= 1.0 ? 0.0 : offset - r1;
        s += slope * (hi - lo);
        if (a != 0.0)
            s += a * std::log((1.0 - lo) / (1.0 - hi));
    }
    return s;
}

struct Profile
{
    const CanonicalModel& model;
    double p; // exponent of x in q
    double r; // exponent of (1 - x) in q

    double correction(double x) const
    {
        return std::exp(log_integral_left(model.nu, x) / model.b - log_integral_right(model.mu, x) / model.d);
    }
};

// int_lo^hi x^ea (1-x)^eb g(x) dx, with a Jacobi rule when lo == 0 or hi == 1.
template <class F>
double weighted_integral(double lo, double hi, double ea, double eb, const F& g)
{
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double s = 0.0;
    if (lo == 0.0)
    {
        // x = half (1 + t): x^ea = half^ea (1 + t)^ea
        const QuadratureRule rule = gauss_jacobi(jacobi_points, 0.0, ea);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        {
            const double x = mid + half * rule.nodes[q];
            s += rule.weights[q] * std::pow(1.0 - x, eb) * g(x);
        }
        return s * std::pow(half, ea + 1.0);
    }
    if (hi == 1.0)
    {
        // 1 - x = half (1 - t)
        const QuadratureRule rule = gauss_jacobi(jacobi_points, eb, 0.0);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        {
            const double x = mid + half * rule.nodes[q];
            s += rule.weights[q] * std::pow(x, ea) * g(x);
        }
        return s * std::pow(half, eb + 1.0);
    }
    const QuadratureRule& rule = gauss_legendre(legendre_points);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    {
        const double x = mid + half * rule.nodes[q];
        s += rule.weights[q] * std::pow(x, ea) * std::pow(1.0 - x, eb) * g(x);
    }
    return s * half;
}

// Breakpoints of the rate tables inside (lo, hi), plus the ends.
std::vector<double> pieces(const CanonicalModel& model, double lo, double hi)
{
    std::vector<double> pts{lo, hi};
    for (const RateFunction* r : {&model.nu, &model.mu})
        for (double x : r->nodes())
            if (x > lo && x < hi)
                pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

void normalize(EquilibriumDensity& eq)
{
    const double total = mass(eq.w);
    if (!(total > 0.0) || !std::isfinite(total))
        throw QuadratureFailure("stationary density has non-finite mass; exponents nu(0)/b = "
                                + std::to_string(eq.model.nu(0.0) / eq.model.b)
                                + ", mu(1)/d = " + std::to_string(eq.model.mu(1.0) / eq.model.d));
    for (double& v : eq.w.comp1)
        v /= total;
    for (double& v : eq.w.comp2)
        v /= total;
    eq.C /= total;
}

EquilibriumDensity closed_form(const CanonicalModel& model, std::size_t n)
{
    namespace bm = boost::math;
    const double p = model.nu(0.0) / model.b;
    const double r = model.mu(1.0) / model.d;
    const double h = cell_width(n);

    // Cell masses of x^{a-1} (1-x)^{c-1} through regularized incomplete Beta.
    auto cell_masses = [&](double a, double c) {
        const double full = bm::beta(a, c);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            const double lo = cell_edge(i, n);
            const double hi = i + 1 == n ? 1.0 : cell_edge(i + 1, n);
            double frac;
            if (lo >= 0.5)
                frac = bm::ibetac(a, c, lo) - (hi >= 1.0 ? 0.0 : bm::ibetac(a, c, hi));
            else
                frac = bm::ibeta(a, c, hi) - (lo <= 0.0 ? 0.0 : bm::ibeta(a, c, lo));
            out[i] = full * frac / h;
        }
        return out;
    };

    EquilibriumDensity eq;
    eq.model = model;
    eq.method = EquilibriumMethod::closed_form;
    eq.C = 1.0;
    eq.w.comp1 = cell_masses(p, r + 1.0);
    eq.w.comp2 = cell_masses(p + 1.0, r);
    for (double& v : eq.w.comp1)
        v /= model.b;
    for (double& v : eq.w.comp2)
        v /= model.d;
    normalize(eq);
    return eq;
}

EquilibriumDensity by_quadrature(const CanonicalModel& model, std::size_t n)
{
    const Profile prof{model, model.nu(0.0) / model.b, model.mu(1.0) / model.d};
    const double h = cell_width(n);
    auto g = [&](double x) { return prof.correction(x); };

    EquilibriumDensity eq;
    eq.model = model;
    eq.method = EquilibriumMethod::quadrature;
    eq.C = 1.0;
    eq.w = GridDensity::zeros(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double lo = cell_edge(i, n);
        const double hi = i + 1 == n ? 1.0 : cell_edge(i + 1, n);
        const auto pts = pieces(model, lo, hi);
        double m1 = 0.0;
        double m2 = 0.0;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        {
            m1 += weighted_integral(pts[k], pts[k + 1], prof.p - 1.0, prof.r, g);
            m2 += weighted_integral(pts[k], pts[k + 1], prof.p, prof.r - 1.0, g);
        }
        eq.w.comp1[i] = m1 / (model.b * h);
        eq.w.comp2[i] = m2 / (model.d * h);
    }
    normalize(eq);
    return eq;
}

} // namespace

const char* to_string(EquilibriumMethod m)
{
    switch (m)
    {
    case EquilibriumMethod::automatic:
        return "automatic";
    case EquilibriumMethod::closed_form:
        return "closed_form";
    case EquilibriumMethod::quadrature:
        return "quadrature";
    }
    return "unknown";
}

double EquilibriumDensity::value1(double x) const
{
    const double p = model.nu(0.0) / model.b;
    const double r = model.mu(1.0) / model.d;
    const Profile prof{model, p, r};
    return C / model.b * std::pow(x, p - 1.0) * std::pow(1.0 - x, r) * prof.correction(x);
}

double EquilibriumDensity::value2(double x) const
{
    const double p = model.nu(0.0) / model.b;
    const double r = model.mu(1.0) / model.d;
    const Profile prof{model, p, r};
    return C / model.d * std::pow(x, p) * std::pow(1.0 - x, r - 1.0) * prof.correction(x);
}

EquilibriumDensity stationary_density(const CanonicalModel& model, std::size_t n, EquilibriumMethod method)
{
    validate(model);
    if (n == 0)
        throw ParameterError("n>0");
    const bool constant = model.nu.is_constant() && model.mu.is_constant();
    if (method == EquilibriumMethod::automatic)
        method = constant ? EquilibriumMethod::closed_form : EquilibriumMethod::quadrature;
    if (method == EquilibriumMethod::closed_form)
    {
        if (!constant)
            throw ParameterError("closed-form equilibrium needs constant rates");
        return closed_form(model, n);
    }
    return by_quadrature(model, n);
}

GridDensity project(const EquilibriumDensity& w, const GridDensity& u)
{
    if (u.cells() != w.w.cells())
        throw SizeMismatch(u.cells(), w.w.cells());
    const double m = mass(u);
    GridDensity out = w.w;
    for (double& v : out.comp1)
        v *= m;
    for (double& v : out.comp2)
        v *= m;
    return out;
}

} // namespace hgrn

#include "hgrn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "hgrn/errors.hpp"
#include "hgrn/quadrature.hpp"
#include "hgrn/transport.hpp"

namespace hgrn {

//---------------------------------------------------------------------------//
// Parameters
//---------------------------------------------------------------------------//

EpsilonGammaLambda choose_parameters(const CanonicalModel& model)
{
    validate(model);
    const double top = std::max(model.nu.max(), model.mu.max());
    const double bottom = std::min(model.nu.min(), model.mu.min());
    EpsilonGammaLambda p;
    p.gamma = 1.1 * top;
    p.epsilon = 0.5 * std::min(p.gamma - top, bottom);
    p.lambda0 = 1.1 * std::max({p.gamma, 2.0 * p.epsilon, model.b, model.d});
    return p;
}

ParameterChecks check_parameters(const CanonicalModel& model, const EpsilonGammaLambda& p)
{
    const double top = std::max(model.nu.max(), model.mu.max());
    const double bottom = std::min(model.nu.min(), model.mu.min());
    ParameterChecks c;
    c.epsilon_below_rates = p.epsilon > 0.0 && p.epsilon < bottom;
    c.epsilon_below_gap = p.epsilon < p.gamma - top;
    c.lambda0_dominates = p.lambda0 > std::max(p.gamma, 2.0 * p.epsilon);
    c.perturbation_small = 2.0 * p.epsilon / p.lambda0 < 1.0;
    return c;
}

std::vector<double> default_lambda_grid(const CanonicalModel& model)
{
    const double l0 = choose_parameters(model).lambda0;
    const double speed = std::max(model.b, model.d);
    std::vector<double> grid;
    for (double k : {1.0, 2.0, 5.0, 10.0})
    {
        const double lambda = k * speed > l0 ? k * speed : 1.25 * l0;
        if (grid.empty() || lambda > grid.back())
            grid.push_back(lambda);
    }
    return grid;
}

//---------------------------------------------------------------------------//
// Dual positivity
//---------------------------------------------------------------------------//

std::vector<NamedDual> default_g_battery(std::size_t n)
{
    std::vector<NamedDual> out;
    out.push_back({"one", DualGridFunction::ones(n)});
    DualGridFunction ramp = DualGridFunction::zeros(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        ramp.comp1[i] = cell_center(i, n);
        ramp.comp2[i] = 1.0 - cell_center(i, n);
    }
    out.push_back({"ramp", ramp});
    for (int comp = 1; comp <= 2; ++comp)
        out.push_back(cell_indicator(n, comp, n / 2));
    return out;
}

NamedDual cell_indicator(std::size_t n, int comp, std::size_t cell)
{
    if (comp != 1 && comp != 2)
        throw BadMode(comp);
    cell = std::min(cell, n - 1);
    DualGridFunction g = DualGridFunction::zeros(n);
    (comp == 1 ? g.comp1 : g.comp2)[cell] = 1.0;
    return {"cell" + std::to_string(comp) + "_" + std::to_string(cell), g};
}

double dual_positivity_check(const ResolventMatrix& rm, const DualGridFunction& g)
{
    bool nonzero = false;
    for (const auto* comp : {&g.comp1, &g.comp2})
        for (double v : *comp)
        {
            if (v < 0.0 || !std::isfinite(v))
                throw DomainError("dual positivity needs g >= 0");
            nonzero = nonzero || v > 0.0;
        }
    if (!nonzero)
        throw DomainError("dual positivity needs g != 0");
    const DualGridFunction r = dual_apply(rm, g);
    double c = r.comp1.front();
    for (const auto* comp : {&r.comp1, &r.comp2})
        for (double v : *comp)
            c = std::min(c, v);
    return c;
}

double dual_positivity_check(const CanonicalModel& model,
                             double lambda,
                             const DualGridFunction& g,
                             const LaplaceQuadConfig& quad)
{
    const double l0 = choose_parameters(model).lambda0;
    if (!(lambda > l0))
        throw DomainError("lambda must exceed lambda0 = " + std::to_string(l0));
    LaplaceQuadConfig q = quad;
    q.n = g.cells();
    return dual_positivity_check(assemble_resolvent(model, lambda, q), g);
}

bool dual_positivity_passes(double c, const DualGridFunction& g)
{
    return c > 0.0 && c > 1e-8 * sup_norm(g);
}

//---------------------------------------------------------------------------//
// Dyson-Phillips first term
//---------------------------------------------------------------------------//

GridDensity dyson_u1(const CanonicalModel& model, double epsilon, double t, const GridDensity& f, std::size_t panels)
{
    if (!(t > 0.0))
        throw DomainError("dyson_u1 needs t > 0");
    if (f.comp1.size() != f.comp2.size())
        throw SizeMismatch(f.comp1.size(), f.comp2.size());
    const std::size_t n = f.cells();
    // Near the ends the s-support of a cell's integrand shrinks to about
    // h / speed, so the panel width has to follow the cell width.
    const double resolve = 4.0 * t * std::max(model.b, model.d) * static_cast<double>(n);
    panels = std::max({panels, std::size_t{64}, static_cast<std::size_t>(std::ceil(resolve))});
    panels += panels % 2;
    const double hs = t / static_cast<double>(panels);
    const ScalarField f1(f.comp1);
    const ScalarField f2(f.comp2);

    GridDensity out = GridDensity::zeros(n);
    for (std::size_t k = 0; k <= panels; ++k)
    {
        const double s = hs * static_cast<double>(k);
        const double simpson = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        const double weight = simpson * hs / 3.0 * epsilon;
        const ScalarField g1 = apply_T1(model.b * s, f1);
        const ScalarField g2 = apply_T2(model.d * s, f2);
        ScalarField sum(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            sum[i] = g1[i] + g2[i];
        const ScalarField a1 = apply_T1(model.b * (t - s), sum);
        const ScalarField a2 = apply_T2(model.d * (t - s), sum);
        for (std::size_t i = 0; i < n; ++i)
        {
            out.comp1[i] += weight * a1[i];
            out.comp2[i] += weight * a2[i];
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
// Kernel of the off-diagonal block
//---------------------------------------------------------------------------//

KernelOrientation kernel_orientation(const CanonicalModel& model)
{
    return model.d <= model.b ? KernelOrientation::from2to1 : KernelOrientation::from1to2;
}

double phi(const CanonicalModel& model, KernelOrientation o, double t, double x, double s)
{
    const double b = model.b;
    const double d = model.d;
    if (o == KernelOrientation::from2to1)
        return 1.0 - (1.0 - x * std::exp(b * (t - s))) * std::exp(d * s);
    return (1.0 - (1.0 - x) * std::exp(d * (t - s))) * std::exp(b * s);
}

double dphi_ds(const CanonicalModel& model, KernelOrientation o, double t, double x, double s)
{
    const double b = model.b;
    const double d = model.d;
    if (o == KernelOrientation::from2to1)
        return -std::exp(d * s) * (d + (b - d) * x * std::exp(b * (t - s)));
    return std::exp(b * s) * (b + (d - b) * (1.0 - x) * std::exp(d * (t - s)));
}

double invert_phi(const CanonicalModel& model, KernelOrientation o, double t, double x, double y)
{
    double lo = 0.0;
    double hi = t;
    const double f_lo = phi(model, o, t, x, lo) - y;
    const double f_hi = phi(model, o, t, x, hi) - y;
    const double slack = 1e-13;
    if (f_lo * f_hi > 0.0 && std::min(std::abs(f_lo), std::abs(f_hi)) > slack)
        throw InversionFailure("y = " + std::to_string(y) + " is outside phi(x, [0, t]) for x = " + std::to_string(x));
    const bool increasing = f_hi > f_lo;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        const double v = phi(model, o, t, x, mid) - y;
        if ((v < 0.0) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    if (hi - lo > 1e-12)
        throw InversionFailure("bisection did not converge");
    return 0.5 * (lo + hi);
}

std::pair<double, double> kernel_support(const CanonicalModel& model, KernelOrientation o, double t, double x)
{
    const double a = phi(model, o, t, x, 0.0);
    const double b = phi(model, o, t, x, t);
    return {std::clamp(std::min(a, b), 0.0, 1.0), std::clamp(std::max(a, b), 0.0, 1.0)};
}

namespace {

constexpr std::size_t kernel_points = 24;

double kernel_value(const CanonicalModel& model, KernelOrientation o, double t, double x, double y)
{
    const double s = invert_phi(model, o, t, x, y);
    return 1.0 / std::abs(dphi_ds(model, o, t, x, s));
}

} // namespace

KernelLowerBound phi_kernel(const CanonicalModel& model, double t, std::size_t n)
{
    if (!(t > 0.0))
        throw DomainError("phi_kernel needs t > 0");
    KernelLowerBound kb;
    kb.t = t;
    kb.orientation = kernel_orientation(model);
    kb.k = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
    {
        kb.x.push_back(cell_center(i, n));
        kb.y.push_back(cell_center(i, n));
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto [lo, hi] = kernel_support(model, kb.orientation, t, kb.x[i]);
        kb.support_lo.push_back(lo);
        kb.support_hi.push_back(hi);
        for (std::size_t j = 0; j < n; ++j)
        {
            const double y = kb.y[j];
            if (lo < hi && y >= lo && y <= hi)
                kb.k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))
                    = kernel_value(model, kb.orientation, t, kb.x[i], y);
        }
    }
    return kb;
}

double kernel_integral(const CanonicalModel& model,
                       KernelOrientation o,
                       double t,
                       double x,
                       const std::function<double(double)>& f)
{
    const auto [lo, hi] = kernel_support(model, o, t, x);
    if (!(hi > lo))
        return 0.0;
    const QuadratureRule& rule = gauss_legendre(kernel_points);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    {
        const double y = mid + half * rule.nodes[q];
        s += rule.weights[q] * kernel_value(model, o, t, x, y) * f(y);
    }
    return s * half;
}

std::function<double(double)> random_bernstein(std::uint64_t seed, std::size_t degree)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(0.0, 1.0);
    std::vector<double> c(degree + 1);
    for (double& v : c)
        v = coeff(rng);
    return [c](double x) {
        // de Casteljau
        std::vector<double> b = c;
        for (std::size_t r = 1; r < b.size(); ++r)
            for (std::size_t k = 0; k + r < b.size(); ++k)
                b[k] = (1.0 - x) * b[k] + x * b[k + 1];
        return b[0];
    };
}

PartialIntegralResult partial_integral_check(const CanonicalModel& model,
                                             double epsilon,
                                             double t,
                                             const std::vector<std::function<double(double)>>& fs,
                                             std::size_t n,
                                             std::size_t panels)
{
    if (!(t > 0.0))
        throw DomainError("partial_integral_check needs t > 0");
    PartialIntegralResult res;
    res.t = t;
    res.epsilon = epsilon;
    res.orientation = kernel_orientation(model);
    res.trials = fs.size();
    res.margin = std::numeric_limits<double>::infinity();

    const QuadratureRule& xs = gauss_legendre(4);
    const double h = cell_width(n);
    for (const auto& f : fs)
    {
        const std::vector<double> cells = sample_to_grid(f, n);
        const double tol = 1e-8 * l1_norm(cells);
        GridDensity input = GridDensity::zeros(n);
        const bool to1 = res.orientation == KernelOrientation::from2to1;
        (to1 ? input.comp2 : input.comp1) = cells;
        const GridDensity u1 = dyson_u1(model, epsilon, t, input, panels);
        const std::vector<double>& lhs = to1 ? u1.comp1 : u1.comp2;

        for (std::size_t i = 0; i < n; ++i)
        {
            double rhs = 0.0;
            for (std::size_t q = 0; q < xs.nodes.size(); ++q)
            {
                const double x = cell_center(i, n) + 0.5 * h * xs.nodes[q];
                rhs += 0.5 * xs.weights[q] * kernel_integral(model, res.orientation, t, x, f);
            }
            rhs *= epsilon;
            if (lhs[i] < rhs - tol)
                res.pass = false;
            if (rhs > tol)
                res.margin = std::min(res.margin, (lhs[i] - rhs) / rhs);
        }
    }
    return res;
}

PartialIntegralResult partial_integral_check(const CanonicalModel& model,
                                             double epsilon,
                                             double t,
                                             std::size_t trials,
                                             std::size_t n,
                                             std::uint64_t seed,
                                             std::size_t panels)
{
    std::vector<std::function<double(double)>> fs;
    for (std::size_t k = 0; k < trials; ++k)
        fs.push_back(random_bernstein(seed + 0x9e3779b97f4a7c15ULL * (k + 1)));
    return partial_integral_check(model, epsilon, t, fs, n, panels);
}

//---------------------------------------------------------------------------//
// Convergence to the projection
//---------------------------------------------------------------------------//

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw SizeMismatch(x.size(), y.size());
    if (x.size() < 2)
        throw DomainError("a line fit needs at least two points");
    const double m = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        mx += x[k];
        my += y[k];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0.0)
        throw DomainError("a line fit needs distinct abscissae");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        const double r = y[k] - (fit.intercept + fit.slope * x[k]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

bool ConvergenceReport::monotone_tail(double slack) const
{
    const std::size_t start = norms.size() - std::min(norms.size(), fit_points);
    for (std::size_t k = start + 1; k < norms.size(); ++k)
        if (norms[k] > norms[k - 1] + slack)
            return false;
    return true;
}

ConvergenceReport norm_convergence(const CanonicalModel& model,
                                   const std::vector<double>& times,
                                   std::size_t n,
                                   double dt,
                                   const ConvergenceOptions& opts)
{
    if (times.empty())
        throw DomainError("norm_convergence needs at least one time");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw DomainError("times must be strictly increasing");
    if (!(opts.tail_fraction > 0.0 && opts.tail_fraction <= 1.0))
        throw ParameterError("0<tail_fraction<=1");

    const EquilibriumDensity eq = stationary_density(model, n);
    const SplittingConfig cfg{dt, opts.order};
    cfg.validate();
    const std::size_t columns = 2 * n;
    const double unit = static_cast<double>(n);
    std::vector<std::vector<double>> dist(columns, std::vector<double>(times.size(), 0.0));

    auto column = [&](std::size_t j) {
        GridDensity u = GridDensity::zeros(n);
        (j < n ? u.comp1[j] : u.comp2[j - n]) = unit;
        const auto snaps = evolve(model, cfg, u, times.back(), times);
        for (std::size_t k = 0; k < snaps.size(); ++k)
            dist[j][k] = l1_distance(snaps[k].u, eq.w);
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(columns)));
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

    ConvergenceReport rep;
    rep.times = times;
    rep.n = n;
    rep.dt = dt;
    rep.norms.assign(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k)
        for (std::size_t j = 0; j < columns; ++j)
            rep.norms[k] = std::max(rep.norms[k], dist[j][k]);

    const auto window = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(opts.tail_fraction * static_cast<double>(times.size()))));
    rep.fit_points = std::min(window, times.size());
    if (rep.fit_points >= 2)
    {
        const std::size_t start = times.size() - rep.fit_points;
        std::vector<double> xs(times.begin() + static_cast<std::ptrdiff_t>(start), times.end());
        std::vector<double> ys;
        for (std::size_t k = start; k < times.size(); ++k)
            ys.push_back(std::log(std::max(rep.norms[k], 1e-300)));
        const LinearFit fit = fit_line(xs, ys);
        rep.rate = -fit.slope;
        rep.intercept = fit.intercept;
        rep.r_squared = fit.r_squared;
    }
    return rep;
}

} // namespace hgrn

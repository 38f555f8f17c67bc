// Acceptance suite. Run as `hgrn_acceptance <k>` for one criterion or with no
// argument for all eight. Each criterion prints one PASS/FAIL line followed by
// the measured quantities; the exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hgrn/analysis.hpp"
#include "hgrn/equilibrium.hpp"
#include "hgrn/evolve.hpp"
#include "hgrn/pdmp.hpp"
#include "hgrn/transport.hpp"
#include "oracles.hpp"

using namespace hgrn;

namespace {

struct Report
{
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what, double value, const std::string& bound)
    {
        pass = pass && ok;
        detail << "    " << (ok ? "ok   " : "FAIL ") << what << " = " << value << " (" << bound << ")\n";
    }

    void note(const std::string& text) { detail << "    note " << text << '\n'; }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

GridDensity mode1_uniform(std::size_t n)
{
    GridDensity u = GridDensity::zeros(n);
    u.comp1.assign(n, 1.0);
    return u;
}

GridDensity final_state(const CanonicalModel& m, double dt, int order, const GridDensity& u0, double T)
{
    return evolve(m, SplittingConfig{dt, order}, u0, T).back().u;
}

CanonicalModel constant_model(double b, double d, double nu, double mu)
{
    return CanonicalModel{b, d, RateFunction::constant(nu, 0, 1), RateFunction::constant(mu, 0, 1)};
}

//---------------------------------------------------------------------------//

void criterion1(Report& r)
{
    const std::size_t n = 256;
    std::mt19937_64 rng(20261015);
    GridDensity u{oracle::random_cells(rng, n, 0.05, 2.0), oracle::random_cells(rng, n, 0.05, 2.0)};
    const double m0 = mass(u);
    double prev = m0, worst_step = 0.0;
    std::size_t steps = 0;
    evolve(CanonicalModel{}, SplittingConfig{1e-3, 2}, u, 2.0, {}, [&](double, const GridDensity& v) {
        const double m = mass(v);
        worst_step = std::max(worst_step, std::abs(m - prev) / prev);
        prev = m;
        ++steps;
    });
    r.check(steps == 2000, "Strang steps", double(steps), "== 2000");
    r.check(worst_step <= 1e-12, "max per-step relative mass drift", worst_step, "<= 1e-12");
    const double total = std::abs(prev - m0) / m0;
    r.check(total <= 1e-9, "total relative mass drift", total, "<= 1e-9");
}

void criterion2(Report& r)
{
    const std::size_t n = 256;
    const ScalarField one(n, 1.0);
    std::vector<double> lin1(n), lin2(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        lin1[i] = 1.0 - cell_center(i, n);
        lin2[i] = cell_center(i, n);
    }
    const double e1 = oracle::linf(resolvent_C1(2.0, one).values, lin1);
    const double e2 = oracle::linf(resolvent_C2(2.0, one).values, lin2);
    r.check(e1 <= 1e-10, "|R(2,C1)1 - (1-x)|_inf", e1, "<= 1e-10");
    r.check(e2 <= 1e-10, "|R(2,C2)1 - x|_inf", e2, "<= 1e-10");

    // T2 against Q T1 Q, and against a direct pushforward that does not use
    // the reflection at all.
    std::mt19937_64 rng(7);
    const ScalarField f(oracle::random_cells(rng, n));
    double refl = 0.0, direct = 0.0;
    for (double t : {0.01, 0.3, 1.0, 4.0})
    {
        const ScalarField t2 = apply_T2(t, f);
        refl = std::max(refl, oracle::linf(t2.values, reflect(apply_T1(t, reflect(f))).values));
        std::vector<double> edges(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            edges[i] = 1.0 - (1.0 - cell_edge(i, n)) * std::exp(-t);
        direct = std::max(direct, oracle::linf(t2.values, conservative_remap(f.values, edges, n)));
    }
    r.check(refl <= 1e-12, "|T2 - Q T1 Q|_inf", refl, "<= 1e-12");
    r.check(direct <= 1e-12, "|T2 - direct pushforward|_inf", direct, "<= 1e-12");

    double dual = 0.0;
    for (double lambda : {1.0, 2.0, 5.0})
    {
        const std::vector<double> inv(n, 1.0 / lambda);
        dual = std::max(dual, oracle::linf(dual_resolvent_C1(lambda, one).values, inv));
        dual = std::max(dual, oracle::linf(dual_resolvent_C2(lambda, one).values, inv));
    }
    r.check(dual <= 1e-6, "|R(l,Ci)'1 - 1/l|_inf, l in {1,2,5}", dual, "<= 1e-6");

    LaplaceQuadConfig q;
    q.n = 64;
    const auto rm = assemble_resolvent(CanonicalModel{}, 2.0, q);
    const DualGridFunction g = dual_apply(rm, DualGridFunction::ones(64));
    double full = 0.0;
    for (std::size_t i = 0; i < 64; ++i)
        full = std::max({full, std::abs(g.comp1[i] - 0.5), std::abs(g.comp2[i] - 0.5)});
    r.check(full <= 1e-6, "|R(2,A+B)'1 - 1/2|_inf (n=64)", full, "<= 1e-6");
}

void criterion3(Report& r)
{
    const std::size_t n = 256;
    const ScalarField one(n, 1.0);
    const double lambda = 2.0, T = 20.0;
    const std::size_t panels = 4000;
    const double h = T / panels;
    std::vector<double> acc(n, 0.0);
    for (std::size_t k = 0; k <= panels; ++k)
    {
        const double t = k * h;
        const double w = (k == 0 || k == panels ? 0.5 : 1.0) * h * std::exp(-lambda * t);
        const ScalarField s = apply_T1(t, one);
        for (std::size_t i = 0; i < n; ++i)
            acc[i] += w * s[i];
    }
    const double err = oracle::l1(acc, resolvent_C1(lambda, one).values);
    r.check(err <= 1e-4, "L1(R(2,C1)1, trapezoid Laplace transform of T1)", err, "<= 1e-4");
}

void criterion4(Report& r)
{
    const std::size_t n = 256;
    const CanonicalModel m;
    const auto eq = stationary_density(m, n);
    double flux = 0.0, shape = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double x = cell_center(i, n);
        flux = std::max(flux, std::abs(m.b * x * eq.value1(x) - m.d * (1 - x) * eq.value2(x)));
        shape = std::max({shape, std::abs(eq.value1(x) - (1 - x)), std::abs(eq.value2(x) - x)});
    }
    r.check(shape <= 1e-12, "|w - (1-x, x)|_inf at centers", shape, "<= 1e-12");
    r.check(flux <= 1e-8, "flux identity residual", flux, "<= 1e-8");

    const GridDensity u = final_state(m, 1e-3, 2, mode1_uniform(n), 20.0);
    const double reach = l1_distance(u, eq.w);
    r.check(reach <= 2e-3, "L1(S(20)(1,0), w)", reach, "<= 2e-3");

    const GridDensity s = final_state(m, 1e-3, 2, eq.w, 1.0);
    const double drift = l1_distance(s, eq.w);
    r.check(drift <= 1e-5, "L1(S(1)w, w)", drift, "<= 1e-5");
}

void criterion5(Report& r)
{
    const std::size_t n = 64, N = 100000;
    const CanonicalModel m;
    const GridDensity u0 = mode1_uniform(n);
    const std::vector<double> times{0.5, 2.0, 20.0};
    const auto pde = evolve(m, SplittingConfig{1e-3, 2}, u0, times.back(), times);
    for (std::size_t k = 0; k < times.size(); ++k)
    {
        const auto ens = simulate(m, InitialDistribution::uniform(1), N, times[k], 1000 + k);
        const double d = l1_distance(density_estimate(ens, n), pde[k].u);
        r.check(d <= 0.06, "L1(histogram, PDE) at T=" + fmt(times[k]), d, "<= 0.06");
    }
}

void criterion6(Report& r)
{
    const CanonicalModel m;
    const auto p = choose_parameters(m);
    const auto c = check_parameters(m, p);
    r.check(c.epsilon_below_rates, "epsilon < min rate", p.epsilon, "epsilon");
    r.check(c.epsilon_below_gap, "epsilon < gamma - max rate", p.gamma, "gamma");
    r.check(c.lambda0_dominates, "lambda0 > max(gamma, 2 epsilon)", p.lambda0, "lambda0");
    r.check(c.perturbation_small, "2 epsilon / lambda0 < 1", 2 * p.epsilon / p.lambda0, "< 1");

    const auto pic = partial_integral_check(m, p.epsilon, 0.5, 8, 128, 1);
    r.check(pic.pass && pic.margin > 0.0, "partial integral margin at t=0.5", pic.margin, "> 0 and pass");

    const std::size_t n = 128;
    LaplaceQuadConfig q;
    q.n = n;
    q.dt = 1e-2;
    const auto battery = default_g_battery(n);
    for (double lambda : default_lambda_grid(m))
    {
        if (!(lambda > p.lambda0))
        {
            r.check(false, "lambda above lambda0", lambda, "> " + fmt(p.lambda0));
            continue;
        }
        const auto rm = assemble_resolvent(m, lambda, q);
        for (const auto& g : battery)
        {
            const double cval = dual_positivity_check(rm, g.g);
            r.check(dual_positivity_passes(cval, g.g), "c(lambda=" + fmt(lambda) + ", g=" + g.name + ")", cval,
                    "> 1e-8 sup g");
        }
        // Off-center indicators are informational: their constants decay
        // faster in lambda than the battery's.
        for (const auto& g : {cell_indicator(n, 1, n / 4), cell_indicator(n, 2, 3 * n / 4)})
            r.note("c(lambda=" + fmt(lambda) + ", g=" + g.name + ") = " + fmt(dual_positivity_check(rm, g.g)));
    }
}

void criterion7(Report& r)
{
    const CanonicalModel m;
    const std::size_t n = 128;
    const double dt = 1e-2;
    // Fit over the whole window; monotonicity is then required everywhere.
    const auto rep = norm_convergence(m, {2.0, 4.0, 6.0, 8.0}, n, dt, {1.0, 2, 1});
    std::ostringstream norms;
    for (double v : rep.norms)
        norms << fmt(v) << ' ';
    r.note("norms at t = 2 4 6 8: " + norms.str() + " fitted rate " + fmt(rep.rate));
    r.check(rep.monotone_tail(), "non-increasing norms", rep.norms.back(), "monotone");
    r.check(rep.r_squared >= 0.99, "log-linear R^2", rep.r_squared, ">= 0.99");
    r.check(rep.norms.back() < 0.01, "max-over-basis distance at t=8", rep.norms.back(), "< 0.01");

    const auto eq = stationary_density(m, n);
    std::mt19937_64 rng(77);
    for (int k = 0; k < 3; ++k)
    {
        const GridDensity u0 = oracle::random_density(rng, n);
        const GridDensity u = final_state(m, 1e-3, 2, u0, 20.0);
        GridDensity target = eq.w;
        for (std::size_t i = 0; i < n; ++i)
        {
            target.comp1[i] *= mass(u0);
            target.comp2[i] *= mass(u0);
        }
        const double d = l1_distance(u, target) / mass(u0);
        r.check(d <= 1e-3, "random density " + std::to_string(k + 1) + ": L1(S(20)u, mass w)/mass", d, "<= 1e-3");
    }
}

void criterion8(Report& r)
{
    const std::size_t n = 2048;
    const CanonicalModel m{1.5, 0.8, RateFunction({0, 1}, {1, 2}), RateFunction::constant(1.3, 0, 1)};
    const GridDensity u0 = sample_to_grid([](double x) { return oracle::bump(x, 0.3, 0.8); },
                                          [](double x) { return oracle::bump(x, 0.2, 0.7); }, n);
    const double dt = 0.025;
    // Each run is measured against its own dt/4 reference, so the error is
    // C dt^2 (1 - 1/16) at both levels and the ratio tends to 4.
    const GridDensity u_dt = final_state(m, dt, 2, u0, 1.0);
    const GridDensity u_half = final_state(m, dt / 2, 2, u0, 1.0);
    const GridDensity u_quarter = final_state(m, dt / 4, 2, u0, 1.0);
    const GridDensity u_eighth = final_state(m, dt / 8, 2, u0, 1.0);
    const double e1 = l1_distance(u_dt, u_quarter);
    const double e2 = l1_distance(u_half, u_eighth);
    r.note("errors vs dt/4 reference: " + fmt(e1) + " (dt), " + fmt(e2) + " (dt/2)");
    // With one shared reference at dt/4 the ideal ratio is 5 instead.
    r.note("ratio with a shared dt/4 reference: " + fmt(e1 / l1_distance(u_half, u_quarter)));
    r.check(e1 / e2 >= 3.5 && e1 / e2 <= 4.5, "Strang error ratio", e1 / e2, "in [3.5, 4.5]");

    // Equilibrium residual: how far one unit of time moves the exact cell
    // averaged stationary density, with the step tied to the cell width
    // (boundary displacement of half a cell per step).
    for (const auto& model :
         {constant_model(1, 1, 2, 1),
          CanonicalModel{1.0, 2.0, RateFunction({0, 1}, {1, 2}), RateFunction::constant(1, 0, 1)}})
    {
        std::vector<double> res;
        for (std::size_t cells : {32u, 64u, 128u, 256u, 512u})
        {
            const auto eq = stationary_density(model, cells);
            const double step = 0.5 * cell_width(cells) / std::max(model.b, model.d);
            res.push_back(l1_distance(final_state(model, step, 2, eq.w, 1.0), eq.w));
        }
        std::ostringstream s;
        bool mono = true;
        for (std::size_t k = 0; k < res.size(); ++k)
        {
            s << fmt(res[k]) << ' ';
            if (k > 0 && !(res[k] < res[k - 1]))
                mono = false;
        }
        r.note("stationarity residuals n = 32..512: " + s.str());
        r.check(mono, "residual decreases with n", res.back(), "monotone");
    }
}

struct Criterion
{
    const char* title;
    double budget_s;
    std::function<void(Report&)> run;
};

const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> all{
        {"mass conservation over 2000 Strang steps", 10, criterion1},
        {"exact transport and resolvent oracles", 5, criterion2},
        {"resolvent as Laplace transform of T1", 30, criterion3},
        {"stationary density and relaxation", 60, criterion4},
        {"PDE and particle simulation agree", 120, criterion5},
        {"kernel domination, dual positivity, parameters", 120, criterion6},
        {"convergence to the rank-one projection", 300, criterion7},
        {"time and grid self-convergence", 120, criterion8},
    };
    return all;
}

bool run_one(int k)
{
    const Criterion& c = criteria()[k - 1];
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    try
    {
        c.run(r);
    }
    catch (const std::exception& e)
    {
        r.pass = false;
        r.detail << "    exception: " << e.what() << '\n';
    }
    const double secs = seconds_since(t0);
    r.check(secs < c.budget_s, "runtime [s]", secs, "< " + fmt(c.budget_s));
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << c.title << '\n' << r.detail.str();
    std::cout.flush();
    return r.pass;
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<int> which;
    if (argc > 1)
    {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > 8)
        {
            std::cerr << "usage: hgrn_acceptance [1-8]\n";
            return 2;
        }
        which.push_back(k);
    }
    else
        for (int k = 1; k <= 8; ++k)
            which.push_back(k);

    bool ok = true;
    for (int k : which)
        ok = run_one(k) && ok;
    return ok ? 0 : 1;
}

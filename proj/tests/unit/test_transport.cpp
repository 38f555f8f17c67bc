#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hgrn/errors.hpp"
#include "hgrn/transport.hpp"
#include "oracles.hpp"

using namespace hgrn;

namespace {

ScalarField ones(std::size_t n) { return ScalarField(n, 1.0); }

double mass(const ScalarField& f) { return l1_norm(f.values); }

std::vector<double> centers_of(std::size_t n, const oracle::Fn& f)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = f(cell_center(i, n));
    return v;
}

double sup(const ScalarField& f)
{
    double m = 0.0;
    for (double v : f.values)
        m = std::max(m, std::abs(v));
    return m;
}

} // namespace

//---------------------------------------------------------------------------//
// Semigroups
//---------------------------------------------------------------------------//

TEST(T1, ZeroTimeIsIdentity)
{
    std::mt19937_64 rng(1);
    const ScalarField f(oracle::random_cells(rng, 33));
    EXPECT_EQ(apply_T1(0.0, f).values, f.values);
    EXPECT_EQ(apply_T2(0.0, f).values, f.values);
}

TEST(T1, UniformAtLn2)
{
    const std::size_t n = 128;
    const ScalarField out = apply_T1(std::log(2.0), ones(n));
    for (std::size_t i = 0; i < n; ++i)
        EXPECT_NEAR(out[i], i < n / 2 ? 2.0 : 0.0, 1e-13);
    EXPECT_NEAR(mass(out), 1.0, 1e-14);
}

TEST(T1, LongTimeKeepsMassAtZero)
{
    const ScalarField out = apply_T1(10.0, ones(256));
    EXPECT_NEAR(mass(out), 1.0, 1e-12);
    EXPECT_NEAR(out[0] * out.width(), 1.0, 1e-12);
}

TEST(T2, UniformAtLn2)
{
    const std::size_t n = 128;
    const ScalarField out = apply_T2(std::log(2.0), ones(n));
    for (std::size_t i = 0; i < n; ++i)
        EXPECT_NEAR(out[i], i >= n / 2 ? 2.0 : 0.0, 1e-13);
}

TEST(T2, ReflectionSimilarity)
{
    std::mt19937_64 rng(2);
    const ScalarField f(oracle::random_cells(rng, 100));
    for (double t : {0.05, 0.7, 3.0})
        EXPECT_EQ(apply_T2(t, f).values, reflect(apply_T1(t, reflect(f))).values);
}

TEST(T2, MatchesDirectPushforward)
{
    // Independent of the reflection: push edges through x -> 1 - (1 - x) e^{-t}.
    std::mt19937_64 rng(3);
    const std::size_t n = 90;
    const ScalarField f(oracle::random_cells(rng, n));
    for (double t : {0.1, 1.3})
    {
        std::vector<double> edges(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            edges[i] = 1.0 - (1.0 - cell_edge(i, n)) * std::exp(-t);
        EXPECT_LT(oracle::linf(apply_T2(t, f).values, conservative_remap(f.values, edges, n)), 1e-12);
    }
}

TEST(T1, NegativeTimeThrows)
{
    EXPECT_THROW(apply_T1(-1e-3, ones(4)), NegativeTime);
    EXPECT_THROW(apply_T2(-1.0, ones(4)), NegativeTime);
}

TEST(T1, MatchesFormulaForSmoothData)
{
    // T1(t) f(x) = e^t f(x e^t) for x <= e^{-t}.
    const std::size_t n = 512;
    auto f = [](double x) { return 1.0 + std::sin(3.0 * x); };
    const double t = 0.4;
    const ScalarField out = apply_T1(t, ScalarField(oracle::cell_averages(f, n)));
    const auto expected = oracle::cell_averages(
        [&](double x) { return x <= std::exp(-t) ? std::exp(t) * f(x * std::exp(t)) : 0.0; }, n);
    EXPECT_LT(oracle::l1(out.values, expected), 1e-4);
}

TEST(T1, Stochasticity)
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial)
    {
        const ScalarField f(oracle::random_cells(rng, 64 + 13 * trial, 0.0, 5.0));
        for (double t : {0.1, 1.0, 5.0})
        {
            EXPECT_NEAR(mass(apply_T1(t, f)) / mass(f), 1.0, 1e-12);
            EXPECT_NEAR(mass(apply_T2(t, f)) / mass(f), 1.0, 1e-12);
        }
    }
}

TEST(T1, SemigroupLawOnDyadicTimes)
{
    // With e^{-t} a power of two every source cell lands inside whole target
    // cells, so composition is exact for arbitrary data.
    std::mt19937_64 rng(5);
    const double l2 = std::log(2.0);
    for (std::size_t n : {64, 256, 1024})
    {
        const ScalarField f(oracle::random_cells(rng, n));
        for (auto [s, t] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{3, 2}})
        {
            EXPECT_LT(oracle::linf(apply_T1(s * l2, apply_T1(t * l2, f)).values, apply_T1((s + t) * l2, f).values),
                      1e-10);
            EXPECT_LT(oracle::linf(apply_T2(s * l2, apply_T2(t * l2, f)).values, apply_T2((s + t) * l2, f).values),
                      1e-10);
        }
    }
}

TEST(T1, SemigroupLawSecondOrderForSmoothData)
{
    // Off the dyadic times composition re-reconstructs; for smooth data that
    // vanish at the outflow edge the defect shrinks like h^2.
    auto f = [](double x) { return (1 - x) * (1 - x) * (1 + std::sin(3 * x)); };
    std::vector<double> err;
    for (std::size_t n : {128, 256, 512, 1024})
    {
        const ScalarField u(sample_to_grid(f, n));
        err.push_back(oracle::l1(apply_T1(0.3, apply_T1(0.7, u)).values, apply_T1(1.0, u).values));
    }
    for (std::size_t k = 1; k < err.size(); ++k)
        EXPECT_GT(err[k - 1] / err[k], 3.0) << "n index " << k;
    EXPECT_LT(err.back(), 1e-6);
}

//---------------------------------------------------------------------------//
// Reflection
//---------------------------------------------------------------------------//

TEST(Reflect, Involution)
{
    std::mt19937_64 rng(6);
    const ScalarField f(oracle::random_cells(rng, 77));
    EXPECT_EQ(reflect(reflect(f)).values, f.values);
    EXPECT_EQ(mass(reflect(f)), mass(f));
}

TEST(Reflect, FirstCellToLast)
{
    ScalarField f(16, 0.0);
    f[0] = 1.0;
    const ScalarField r = reflect(f);
    EXPECT_EQ(r[15], 1.0);
    EXPECT_EQ(mass(r), mass(f));
}

//---------------------------------------------------------------------------//
// Resolvents
//---------------------------------------------------------------------------//

TEST(ResolventC1, LambdaTwoOnOne)
{
    const std::size_t n = 256;
    const ScalarField r = resolvent_C1(2.0, ones(n));
    EXPECT_LT(oracle::linf(r.values, centers_of(n, [](double x) { return 1.0 - x; })), 1e-10);
}

TEST(ResolventC1, LambdaOneIsLogarithm)
{
    const std::size_t n = 128;
    const ScalarField r = resolvent_C1(1.0, ones(n));
    // Cell average of -ln x over [a, b] is (b - b ln b - a + a ln a) / h.
    auto antider = [](double x) { return x == 0.0 ? 0.0 : x - x * std::log(x); };
    for (std::size_t i = 0; i < n; ++i)
    {
        const double expected = (antider(cell_edge(i + 1, n)) - antider(cell_edge(i, n))) * n;
        EXPECT_NEAR(r[i], expected, 1e-12 * std::max(1.0, expected));
    }
}

TEST(ResolventC1, MassOfResolventOfOne)
{
    for (double lambda : {1.0, 2.0, 5.0})
        EXPECT_NEAR(mass(resolvent_C1(lambda, ones(256))), 1.0 / lambda, 1e-8);
}

TEST(ResolventC1, SmallLambdaEndpointSingularity)
{
    // lambda < 1: x^{lambda-1} is singular at 0 but the cell average is
    // finite. For f = 1, R f = (x^{lambda-1} - 1) / (1 - lambda).
    const double lambda = 0.3;
    const std::size_t n = 64;
    const ScalarField r = resolvent_C1(lambda, ones(n));
    auto antider = [&](double x) { return (std::pow(x, lambda) / lambda - x) / (1.0 - lambda); };
    for (std::size_t i = 0; i < n; ++i)
    {
        const double expected = (antider(cell_edge(i + 1, n)) - antider(cell_edge(i, n))) * n;
        EXPECT_NEAR(r[i], expected, 1e-11 * std::max(1.0, expected));
    }
}

TEST(ResolventC1, MatchesKernelForSmoothData)
{
    const std::size_t n = 256;
    auto f = [](double y) { return 1.0 + y * y; };
    const double lambda = 1.7;
    const ScalarField r = resolvent_C1(lambda, ScalarField(oracle::cell_averages(f, n)));
    // Inner integral in closed form: int_x^1 (y^-l + y^{2-l}) dy.
    auto inner = [&](double x) {
        return (1.0 - std::pow(x, 1.0 - lambda)) / (1.0 - lambda) + (1.0 - std::pow(x, 3.0 - lambda)) / (3.0 - lambda);
    };
    const auto expected = oracle::cell_averages(
        [&](double x) { return x == 0.0 ? 1.0 / (lambda - 1.0) : std::pow(x, lambda - 1.0) * inner(x); }, n, 1e-12);
    EXPECT_LT(oracle::l1(r.values, expected), 1e-6);
}

TEST(ResolventC1, NonpositiveLambdaThrows)
{
    EXPECT_THROW(resolvent_C1(0.0, ones(8)), NonpositiveLambda);
    EXPECT_THROW(resolvent_C2(-1.0, ones(8)), NonpositiveLambda);
    EXPECT_THROW(dual_resolvent_C1(0.0, ones(8)), NonpositiveLambda);
    EXPECT_THROW(dual_resolvent_C2(-2.0, ones(8)), NonpositiveLambda);
}

TEST(ResolventC2, LambdaTwoOnOne)
{
    const std::size_t n = 256;
    const ScalarField r = resolvent_C2(2.0, ones(n));
    EXPECT_LT(oracle::linf(r.values, centers_of(n, [](double x) { return x; })), 1e-10);
}

TEST(ResolventC2, ReflectionSimilarity)
{
    std::mt19937_64 rng(7);
    const ScalarField f(oracle::random_cells(rng, 128));
    for (double lambda : {0.5, 2.0, 7.0})
        EXPECT_LT(oracle::linf(resolvent_C2(lambda, f).values, reflect(resolvent_C1(lambda, reflect(f))).values),
                  1e-12);
}

TEST(ResolventC2, LambdaOneIsLogarithm)
{
    const std::size_t n = 128;
    const ScalarField r = resolvent_C2(1.0, ones(n));
    auto antider = [](double x) { return x == 1.0 ? 0.0 : -((1 - x) - (1 - x) * std::log(1 - x)); };
    for (std::size_t i = 0; i < n; ++i)
    {
        const double expected = (antider(cell_edge(i + 1, n)) - antider(cell_edge(i, n))) * n;
        EXPECT_NEAR(r[i], expected, 1e-12 * std::max(1.0, expected));
    }
}

TEST(Resolvent, LaplaceConsistency)
{
    // R(l, C1) f = int_0^T e^{-l t} T1(t) f dt with T = 40 / l, trapezoid.
    const std::size_t n = 128;
    const ScalarField f = ones(n);
    for (double lambda : {1.0, 2.0, 5.0})
    {
        const double T = 40.0 / lambda;
        const std::size_t panels = 8000;
        const double dt = T / panels;
        std::vector<double> acc(n, 0.0);
        for (std::size_t k = 0; k <= panels; ++k)
        {
            const double t = k * dt;
            const double w = (k == 0 || k == panels ? 0.5 : 1.0) * dt * std::exp(-lambda * t);
            const ScalarField s = apply_T1(t, f);
            for (std::size_t i = 0; i < n; ++i)
                acc[i] += w * s[i];
        }
        EXPECT_LT(oracle::l1(acc, resolvent_C1(lambda, f).values), 1e-4) << "lambda " << lambda;
    }
}

TEST(Resolvent, ResolventIdentity)
{
    // (l - m) R(l) R(m) f = R(m) f - R(l) f. With f = x^2 the intermediate
    // R(1, C1) f = (1 - x^2) / 2 is smooth, so the discrete identity is
    // accurate; C2 gets the mirrored data (1 - x)^2.
    const std::size_t n = 256;
    const double l = 3.0, m = 1.0;
    const ScalarField f(sample_to_grid([](double x) { return x * x; }, n));
    for (auto op : {&resolvent_C1, &resolvent_C2})
    {
        const ScalarField g = op == &resolvent_C1 ? f : reflect(f);
        const ScalarField lhs = op(l, op(m, g));
        const ScalarField rm = op(m, g), rl = op(l, g);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            a[i] = (l - m) * lhs[i];
            b[i] = rm[i] - rl[i];
        }
        EXPECT_LT(oracle::l1(a, b), 1e-8);
    }
}

TEST(Resolvent, ContractionBound)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial)
    {
        const ScalarField f(oracle::random_cells(rng, 64));
        for (double lambda : {0.4, 1.0, 3.0})
        {
            EXPECT_LE(mass(resolvent_C1(lambda, f)), mass(f) / lambda * (1 + 1e-10));
            EXPECT_LE(mass(resolvent_C2(lambda, f)), mass(f) / lambda * (1 + 1e-10));
        }
    }
}

TEST(Resolvent, PositivityOfAllFour)
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial)
    {
        ScalarField f(oracle::random_cells(rng, 48));
        // Sparse data stress the clipping paths.
        for (std::size_t i = 0; i < f.cells(); ++i)
            if (i % 5 != static_cast<std::size_t>(trial % 5))
                f[i] = 0.0;
        for (double lambda : {0.3, 1.0, 4.0, 25.0})
        {
            for (const ScalarField& r : {resolvent_C1(lambda, f), resolvent_C2(lambda, f),
                                         dual_resolvent_C1(lambda, f), dual_resolvent_C2(lambda, f)})
                for (double v : r.values)
                    EXPECT_GE(v, 0.0);
        }
    }
}

//---------------------------------------------------------------------------//
// Dual resolvents
//---------------------------------------------------------------------------//

TEST(DualResolvent, OneMapsToOneOverLambda)
{
    for (double lambda : {0.5, 1.0, 2.0, 10.0})
    {
        for (double v : dual_resolvent_C1(lambda, ones(100)).values)
            EXPECT_NEAR(v, 1.0 / lambda, 1e-14);
        for (double v : dual_resolvent_C2(lambda, ones(100)).values)
            EXPECT_NEAR(v, 1.0 / lambda, 1e-14);
    }
}

TEST(DualResolvent, DualityPairingOnOne)
{
    const std::size_t n = 256;
    for (auto [op, dual] : {std::pair{&resolvent_C1, &dual_resolvent_C1}, std::pair{&resolvent_C2, &dual_resolvent_C2}})
    {
        const double lhs = mass(op(2.0, ones(n)));
        const double rhs = mass(dual(2.0, ones(n)));
        EXPECT_NEAR(lhs, 0.5, 1e-8);
        EXPECT_NEAR(rhs, 0.5, 1e-8);
    }
}

TEST(DualResolvent, DualityAgainstPiecewiseConstantG)
{
    // <R 1, g> = <1, R' g> exactly for piecewise-constant g.
    std::mt19937_64 rng(10);
    const std::size_t n = 128;
    for (double lambda : {0.7, 2.0, 6.0})
    {
        const ScalarField g(oracle::random_cells(rng, n));
        for (auto [op, dual] :
             {std::pair{&resolvent_C1, &dual_resolvent_C1}, std::pair{&resolvent_C2, &dual_resolvent_C2}})
        {
            const ScalarField r = op(lambda, ones(n));
            double lhs = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                lhs += r[i] * g[i] / n;
            EXPECT_NEAR(lhs, mass(dual(lambda, g)), 1e-8);
        }
    }
}

TEST(DualResolvent, IndicatorLambdaOne)
{
    // g = 1 on [0, 1/4]: R(1, C1') g (y) = min(y, 1/4) / y.
    const std::size_t n = 64;
    ScalarField g(n, 0.0);
    for (std::size_t i = 0; i < n / 4; ++i)
        g[i] = 1.0;
    EXPECT_NEAR(dual_resolvent_C1_at(1.0, g, 0.5), 0.5, 1e-14);
    EXPECT_NEAR(dual_resolvent_C1_at(1.0, g, 0.1), 1.0, 1e-14);
    const auto expected = oracle::cell_averages([](double y) { return std::min(y, 0.25) / y; }, n);
    EXPECT_LT(oracle::linf(dual_resolvent_C1(1.0, g).values, expected), 1e-12);
    EXPECT_NEAR(dual_resolvent_C2_at(1.0, reflect(g), 0.5), 0.5, 1e-14);
}

TEST(DualResolvent, SupNormBound)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial)
    {
        const ScalarField g(oracle::random_cells(rng, 40, 0.0, 3.0));
        for (double lambda : {0.5, 2.0, 9.0})
        {
            EXPECT_LE(sup(dual_resolvent_C1(lambda, g)), sup(g) / lambda * (1 + 1e-12));
            EXPECT_LE(sup(dual_resolvent_C2(lambda, g)), sup(g) / lambda * (1 + 1e-12));
        }
    }
}

TEST(DualResolvent, ReflectionIdentity)
{
    std::mt19937_64 rng(12);
    const ScalarField g(oracle::random_cells(rng, 96));
    EXPECT_LT(oracle::linf(dual_resolvent_C2(3.0, g).values, reflect(dual_resolvent_C1(3.0, reflect(g))).values),
              1e-12);
}

TEST(DualResolvent, PointValuesMatchCellAverages)
{
    std::mt19937_64 rng(13);
    const std::size_t n = 32;
    const ScalarField g(oracle::random_cells(rng, n));
    const double lambda = 2.5;
    const ScalarField cells = dual_resolvent_C1(lambda, g);
    for (std::size_t i = 1; i < n; ++i)
    {
        const double avg = oracle::integrate([&](double y) { return dual_resolvent_C1_at(lambda, g, y); },
                                             cell_edge(i, n), cell_edge(i + 1, n), 1e-15)
                           * n;
        EXPECT_NEAR(cells[i], avg, 1e-11);
    }
    EXPECT_THROW(dual_resolvent_C1_at(lambda, g, 1.5), DomainError);
}

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hgrn/coupling.hpp"
#include "hgrn/errors.hpp"
#include "oracles.hpp"

using namespace hgrn;

namespace {

SwitchingMatrixField random_field(std::mt19937_64& rng, std::size_t n)
{
    return {oracle::random_cells(rng, n, 0.01, 5.0), oracle::random_cells(rng, n, 0.01, 5.0)};
}

} // namespace

TEST(ApplyB, Examples)
{
    const auto f11 = SwitchingMatrixField::constant(1.0, 1.0, 4);
    const GridDensity zero = GridDensity::zeros(4);
    EXPECT_EQ(apply_B(f11, zero).comp1, zero.comp1);

    const GridDensity ones{std::vector<double>(4, 1.0), std::vector<double>(4, 1.0)};
    const GridDensity r = apply_B(f11, ones);
    for (std::size_t i = 0; i < 4; ++i)
    {
        EXPECT_EQ(r.comp1[i], 0.0);
        EXPECT_EQ(r.comp2[i], 0.0);
    }

    const auto f23 = SwitchingMatrixField::constant(2.0, 3.0, 1);
    const GridDensity e1{{1.0}, {0.0}};
    const GridDensity out = apply_B(f23, e1);
    EXPECT_EQ(out.comp1[0], -2.0);
    EXPECT_EQ(out.comp2[0], 2.0);
}

TEST(ApplyB, SizeMismatch)
{
    EXPECT_THROW(apply_B(SwitchingMatrixField::constant(1, 1, 3), GridDensity::zeros(4)), SizeMismatch);
    EXPECT_THROW(exp_B(SwitchingMatrixField::constant(1, 1, 3), 0.1, GridDensity::zeros(4)), SizeMismatch);
}

TEST(ApplyB, ColumnsSumToZero)
{
    std::mt19937_64 rng(1);
    const auto field = random_field(rng, 50);
    const GridDensity u{oracle::random_cells(rng, 50), oracle::random_cells(rng, 50)};
    const GridDensity r = apply_B(field, u);
    for (std::size_t i = 0; i < 50; ++i)
        EXPECT_NEAR(r.comp1[i] + r.comp2[i], 0.0, 1e-14);
}

TEST(ExpB, ZeroTimeIsIdentity)
{
    std::mt19937_64 rng(2);
    const auto field = random_field(rng, 20);
    const GridDensity u{oracle::random_cells(rng, 20), oracle::random_cells(rng, 20)};
    const GridDensity r = exp_B(field, 0.0, u);
    EXPECT_EQ(r.comp1, u.comp1);
    EXPECT_EQ(r.comp2, u.comp2);
}

TEST(ExpB, ClosedFormMatchesRk4)
{
    const auto field = SwitchingMatrixField::constant(1.0, 1.0, 1);
    for (double t : {0.1, 0.5, 2.0})
    {
        const GridDensity r = exp_B(field, t, GridDensity{{1.0}, {0.0}});
        EXPECT_NEAR(r.comp1[0], 0.5 + 0.5 * std::exp(-2 * t), 1e-15);
        EXPECT_NEAR(r.comp2[0], 0.5 - 0.5 * std::exp(-2 * t), 1e-15);
        const auto y = oracle::rk4(
            [](const std::array<double, 2>& v) { return std::array<double, 2>{-v[0] + v[1], v[0] - v[1]}; },
            {1.0, 0.0}, t, 1e-4);
        EXPECT_NEAR(r.comp1[0], y[0], 1e-13);
        EXPECT_NEAR(r.comp2[0], y[1], 1e-13);
    }
}

TEST(ExpB, RandomRatesMatchRk4)
{
    std::mt19937_64 rng(3);
    const auto field = random_field(rng, 8);
    const GridDensity u{oracle::random_cells(rng, 8), oracle::random_cells(rng, 8)};
    const double t = 0.37;
    const GridDensity r = exp_B(field, t, u);
    for (std::size_t i = 0; i < 8; ++i)
    {
        const double nu = field.nu[i], mu = field.mu[i];
        const auto y = oracle::rk4(
            [&](const std::array<double, 2>& v) {
                return std::array<double, 2>{-nu * v[0] + mu * v[1], nu * v[0] - mu * v[1]};
            },
            {u.comp1[i], u.comp2[i]}, t, 1e-4);
        EXPECT_NEAR(r.comp1[i], y[0], 1e-12);
        EXPECT_NEAR(r.comp2[i], y[1], 1e-12);
    }
}

TEST(ExpB, CellwiseMassInvariant)
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto field = random_field(rng, 30);
        const GridDensity u{oracle::random_cells(rng, 30, -1, 1), oracle::random_cells(rng, 30, -1, 1)};
        const double t = 0.01 + trial * 0.5;
        const GridDensity r = exp_B(field, t, u);
        for (std::size_t i = 0; i < 30; ++i)
            EXPECT_NEAR(r.comp1[i] + r.comp2[i], u.comp1[i] + u.comp2[i], 1e-15 * 4);
    }
}

TEST(ExpB, SemigroupLaw)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto field = random_field(rng, 16);
        const GridDensity u{oracle::random_cells(rng, 16), oracle::random_cells(rng, 16)};
        const double s = 0.1 * trial, t = 0.05 + 0.3 * trial;
        const GridDensity a = exp_B(field, s, exp_B(field, t, u));
        const GridDensity b = exp_B(field, s + t, u);
        EXPECT_LT(oracle::linf(a.comp1, b.comp1), 1e-13);
        EXPECT_LT(oracle::linf(a.comp2, b.comp2), 1e-13);
    }
}

TEST(ExpB, Positivity)
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial)
    {
        const auto field = random_field(rng, 16);
        GridDensity u{oracle::random_cells(rng, 16), oracle::random_cells(rng, 16)};
        u.comp1[trial % 16] = 0.0;
        u.comp2[(trial * 3) % 16] = 0.0;
        const GridDensity r = exp_B(field, 1e-3 + 0.2 * trial, u);
        for (std::size_t i = 0; i < 16; ++i)
        {
            EXPECT_GE(r.comp1[i], 0.0);
            EXPECT_GE(r.comp2[i], 0.0);
        }
    }
}

TEST(ExpB, DerivativeAtZeroIsGenerator)
{
    std::mt19937_64 rng(7);
    const auto field = random_field(rng, 12);
    const GridDensity u{oracle::random_cells(rng, 12), oracle::random_cells(rng, 12)};
    const double h = 1e-6;
    const GridDensity e = exp_B(field, h, u);
    const GridDensity b = apply_B(field, u);
    for (std::size_t i = 0; i < 12; ++i)
    {
        EXPECT_NEAR((e.comp1[i] - u.comp1[i]) / h, b.comp1[i], 1e-4);
        EXPECT_NEAR((e.comp2[i] - u.comp2[i]) / h, b.comp2[i], 1e-4);
    }
}

TEST(ExpB, NegativeTimeThrows)
{
    EXPECT_THROW(exp_B(SwitchingMatrixField::constant(1, 1, 2), -0.1, GridDensity::zeros(2)), NegativeTime);
}

TEST(SwitchingField, CollocatesAtCellCenters)
{
    CanonicalModel m;
    m.nu = RateFunction({0, 1}, {1, 3});
    m.mu = RateFunction({0, 0.5, 1}, {2, 1, 2});
    const auto field = SwitchingMatrixField::from_model(m, 4);
    ASSERT_EQ(field.cells(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
    {
        const double x = cell_center(i, 4);
        EXPECT_DOUBLE_EQ(field.nu[i], 1 + 2 * x);
        EXPECT_DOUBLE_EQ(field.mu[i], m.mu(x));
    }
}

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace hgrn {

//---------------------------------------------------------------------------//
// Uniform cell-averaged fields on [0,1]. Cell i is [i h, (i+1) h], h = 1/n.
//---------------------------------------------------------------------------//

inline double cell_width(std::size_t n) { return 1.0 / static_cast<double>(n); }
inline double cell_center(std::size_t i, std::size_t n)
{
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}
inline double cell_edge(std::size_t i, std::size_t n)
{
    return static_cast<double>(i) / static_cast<double>(n);
}

//! Single-component grid function (L1 density or L-infinity test function).
struct ScalarField
{
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(std::vector<double> v) : values(std::move(v)) {}
    ScalarField(std::size_t n, double fill) : values(n, fill) {}

    std::size_t cells() const { return values.size(); }
    double width() const { return cell_width(values.size()); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

//! Two-component cell-averaged L1 density; the norm is |f1|_1 + |f2|_1.
struct GridDensity
{
    std::vector<double> comp1;
    std::vector<double> comp2;

    static GridDensity zeros(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }

    std::size_t cells() const { return comp1.size(); }
    double width() const { return cell_width(comp1.size()); }
};

//! Two-component L-infinity grid function paired against GridDensity.
struct DualGridFunction
{
    std::vector<double> comp1;
    std::vector<double> comp2;

    static DualGridFunction ones(std::size_t n) { return {std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)}; }
    static DualGridFunction zeros(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }

    std::size_t cells() const { return comp1.size(); }
};

double l1_norm(std::span<const double> cells);
double l1_norm(const GridDensity& f);

//! Signed total mass h * sum(u1 + u2).
double mass(const GridDensity& f);

double sup_norm(const DualGridFunction& g);

//! h * sum(f1 g1 + f2 g2). Throws SizeMismatch.
double pair(const GridDensity& f, const DualGridFunction& g);

//! L1 distance between two densities on the same grid.
double l1_distance(const GridDensity& f, const GridDensity& g);

//! Cell averages by 3-point Gauss-Legendre per cell.
std::vector<double> sample_to_grid(const std::function<double(double)>& fun, std::size_t n);
GridDensity sample_to_grid(const std::function<double(double)>& fun1,
                           const std::function<double(double)>& fun2,
                           std::size_t n);

//---------------------------------------------------------------------------//
// Reconstruction and conservative remapping
//---------------------------------------------------------------------------//

enum class Reconstruction
{
    piecewise_constant,
    piecewise_linear, //!< MC-limited slopes, clipped so no cell changes sign
};

/*!
 * Limited slopes (per unit x) for the piecewise-linear reconstruction.
 *
 * Interior cells use the monotonized-central limiter; the two boundary cells
 * use a one-sided second-order difference limited against twice the one-sided
 * first difference. Every slope is finally clipped so the linear profile keeps
 * the sign of the cell average, which makes remapping positivity preserving.
 * The limiter reproduces linear data exactly (and quadratic data away from
 * extrema).
 */
std::vector<double> limited_slopes(std::span<const double> values);

/*!
 * Pushes a cell-averaged field forward under a monotone map.
 *
 * `mapped_edges[i]` is the image of source edge i/n (n = values.size()); the
 * map is linear between edges. Mass in each source cell is distributed
 * according to the reconstruction and deposited exactly on the uniform
 * `n_out`-cell target grid. Mass mapped below 0 or above 1 is collected in the
 * first or last target cell, so the total is conserved to round-off.
 *
 * Throws NonMonotoneMap if the edges decrease and SizeMismatch if there are
 * not n + 1 edges.
 */
std::vector<double> conservative_remap(std::span<const double> values,
                                       std::span<const double> mapped_edges,
                                       std::size_t n_out,
                                       Reconstruction recon = Reconstruction::piecewise_linear);

//---------------------------------------------------------------------------//
// CSV: x_center,comp1,comp2 with a header row. Reading skips leading
// comment lines that start with "#".
//---------------------------------------------------------------------------//
void write_density_csv(std::ostream& os, const GridDensity& f);
GridDensity read_density_csv(std::istream& is);

} // namespace hgrn

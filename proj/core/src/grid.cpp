#include "hgrn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "hgrn/csv.hpp"
#include "hgrn/errors.hpp"

namespace hgrn {

namespace {

void require_same_size(std::size_t a, std::size_t b)
{
    if (a != b)
        throw SizeMismatch(a, b);
}

double minmod(double a, double b)
{
    if (a > 0.0 && b > 0.0)
        return std::min(a, b);
    if (a < 0.0 && b < 0.0)
        return std::max(a, b);
    return 0.0;
}

double minmod3(double a, double b, double c) { return minmod(a, minmod(b, c)); }

} // namespace

double l1_norm(std::span<const double> cells)
{
    double s = 0.0;
    for (double v : cells)
        s += std::abs(v);
    return s * cell_width(cells.size());
}

double l1_norm(const GridDensity& f)
{
    require_same_size(f.comp1.size(), f.comp2.size());
    return l1_norm(f.comp1) + l1_norm(f.comp2);
}

double mass(const GridDensity& f)
{
    require_same_size(f.comp1.size(), f.comp2.size());
    double s = 0.0;
    for (std::size_t i = 0; i < f.comp1.size(); ++i)
        s += f.comp1[i] + f.comp2[i];
    return s * f.width();
}

double sup_norm(const DualGridFunction& g)
{
    double s = 0.0;
    for (double v : g.comp1)
        s = std::max(s, std::abs(v));
    for (double v : g.comp2)
        s = std::max(s, std::abs(v));
    return s;
}

double pair(const GridDensity& f, const DualGridFunction& g)
{
    require_same_size(f.comp1.size(), g.comp1.size());
    require_same_size(f.comp2.size(), g.comp2.size());
    double s = 0.0;
    for (std::size_t i = 0; i < f.comp1.size(); ++i)
        s += f.comp1[i] * g.comp1[i] + f.comp2[i] * g.comp2[i];
    return s * f.width();
}

double l1_distance(const GridDensity& f, const GridDensity& g)
{
    require_same_size(f.cells(), g.cells());
    double s = 0.0;
    for (std::size_t i = 0; i < f.cells(); ++i)
        s += std::abs(f.comp1[i] - g.comp1[i]) + std::abs(f.comp2[i] - g.comp2[i]);
    return s * f.width();
}

std::vector<double> sample_to_grid(const std::function<double(double)>& fun, std::size_t n)
{
    // 3-point Gauss-Legendre on [-1, 1].
    static const double node = std::sqrt(3.0 / 5.0);
    static const double w_outer = 5.0 / 9.0;
    static const double w_center = 8.0 / 9.0;

    const double h = cell_width(n);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double c = cell_center(i, n);
        const double r = 0.5 * h;
        out[i] = 0.5 * (w_outer * fun(c - r * node) + w_center * fun(c) + w_outer * fun(c + r * node));
    }
    return out;
}

GridDensity sample_to_grid(const std::function<double(double)>& fun1,
                           const std::function<double(double)>& fun2,
                           std::size_t n)
{
    return {sample_to_grid(fun1, n), sample_to_grid(fun2, n)};
}

std::vector<double> limited_slopes(std::span<const double> v)
{
    const std::size_t n = v.size();
    std::vector<double> slope(n, 0.0);
    if (n < 2)
        return slope;
    const double h = cell_width(n);

    if (n == 2)
    {
        slope[0] = slope[1] = (v[1] - v[0]) / h;
    }
    else
    {
        for (std::size_t i = 1; i + 1 < n; ++i)
        {
            const double left = (v[i] - v[i - 1]) / h;
            const double right = (v[i + 1] - v[i]) / h;
            const double central = 0.5 * (v[i + 1] - v[i - 1]) / h;
            slope[i] = minmod3(central, 2.0 * left, 2.0 * right);
        }
        const double s0 = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        slope[0] = minmod(s0, 2.0 * (v[1] - v[0]) / h);
        const double sn = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
        slope[n - 1] = minmod(sn, 2.0 * (v[n - 1] - v[n - 2]) / h);
    }

    // Keep the sign of the cell average across the whole cell.
    for (std::size_t i = 0; i < n; ++i)
    {
        const double bound = 2.0 * std::abs(v[i]) / h;
        slope[i] = std::clamp(slope[i], -bound, bound);
    }
    return slope;
}

std::vector<double> conservative_remap(std::span<const double> values,
                                       std::span<const double> mapped_edges,
                                       std::size_t n_out,
                                       Reconstruction recon)
{
    const std::size_t n = values.size();
    if (mapped_edges.size() != n + 1)
        throw SizeMismatch(mapped_edges.size(), n + 1);
    for (std::size_t i = 0; i < n; ++i)
        if (mapped_edges[i + 1] < mapped_edges[i])
            throw NonMonotoneMap(i + 1);

    const double h = cell_width(n);
    std::vector<double> slope = recon == Reconstruction::piecewise_linear
                                    ? limited_slopes(values)
                                    : std::vector<double>(n, 0.0);

    // prefix[i] = integral of the reconstruction over [0, i h].
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + values[i] * h;

    // Cumulative mass of the pushforward up to the target point p.
    auto cumulative = [&](double p) {
        auto it = std::upper_bound(mapped_edges.begin(), mapped_edges.end(), p);
        if (it == mapped_edges.begin())
            return 0.0;
        const auto k = static_cast<std::size_t>(it - mapped_edges.begin()) - 1;
        if (k >= n)
            return prefix[n];
        // mapped_edges[k] <= p < mapped_edges[k + 1]
        const double frac = (p - mapped_edges[k]) / (mapped_edges[k + 1] - mapped_edges[k]);
        const double delta = frac * h;
        return prefix[k] + delta * (values[k] + 0.5 * slope[k] * (delta - h));
    };

    // For nonnegative data the cumulative mass is nondecreasing; enforcing it
    // removes round-off negatives of order 1e-19 without touching the total.
    const bool nonnegative = std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0; });

    const double h_out = cell_width(n_out);
    std::vector<double> out(n_out);
    double previous = 0.0;
    for (std::size_t j = 0; j < n_out; ++j)
    {
        double next = (j + 1 == n_out) ? prefix[n] : cumulative(cell_edge(j + 1, n_out));
        if (nonnegative)
            next = std::max(next, previous);
        out[j] = (next - previous) / h_out;
        previous = next;
    }
    return out;
}

void write_density_csv(std::ostream& os, const GridDensity& f)
{
    write_csv_row(os, {"x_center", "comp1", "comp2"});
    const std::size_t n = f.cells();
    for (std::size_t i = 0; i < n; ++i)
        write_csv_row(os, {format_double(cell_center(i, n)), format_double(f.comp1[i]),
                           format_double(f.comp2[i])});
}

GridDensity read_density_csv(std::istream& is)
{
    std::string line;
    std::size_t row = 0;
    // Leading "#" lines carry run metadata.
    do
    {
        if (!std::getline(is, line))
            throw DomainError("density CSV is empty");
        ++row;
    } while (!line.empty() && line[0] == '#');
    auto header = split_csv_row(line);
    if (header.size() != 3 || header[0] != "x_center" || header[1] != "comp1" || header[2] != "comp2")
        throw DomainError("density CSV header must be x_center,comp1,comp2");
    GridDensity f;
    while (std::getline(is, line))
    {
        ++row;
        if (line.empty() || line == "\r")
            continue;
        auto fields = split_csv_row(line);
        if (fields.size() != 3)
            throw DomainError("density CSV row " + std::to_string(row) + " needs 3 fields");
        try
        {
            f.comp1.push_back(std::stod(fields[1]));
            f.comp2.push_back(std::stod(fields[2]));
        }
        catch (const std::exception&)
        {
            throw DomainError("density CSV row " + std::to_string(row) + " is not numeric");
        }
    }
    if (f.comp1.empty())
        throw DomainError("density CSV has no data rows");
    return f;
}

} // namespace hgrn

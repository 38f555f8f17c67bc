#include "hgrn/model.hpp"

#include <algorithm>
#include <cmath>

#include "hgrn/errors.hpp"

namespace hgrn {

//---------------------------------------------------------------------------//
// PiecewiseLinear
//---------------------------------------------------------------------------//

PiecewiseLinear::PiecewiseLinear(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values))
{
    if (nodes_.size() != values_.size())
        throw RateError("table has " + std::to_string(nodes_.size()) + " nodes but "
                            + std::to_string(values_.size()) + " values",
                        std::min(nodes_.size(), values_.size()));
    if (nodes_.size() < 2)
        throw RateError("table needs at least two nodes", nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k)
    {
        if (!std::isfinite(nodes_[k]) || !std::isfinite(values_[k]))
            throw RateError("table entry is not finite", k);
        if (k > 0 && !(nodes_[k] > nodes_[k - 1]))
            throw RateError("table nodes must be strictly increasing", k);
    }
}

PiecewiseLinear PiecewiseLinear::constant(double value, double lower, double upper)
{
    return PiecewiseLinear({lower, upper}, {value, value});
}

double PiecewiseLinear::operator()(double x) const
{
    if (x <= nodes_.front())
        return values_.front();
    if (x >= nodes_.back())
        return values_.back();
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const auto k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    if (x == nodes_[k])
        return values_[k];
    const double t = (x - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
    return values_[k] + t * (values_[k + 1] - values_[k]);
}

double PiecewiseLinear::integral(double lo, double hi) const
{
    lo = std::max(lo, nodes_.front());
    hi = std::min(hi, nodes_.back());
    if (!(hi > lo))
        return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < nodes_.size(); ++k)
    {
        const double a = std::max(lo, nodes_[k]);
        const double b = std::min(hi, nodes_[k + 1]);
        if (b <= a)
            continue;
        s += 0.5 * (b - a) * ((*this)(a) + (*this)(b));
    }
    return s;
}

double PiecewiseLinear::min() const { return *std::min_element(values_.begin(), values_.end()); }
double PiecewiseLinear::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool PiecewiseLinear::is_constant() const
{
    return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
}

//---------------------------------------------------------------------------//
// Validation and canonical form
//---------------------------------------------------------------------------//

namespace {

constexpr double degenerate_length = 1e-12;

void check_rate(const RateFunction& rate, const char* name, double lo, double hi)
{
    const auto values = rate.values();
    for (std::size_t k = 0; k < values.size(); ++k)
        if (!(values[k] > 0.0))
            throw RateError(std::string(name) + " must be strictly positive", k);
    const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (rate.lower() > lo + tol)
        throw RateError(std::string(name) + " table starts after the state interval", 0);
    if (rate.upper() < hi - tol)
        throw RateError(std::string(name) + " table ends before the state interval",
                        rate.nodes().size() - 1);
}

RateFunction remap_rate(const RateFunction& rate, double lo, double length)
{
    std::vector<double> nodes{0.0};
    std::vector<double> values{rate(lo)};
    for (std::size_t k = 0; k < rate.nodes().size(); ++k)
    {
        const double x = (rate.nodes()[k] - lo) / length;
        if (x > 0.0 && x < 1.0)
        {
            nodes.push_back(x);
            values.push_back(rate.values()[k]);
        }
    }
    nodes.push_back(1.0);
    values.push_back(rate(lo + length));
    return RateFunction(std::move(nodes), std::move(values));
}

} // namespace

void validate(const RawModel& raw)
{
    if (!(raw.b > 0.0) || !std::isfinite(raw.b))
        throw ParameterError("b>0");
    if (!(raw.d > 0.0) || !std::isfinite(raw.d))
        throw ParameterError("d>0");
    if (!std::isfinite(raw.a) || !std::isfinite(raw.c))
        throw ParameterError("a and c must be finite");
    if (!(raw.lower() < raw.upper()))
        throw ParameterError("a/b<c/d");
    if (raw.length() < degenerate_length)
        throw ParameterError("c/d-a/b>=1e-12");
    check_rate(raw.nu, "nu", raw.lower(), raw.upper());
    check_rate(raw.mu, "mu", raw.lower(), raw.upper());
}

void validate(const CanonicalModel& model) { validate(as_raw(model)); }

CanonicalModel canonicalize(const RawModel& raw)
{
    validate(raw);
    const double lo = raw.lower();
    const double length = raw.length();
    return CanonicalModel{raw.b, raw.d, remap_rate(raw.nu, lo, length), remap_rate(raw.mu, lo, length)};
}

RawModel as_raw(const CanonicalModel& model)
{
    return RawModel{0.0, model.b, model.d, model.d, model.nu, model.mu};
}

//---------------------------------------------------------------------------//
// Density transform
//---------------------------------------------------------------------------//

GridDensity transform_density(const RawModel& raw, const IntervalDensity& u, std::size_t n)
{
    validate(raw);
    if (u.comp1.size() != u.comp2.size())
        throw SizeMismatch(u.comp1.size(), u.comp2.size());
    if (u.comp1.empty() || !(u.upper > u.lower))
        throw DomainError("interval density is empty");
    const double lo = raw.lower();
    const double length = raw.length();
    const double tol = 1e-12 * std::max({1.0, std::abs(raw.lower()), std::abs(raw.upper())});
    if (u.lower < raw.lower() - tol || u.upper > raw.upper() + tol)
        throw DomainError("density support exceeds the state interval");

    // The source cells are uniform on [u.lower, u.upper]; remap works on a unit
    // source grid, so rescale values to keep each cell's mass.
    const std::size_t m = u.comp1.size();
    const double scale = u.upper - u.lower;
    std::vector<double> edges(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
    {
        const double x = u.lower + scale * cell_edge(i, m);
        edges[i] = std::clamp((x - lo) / length, 0.0, 1.0);
    }
    auto rescale = [&](const std::vector<double>& comp) {
        std::vector<double> v(comp);
        for (double& x : v)
            x *= scale;
        return conservative_remap(v, edges, n);
    };
    return {rescale(u.comp1), rescale(u.comp2)};
}

GridDensity transform_density(const RawModel& raw,
                              const PiecewiseLinear& u1,
                              const PiecewiseLinear& u2,
                              std::size_t n)
{
    validate(raw);
    const double lo = raw.lower();
    const double hi = raw.upper();
    const double length = raw.length();
    for (const PiecewiseLinear* u : {&u1, &u2})
    {
        // Round-off in c/d can leave a sliver of support past the edge.
        const double outside = std::abs(u->integral(u->lower(), lo)) + std::abs(u->integral(hi, u->upper()));
        const double total = std::abs(u->integral(u->lower(), u->upper()));
        if (outside > 1e-13 * std::max(1.0, total))
            throw DomainError("density support exceeds the state interval");
    }
    GridDensity v = GridDensity::zeros(n);
    const double h = cell_width(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double xa = lo + length * cell_edge(i, n);
        const double xb = (i + 1 == n) ? hi : lo + length * cell_edge(i + 1, n);
        v.comp1[i] = u1.integral(xa, xb) / h;
        v.comp2[i] = u2.integral(xa, xb) / h;
    }
    return v;
}

} // namespace hgrn

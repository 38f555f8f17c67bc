#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hgrn/grid.hpp"

namespace hgrn {

//---------------------------------------------------------------------------//
/*!
 * Piecewise-linear table x_0 < x_1 < ... < x_m with values y_k.
 *
 * Point evaluation interpolates linearly and extends the end values as
 * constants outside [x_0, x_m]. Integrals treat the function as zero outside
 * the table, which is the convention needed when a table describes a density.
 *
 * Used both for switching rates (where `validate` demands strictly positive
 * values) and for densities handed to `transform_density`.
 */
class PiecewiseLinear
{
  public:
    PiecewiseLinear(std::vector<double> nodes, std::vector<double> values);

    static PiecewiseLinear constant(double value, double lower, double upper);

    double operator()(double x) const;

    //! Exact integral over [lo, hi] ∩ [x_0, x_m].
    double integral(double lo, double hi) const;

    double min() const;
    double max() const;
    bool is_constant() const;

    double lower() const { return nodes_.front(); }
    double upper() const { return nodes_.back(); }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> values() const { return values_; }

    bool operator==(const PiecewiseLinear&) const = default;

  private:
    std::vector<double> nodes_;
    std::vector<double> values_;
};

using RateFunction = PiecewiseLinear;

//! Raw parameters of the two-state system on I = [a/b, c/d].
struct RawModel
{
    double a = 0.0;
    double b = 1.0;
    double c = 1.0;
    double d = 1.0;
    RateFunction nu = RateFunction::constant(1.0, 0.0, 1.0);
    RateFunction mu = RateFunction::constant(1.0, 0.0, 1.0);

    double lower() const { return a / b; }
    double upper() const { return c / d; }
    double length() const { return c / d - a / b; }
};

//! The transformed system on [0,1]: mode 1 moves with velocity -b x, mode 2
//! with velocity d (1 - x); nu switches 1 -> 2 and mu switches 2 -> 1.
struct CanonicalModel
{
    double b = 1.0;
    double d = 1.0;
    RateFunction nu = RateFunction::constant(1.0, 0.0, 1.0);
    RateFunction mu = RateFunction::constant(1.0, 0.0, 1.0);

    double velocity1(double x) const { return -b * x; }
    double velocity2(double x) const { return d * (1.0 - x); }

    bool operator==(const CanonicalModel&) const = default;
};

//! Throws ParameterError or RateError when an invariant of RawModel fails.
void validate(const RawModel& raw);
void validate(const CanonicalModel& model);

CanonicalModel canonicalize(const RawModel& raw);

//! The canonical model written back as a raw model with a = 0 and c = d.
RawModel as_raw(const CanonicalModel& model);

//! Cell-averaged density on a uniform partition of [lower, upper].
struct IntervalDensity
{
    double lower = 0.0;
    double upper = 1.0;
    std::vector<double> comp1;
    std::vector<double> comp2;
};

//! Pushes a density on I forward to [0,1]: v(x~) = L u(a/b + x~ L).
GridDensity transform_density(const RawModel& raw, const IntervalDensity& u, std::size_t n);
GridDensity transform_density(const RawModel& raw,
                              const PiecewiseLinear& u1,
                              const PiecewiseLinear& u2,
                              std::size_t n);

//---------------------------------------------------------------------------//
// JSON model files
//
//   {"a":0, "b":1, "c":1, "d":1,
//    "nu": {"nodes":[0,1], "values":[1,1]},
//    "mu": 2.5}
//
// A bare number for a rate means a constant over [a/b, c/d].
//---------------------------------------------------------------------------//
RawModel parse_raw_model(const std::string& json_text);
RawModel load_raw_model(const std::filesystem::path& path);
std::string to_json(const RawModel& raw);
std::string to_json(const CanonicalModel& model);

//! FNV-1a hash of the canonical JSON form, as 16 hex digits.
std::string model_hash(const CanonicalModel& model);

} // namespace hgrn

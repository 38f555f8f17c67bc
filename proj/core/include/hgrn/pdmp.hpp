#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "hgrn/grid.hpp"
#include "hgrn/model.hpp"

namespace hgrn {

//---------------------------------------------------------------------------//
// Piecewise-deterministic process behind the transformed system.
//
// Mode 1 follows x' = -b x and leaves at rate nu(x) to mode 2; mode 2
// follows x' = d (1 - x) and leaves at rate mu(x) to mode 1. Its forward
// equation is exactly the transport-switching system on [0,1].
//---------------------------------------------------------------------------//

//! Closed-form flow of the given mode for time tau >= 0, clamped to [0,1].
//! Throws BadMode and NegativeTime.
double flow(int mode, double x0, double b, double d, double tau);

//! Uniform double in [0,1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);

//! Independent engine for particle k of a run seeded with `seed`.
std::mt19937_64 particle_stream(std::uint64_t seed, std::uint64_t k);

inline constexpr const char* generator_id = "mt19937_64+splitmix64";

/*!
 * First event time in (0, horizon] of an inhomogeneous Poisson process with
 * intensity rate(s) <= bound, by thinning. Returns +infinity when no event
 * occurs before the horizon. `rate` is evaluated at candidate times only.
 */
double next_event_time(std::mt19937_64& rng,
                       double bound,
                       double horizon,
                       const std::function<double(double)>& rate);

struct InitialDistribution
{
    enum class Kind
    {
        point,   //!< every particle at x in `mode`
        uniform, //!< uniform on [0,1] in `mode`
        density, //!< sampled from a nonnegative grid density
    };
    Kind kind = Kind::uniform;
    double x = 0.5;
    int mode = 1;
    GridDensity density;

    static InitialDistribution point(double x, int mode);
    static InitialDistribution uniform(int mode);
    static InitialDistribution from_density(GridDensity u);
};

struct ParticleEnsemble
{
    std::vector<double> positions;
    std::vector<int> modes;
    std::uint64_t seed = 0;
    std::string generator_id = hgrn::generator_id;
    double T = 0.0;

    std::size_t size() const { return positions.size(); }
};

//! N independent particles run to time T. Particle k draws only from
//! particle_stream(seed, k), so the result does not depend on `workers`.
//! Throws EmptyEnsemble, NegativeTime, BadMode, DomainError.
ParticleEnsemble simulate(const CanonicalModel& model,
                          const InitialDistribution& init,
                          std::size_t N,
                          double T,
                          std::uint64_t seed,
                          unsigned workers = 1);

//! Histogram per (mode, cell) normalized to total mass 1.
GridDensity density_estimate(const ParticleEnsemble& ens, std::size_t n_cells);

//! Columns particle_id, x, mode.
void write_ensemble_csv(std::ostream& os, const ParticleEnsemble& ens);

//! JSON object with seed, generator_id, N, T and the model hash.
std::string ensemble_metadata(const ParticleEnsemble& ens, const CanonicalModel& model);

} // namespace hgrn

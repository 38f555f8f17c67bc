#include "hgrn/pdmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "hgrn/csv.hpp"
#include "hgrn/errors.hpp"

namespace hgrn {

namespace {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double exponential(std::mt19937_64& rng, double rate)
{
    return -std::log1p(-uniform01(rng)) / rate;
}

void check_mode(int mode)
{
    if (mode != 1 && mode != 2)
        throw BadMode(mode);
}

struct Particle
{
    double x;
    int mode;
};

Particle draw_initial(const InitialDistribution& init, const std::vector<double>& cumulative, std::mt19937_64& rng)
{
    switch (init.kind)
    {
    case InitialDistribution::Kind::point:
        return {init.x, init.mode};
    case InitialDistribution::Kind::uniform:
        return {uniform01(rng), init.mode};
    case InitialDistribution::Kind::density:
    {
        const double target = uniform01(rng) * cumulative.back();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        auto slot = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
            it - cumulative.begin(), static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
        // Skip empty slots that upper_bound can land on at the boundary.
        while (slot > 0 && cumulative[slot] == cumulative[slot - 1])
            --slot;
        const std::size_t n = init.density.cells();
        const int mode = slot < n ? 1 : 2;
        const std::size_t cell = slot % n;
        const double x = (static_cast<double>(cell) + uniform01(rng)) / static_cast<double>(n);
        return {x, mode};
    }
    }
    return {init.x, init.mode};
}

} // namespace

double flow(int mode, double x0, double b, double d, double tau)
{
    check_mode(mode);
    if (tau < 0.0)
        throw NegativeTime(tau);
    const double x = mode == 1 ? x0 * std::exp(-b * tau) : 1.0 - (1.0 - x0) * std::exp(-d * tau);
    return std::clamp(x, 0.0, 1.0);
}

double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 particle_stream(std::uint64_t seed, std::uint64_t k)
{
    std::uint64_t state = seed;
    const std::uint64_t a = splitmix64(state);
    state = a ^ (k * 0xd1342543de82ef95ULL + 1);
    return std::mt19937_64(splitmix64(state));
}

double next_event_time(std::mt19937_64& rng,
                       double bound,
                       double horizon,
                       const std::function<double(double)>& rate)
{
    if (!(bound > 0.0))
        throw Error("thinning bound must be positive");
    double t = 0.0;
    for (;;)
    {
        t += exponential(rng, bound);
        if (t > horizon)
            return std::numeric_limits<double>::infinity();
        if (uniform01(rng) * bound < rate(t))
            return t;
    }
}

InitialDistribution InitialDistribution::point(double x, int mode)
{
    InitialDistribution d;
    d.kind = Kind::point;
    d.x = x;
    d.mode = mode;
    return d;
}

InitialDistribution InitialDistribution::uniform(int mode)
{
    InitialDistribution d;
    d.kind = Kind::uniform;
    d.mode = mode;
    return d;
}

InitialDistribution InitialDistribution::from_density(GridDensity u)
{
    InitialDistribution d;
    d.kind = Kind::density;
    d.density = std::move(u);
    return d;
}

ParticleEnsemble simulate(const CanonicalModel& model,
                          const InitialDistribution& init,
                          std::size_t N,
                          double T,
                          std::uint64_t seed,
                          unsigned workers)
{
    if (N == 0)
        throw EmptyEnsemble();
    if (T < 0.0)
        throw NegativeTime(T);

    std::vector<double> cumulative;
    if (init.kind == InitialDistribution::Kind::density)
    {
        const GridDensity& u = init.density;
        if (u.cells() == 0 || u.comp1.size() != u.comp2.size())
            throw DomainError("initial density is empty or malformed");
        double s = 0.0;
        for (const auto* comp : {&u.comp1, &u.comp2})
            for (double v : *comp)
            {
                if (v < 0.0 || !std::isfinite(v))
                    throw DomainError("initial density must be nonnegative");
                s += v;
                cumulative.push_back(s);
            }
        if (!(s > 0.0))
            throw DomainError("initial density has zero mass");
    }
    else
    {
        check_mode(init.mode);
        if (init.kind == InitialDistribution::Kind::point && !(init.x >= 0.0 && init.x <= 1.0))
            throw DomainError("initial point outside [0,1]");
    }

    const double bound1 = model.nu.max();
    const double bound2 = model.mu.max();
    if (!(bound1 > 0.0 && bound2 > 0.0))
        throw Error("nonpositive rate bound");

    ParticleEnsemble ens;
    ens.positions.resize(N);
    ens.modes.resize(N);
    ens.seed = seed;
    ens.T = T;

    auto run = [&](std::size_t k) {
        std::mt19937_64 rng = particle_stream(seed, k);
        Particle p = draw_initial(init, cumulative, rng);
        double t = 0.0;
        while (t < T)
        {
            const double bound = p.mode == 1 ? bound1 : bound2;
            const double wait = exponential(rng, bound);
            if (t + wait >= T)
            {
                p.x = flow(p.mode, p.x, model.b, model.d, T - t);
                break;
            }
            p.x = flow(p.mode, p.x, model.b, model.d, wait);
            t += wait;
            const double rate = p.mode == 1 ? model.nu(p.x) : model.mu(p.x);
            if (uniform01(rng) * bound < rate)
                p.mode = 3 - p.mode;
        }
        ens.positions[k] = p.x;
        ens.modes[k] = p.mode;
    };

    const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(N, 1024))));
    if (w == 1)
    {
        for (std::size_t k = 0; k < N; ++k)
            run(k);
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < w; ++i)
            pool.emplace_back([&, i] {
                for (std::size_t k = i; k < N; k += w)
                    run(k);
            });
        for (auto& th : pool)
            th.join();
    }
    return ens;
}

GridDensity density_estimate(const ParticleEnsemble& ens, std::size_t n_cells)
{
    if (n_cells == 0)
        throw ParameterError("n_cells>0");
    if (ens.size() == 0)
        throw EmptyEnsemble();
    std::vector<std::uint64_t> c1(n_cells, 0);
    std::vector<std::uint64_t> c2(n_cells, 0);
    const double scale = static_cast<double>(n_cells);
    for (std::size_t k = 0; k < ens.size(); ++k)
    {
        const double x = std::clamp(ens.positions[k], 0.0, 1.0);
        const auto cell = std::min(n_cells - 1, static_cast<std::size_t>(x * scale));
        check_mode(ens.modes[k]);
        ++(ens.modes[k] == 1 ? c1 : c2)[cell];
    }
    const double norm = scale / static_cast<double>(ens.size());
    GridDensity u = GridDensity::zeros(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i)
    {
        u.comp1[i] = static_cast<double>(c1[i]) * norm;
        u.comp2[i] = static_cast<double>(c2[i]) * norm;
    }
    return u;
}

void write_ensemble_csv(std::ostream& os, const ParticleEnsemble& ens)
{
    write_csv_row(os, {"particle_id", "x", "mode"});
    for (std::size_t k = 0; k < ens.size(); ++k)
        write_csv_row(os, {std::to_string(k), format_double(ens.positions[k]), std::to_string(ens.modes[k])});
}

std::string ensemble_metadata(const ParticleEnsemble& ens, const CanonicalModel& model)
{
    nlohmann::json doc{{"seed", ens.seed},
                       {"generator_id", ens.generator_id},
                       {"N", ens.size()},
                       {"T", ens.T},
                       {"model_hash", model_hash(model)}};
    return doc.dump(2);
}

} // namespace hgrn

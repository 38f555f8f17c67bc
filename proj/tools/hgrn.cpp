// hgrn: command-line front end for the two-state transport model.
//
//   hgrn <command> [--config run.json] [overrides...]
//
// Every command reads one JSON config. Top-level keys apply to all commands
// and a section named after the command overrides them; command-line flags
// override both. Exit codes: 0 ok, 1 a verification check failed, 2 usage,
// config or input error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hgrn/analysis.hpp"
#include "hgrn/csv.hpp"
#include "hgrn/equilibrium.hpp"
#include "hgrn/errors.hpp"
#include "hgrn/evolve.hpp"
#include "hgrn/grid.hpp"
#include "hgrn/model.hpp"
#include "hgrn/pdmp.hpp"

#ifndef HGRN_VERSION
#define HGRN_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_config = 2;

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

//---------------------------------------------------------------------------//
// Configuration
//---------------------------------------------------------------------------//

struct RunConfig
{
    std::string model_path; // empty: the default model, b = d = nu = mu = 1
    std::size_t n = 256;
    double dt = 1e-3;
    int order = 2;
    double horizon = 1.0;
    std::vector<double> snapshots;
    json initial = {{"kind", "uniform"}, {"mode", 1}};
    std::size_t particles = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool compare_equilibrium = false;
    std::optional<std::vector<double>> lambdas;
    std::vector<double> times{2.0, 4.0, 6.0, 8.0};
    std::size_t quad_n = 128;
    double quad_dt = 1e-2;
    double tail_tol = 1e-8;
    double tail_fraction = 0.5;
    double kernel_t = 0.5;
    std::size_t trials = 8;
    double min_r_squared = 0.99;
    std::string method = "automatic";
    fs::path output_dir = ".";
    fs::path output; // transform only
};

template <class T>
void read_key(const json& doc, const char* key, T& out)
{
    if (!doc.contains(key))
        return;
    try
    {
        out = doc.at(key).get<T>();
    }
    catch (const json::exception& e)
    {
        throw ConfigError(std::string("config key \"") + key + "\": " + e.what());
    }
}

void read_section(const json& doc, RunConfig& cfg)
{
    if (!doc.is_object())
        throw ConfigError("config sections must be JSON objects");
    read_key(doc, "model", cfg.model_path);
    read_key(doc, "n", cfg.n);
    read_key(doc, "dt", cfg.dt);
    read_key(doc, "order", cfg.order);
    read_key(doc, "horizon", cfg.horizon);
    read_key(doc, "snapshots", cfg.snapshots);
    if (doc.contains("initial"))
        cfg.initial = doc["initial"];
    read_key(doc, "particles", cfg.particles);
    read_key(doc, "seed", cfg.seed);
    read_key(doc, "workers", cfg.workers);
    read_key(doc, "compare_equilibrium", cfg.compare_equilibrium);
    if (doc.contains("lambdas"))
    {
        std::vector<double> l;
        read_key(doc, "lambdas", l);
        cfg.lambdas = l;
    }
    read_key(doc, "times", cfg.times);
    read_key(doc, "quad_n", cfg.quad_n);
    read_key(doc, "quad_dt", cfg.quad_dt);
    read_key(doc, "tail_tol", cfg.tail_tol);
    read_key(doc, "tail_fraction", cfg.tail_fraction);
    read_key(doc, "kernel_t", cfg.kernel_t);
    read_key(doc, "trials", cfg.trials);
    read_key(doc, "min_r_squared", cfg.min_r_squared);
    read_key(doc, "method", cfg.method);
    std::string out;
    read_key(doc, "output_dir", out);
    if (!out.empty())
        cfg.output_dir = out;
    out.clear();
    read_key(doc, "output", out);
    if (!out.empty())
        cfg.output = out;
}

json to_json(const RunConfig& cfg)
{
    json doc{{"model", cfg.model_path},
             {"n", cfg.n},
             {"dt", cfg.dt},
             {"order", cfg.order},
             {"horizon", cfg.horizon},
             {"snapshots", cfg.snapshots},
             {"initial", cfg.initial},
             {"particles", cfg.particles},
             {"seed", cfg.seed},
             {"workers", cfg.workers},
             {"compare_equilibrium", cfg.compare_equilibrium},
             {"times", cfg.times},
             {"quad_n", cfg.quad_n},
             {"quad_dt", cfg.quad_dt},
             {"tail_tol", cfg.tail_tol},
             {"tail_fraction", cfg.tail_fraction},
             {"kernel_t", cfg.kernel_t},
             {"trials", cfg.trials},
             {"min_r_squared", cfg.min_r_squared},
             {"method", cfg.method}};
    doc["lambdas"] = cfg.lambdas ? json(*cfg.lambdas) : json(nullptr);
    return doc;
}

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw ConfigError(what);
}

void check_common(const RunConfig& cfg)
{
    require(cfg.n >= 4, "n must be at least 4");
    require(cfg.dt > 0.0 && std::isfinite(cfg.dt), "dt must be positive");
    require(cfg.order == 1 || cfg.order == 2, "order must be 1 or 2");
    require(cfg.horizon >= 0.0 && std::isfinite(cfg.horizon), "horizon must be nonnegative");
    require(!cfg.output_dir.empty(), "output_dir must not be empty");
}

//---------------------------------------------------------------------------//
// Shared plumbing
//---------------------------------------------------------------------------//

struct Context
{
    RunConfig cfg;
    std::string command;
    std::string config_hash;
    hgrn::CanonicalModel model;
    hgrn::RawModel raw;
};

hgrn::RawModel load_model(const RunConfig& cfg)
{
    if (cfg.model_path.empty())
        return hgrn::RawModel{};
    if (!fs::exists(cfg.model_path))
        throw ConfigError("model file not found: " + cfg.model_path);
    return hgrn::load_raw_model(cfg.model_path);
}

json metadata(const Context& ctx)
{
    return json{{"tool", "hgrn"},
                {"version", HGRN_VERSION},
                {"command", ctx.command},
                {"config_hash", ctx.config_hash},
                {"model_hash", hgrn::model_hash(ctx.model)}};
}

void write_comment_header(std::ostream& os, const Context& ctx)
{
    const json meta = metadata(ctx);
    for (const auto& [key, value] : meta.items())
        os << "# " << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
}

std::ofstream open_output(const fs::path& path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("cannot write " + path.string());
    return os;
}

void write_json_file(const fs::path& path, const json& doc)
{
    auto os = open_output(path);
    os << doc.dump(2) << '\n';
}

void write_density_file(const fs::path& path, const Context& ctx, const hgrn::GridDensity& u)
{
    auto os = open_output(path);
    write_comment_header(os, ctx);
    hgrn::write_density_csv(os, u);
}

// Fixed-width zero-padded index for file names.
std::string padded(std::size_t k)
{
    std::string s = std::to_string(k);
    return std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

hgrn::GridDensity initial_density(const Context& ctx)
{
    const json& init = ctx.cfg.initial;
    const std::string kind = init.value("kind", "uniform");
    const std::size_t n = ctx.cfg.n;
    if (kind == "uniform")
    {
        const int mode = init.value("mode", 1);
        require(mode == 1 || mode == 2, "initial.mode must be 1 or 2");
        hgrn::GridDensity u = hgrn::GridDensity::zeros(n);
        (mode == 1 ? u.comp1 : u.comp2).assign(n, 1.0);
        return u;
    }
    if (kind == "cell")
    {
        const int mode = init.value("mode", 1);
        const double x = init.value("x", 0.5);
        require(mode == 1 || mode == 2, "initial.mode must be 1 or 2");
        require(x >= 0.0 && x <= 1.0, "initial.x must lie in [0,1]");
        hgrn::GridDensity u = hgrn::GridDensity::zeros(n);
        const auto i = std::min(n - 1, static_cast<std::size_t>(x * static_cast<double>(n)));
        (mode == 1 ? u.comp1 : u.comp2)[i] = static_cast<double>(n);
        return u;
    }
    if (kind == "equilibrium")
        return hgrn::stationary_density(ctx.model, n).w;
    if (kind == "csv")
    {
        const std::string path = init.value("path", "");
        std::ifstream in(path);
        require(!path.empty() && static_cast<bool>(in), "cannot open initial density " + path);
        hgrn::GridDensity u = hgrn::read_density_csv(in);
        require(u.cells() == n, "initial density has " + std::to_string(u.cells()) + " cells but n is "
                                    + std::to_string(n));
        return u;
    }
    throw ConfigError("initial.kind must be uniform, cell, equilibrium or csv");
}

hgrn::InitialDistribution initial_particles(const Context& ctx)
{
    const json& init = ctx.cfg.initial;
    const std::string kind = init.value("kind", "uniform");
    const int mode = init.value("mode", 1);
    if (kind == "uniform")
        return hgrn::InitialDistribution::uniform(mode);
    if (kind == "point")
        return hgrn::InitialDistribution::point(init.value("x", 0.5), mode);
    return hgrn::InitialDistribution::from_density(initial_density(ctx));
}

hgrn::EquilibriumMethod parse_method(const std::string& s)
{
    if (s == "automatic")
        return hgrn::EquilibriumMethod::automatic;
    if (s == "closed_form")
        return hgrn::EquilibriumMethod::closed_form;
    if (s == "quadrature")
        return hgrn::EquilibriumMethod::quadrature;
    throw ConfigError("method must be automatic, closed_form or quadrature");
}

//---------------------------------------------------------------------------//
// Commands
//---------------------------------------------------------------------------//

int cmd_transform(Context& ctx)
{
    const fs::path out = ctx.cfg.output.empty() ? ctx.cfg.output_dir / "canonical_model.json" : ctx.cfg.output;
    json doc = json::parse(hgrn::to_json(ctx.model));
    doc["metadata"] = metadata(ctx);
    doc["metadata"]["source"] = {{"a", ctx.raw.a}, {"b", ctx.raw.b}, {"c", ctx.raw.c}, {"d", ctx.raw.d}};
    write_json_file(out, doc);
    std::cout << "wrote " << out.string() << '\n';
    return exit_ok;
}

int cmd_evolve(Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    const hgrn::GridDensity u0 = initial_density(ctx);
    const double m0 = hgrn::mass(u0);

    std::vector<double> times = cfg.snapshots;
    for (double t : times)
        require(t >= 0.0 && t <= cfg.horizon, "snapshot times must lie in [0, horizon]");
    require(std::is_sorted(times.begin(), times.end()), "snapshot times must be sorted");

    auto log = open_output(cfg.output_dir / "mass_log.csv");
    write_comment_header(log, ctx);
    hgrn::write_csv_row(log, {"t", "mass", "relative_drift"});
    double max_drift = 0.0;
    auto record = [&](double t, const hgrn::GridDensity& u) {
        const double m = hgrn::mass(u);
        const double drift = m0 != 0.0 ? std::abs(m - m0) / std::abs(m0) : std::abs(m - m0);
        max_drift = std::max(max_drift, drift);
        hgrn::write_csv_row(log, {hgrn::format_double(t), hgrn::format_double(m), hgrn::format_double(drift)});
    };
    record(0.0, u0);

    const hgrn::SplittingConfig split{cfg.dt, cfg.order};
    const auto snaps = hgrn::evolve(ctx.model, split, u0, cfg.horizon, times, record);

    json files = json::array();
    for (std::size_t k = 0; k < snaps.size(); ++k)
    {
        const std::string name = "snapshot_" + padded(k) + ".csv";
        write_density_file(cfg.output_dir / name, ctx, snaps[k].u);
        files.push_back({{"t", snaps[k].t}, {"file", name}, {"mass", hgrn::mass(snaps[k].u)}});
    }
    json summary{{"metadata", metadata(ctx)},
                 {"config", to_json(cfg)},
                 {"snapshots", files},
                 {"initial_mass", m0},
                 {"max_mass_drift", max_drift}};
    write_json_file(cfg.output_dir / "evolve.json", summary);
    std::cout << "evolved to t=" << hgrn::format_double(cfg.horizon) << ", " << snaps.size()
              << " snapshot(s), max relative mass drift " << hgrn::format_double(max_drift) << '\n';
    return exit_ok;
}

int cmd_pdmp(Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    require(cfg.particles >= 1, "particles must be at least 1");
    const auto ens = hgrn::simulate(ctx.model, initial_particles(ctx), cfg.particles, cfg.horizon, cfg.seed,
                                    cfg.workers);
    const hgrn::GridDensity hist = hgrn::density_estimate(ens, cfg.n);

    {
        auto os = open_output(cfg.output_dir / "ensemble.csv");
        write_comment_header(os, ctx);
        hgrn::write_ensemble_csv(os, ens);
    }
    write_density_file(cfg.output_dir / "histogram.csv", ctx, hist);

    json meta = json::parse(hgrn::ensemble_metadata(ens, ctx.model));
    meta["metadata"] = metadata(ctx);
    meta["n_cells"] = cfg.n;
    if (cfg.compare_equilibrium)
    {
        const auto eq = hgrn::stationary_density(ctx.model, cfg.n);
        const double l1 = hgrn::l1_distance(hist, eq.w);
        meta["equilibrium_l1_distance"] = l1;
        meta["equilibrium_tv_distance"] = 0.5 * l1;
        std::cout << "total-variation distance to equilibrium " << hgrn::format_double(0.5 * l1) << '\n';
    }
    write_json_file(cfg.output_dir / "pdmp.json", meta);
    std::cout << "simulated " << ens.size() << " particle(s) to t=" << hgrn::format_double(cfg.horizon) << '\n';
    return exit_ok;
}

int cmd_equilibrium(Context& ctx)
{
    const auto eq = hgrn::stationary_density(ctx.model, ctx.cfg.n, parse_method(ctx.cfg.method));
    write_density_file(ctx.cfg.output_dir / "equilibrium.csv", ctx, eq.w);

    // Zero-flux residual b x w1 - d (1 - x) w2 at cell centers.
    double flux = 0.0;
    for (std::size_t i = 0; i < ctx.cfg.n; ++i)
    {
        const double x = hgrn::cell_center(i, ctx.cfg.n);
        flux = std::max(flux, std::abs(ctx.model.b * x * eq.value1(x) - ctx.model.d * (1.0 - x) * eq.value2(x)));
    }
    json doc{{"metadata", metadata(ctx)},
             {"method", hgrn::to_string(eq.method)},
             {"normalizing_constant", eq.C},
             {"mass", hgrn::mass(eq.w)},
             {"flux_residual", flux},
             {"n", ctx.cfg.n}};
    write_json_file(ctx.cfg.output_dir / "equilibrium.json", doc);
    std::cout << "equilibrium (" << hgrn::to_string(eq.method) << ") written\n";
    return exit_ok;
}

json convergence_json(const hgrn::ConvergenceReport& r)
{
    return json{{"times", r.times},
                {"norms", r.norms},
                {"rate", r.rate},
                {"intercept", r.intercept},
                {"r_squared", r.r_squared},
                {"fit_points", r.fit_points},
                {"n", r.n},
                {"dt", r.dt}};
}

void check_times(const std::vector<double>& times)
{
    require(!times.empty(), "times must not be empty");
    for (std::size_t k = 0; k < times.size(); ++k)
        require(times[k] >= 0.0 && (k == 0 || times[k] > times[k - 1]), "times must be increasing and nonnegative");
}

int cmd_converge(Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    check_times(cfg.times);
    require(cfg.tail_fraction > 0.0 && cfg.tail_fraction <= 1.0, "tail_fraction must lie in (0,1]");
    const auto report = hgrn::norm_convergence(ctx.model, cfg.times, cfg.quad_n, cfg.quad_dt,
                                               {cfg.tail_fraction, cfg.order, cfg.workers});
    json doc{{"metadata", metadata(ctx)}, {"convergence", convergence_json(report)}};
    doc["monotone_tail"] = report.monotone_tail();
    write_json_file(cfg.output_dir / "convergence.json", doc);

    auto os = open_output(cfg.output_dir / "convergence.csv");
    write_comment_header(os, ctx);
    hgrn::write_csv_row(os, {"t", "norm", "log_norm"});
    for (std::size_t k = 0; k < report.times.size(); ++k)
        hgrn::write_csv_row(os, {hgrn::format_double(report.times[k]), hgrn::format_double(report.norms[k]),
                                 hgrn::format_double(std::log(report.norms[k]))});
    std::cout << "fitted rate " << hgrn::format_double(report.rate) << ", R^2 "
              << hgrn::format_double(report.r_squared) << '\n';
    return exit_ok;
}

int cmd_verify(Context& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    check_times(cfg.times);
    require(cfg.kernel_t > 0.0, "kernel_t must be positive");
    require(cfg.quad_n >= 4 && cfg.quad_dt > 0.0, "quad_n and quad_dt must be positive");
    const std::vector<double> lambdas = cfg.lambdas ? *cfg.lambdas : hgrn::default_lambda_grid(ctx.model);
    require(!lambdas.empty(), "lambdas must not be empty");

    json checks = json::array();
    std::vector<std::string> failed;
    auto add = [&](const std::string& name, bool pass, json detail) {
        detail["name"] = name;
        detail["pass"] = pass;
        checks.push_back(detail);
        if (!pass)
            failed.push_back(name);
        std::cout << (pass ? "PASS " : "FAIL ") << name << '\n';
    };

    const auto params = hgrn::choose_parameters(ctx.model);
    const auto pc = hgrn::check_parameters(ctx.model, params);
    add("parameters", pc.all(),
        {{"epsilon", params.epsilon},
         {"gamma", params.gamma},
         {"lambda0", params.lambda0},
         {"epsilon_below_rates", pc.epsilon_below_rates},
         {"epsilon_below_gap", pc.epsilon_below_gap},
         {"lambda0_dominates", pc.lambda0_dominates},
         {"perturbation_small", pc.perturbation_small}});

    const hgrn::LaplaceQuadConfig quad{cfg.quad_n, cfg.quad_dt, cfg.tail_tol, cfg.order, cfg.workers};
    const auto battery = hgrn::default_g_battery(cfg.quad_n);
    for (double lambda : lambdas)
    {
        if (!(lambda > params.lambda0))
        {
            add("dual_positivity lambda=" + hgrn::format_double(lambda), false,
                {{"lambda", lambda}, {"reason", "lambda must exceed lambda0"}});
            continue;
        }
        const auto rm = hgrn::assemble_resolvent(ctx.model, lambda, quad);
        for (const auto& g : battery)
        {
            const double c = hgrn::dual_positivity_check(rm, g.g);
            add("dual_positivity lambda=" + hgrn::format_double(lambda) + " g=" + g.name,
                hgrn::dual_positivity_passes(c, g.g),
                {{"lambda", lambda}, {"g", g.name}, {"c", c}, {"tail_bound", rm.tail_bound}});
        }
    }

    const auto pic = hgrn::partial_integral_check(ctx.model, params.epsilon, cfg.kernel_t, cfg.trials, cfg.quad_n,
                                                  cfg.seed);
    add("partial_integral", pic.pass && pic.margin > 0.0,
        {{"t", pic.t},
         {"epsilon", pic.epsilon},
         {"margin", pic.margin},
         {"trials", pic.trials},
         {"orientation", pic.orientation == hgrn::KernelOrientation::from2to1 ? "from2to1" : "from1to2"}});

    // The fit uses every sample time here, so R^2 measures the whole decay.
    const auto conv = hgrn::norm_convergence(ctx.model, cfg.times, cfg.quad_n, cfg.quad_dt,
                                             {1.0, cfg.order, cfg.workers});
    json detail = convergence_json(conv);
    add("norm_convergence", conv.monotone_tail() && conv.r_squared >= cfg.min_r_squared, detail);

    json report{{"metadata", metadata(ctx)},
                {"config", to_json(cfg)},
                {"checks", checks},
                {"fitted_rate", conv.rate},
                {"pass", failed.empty()}};
    write_json_file(cfg.output_dir / "report.json", report);
    if (!failed.empty())
    {
        std::cerr << "verification failed: " << failed.front() << '\n';
        return exit_fail;
    }
    std::cout << "all checks passed\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical laboratory for the two-state hybrid gene-regulatory transport model"};
    app.set_version_flag("--version", HGRN_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    struct Overrides
    {
        std::string model, output_dir, output, method;
        std::optional<std::size_t> n, particles, quad_n, trials;
        std::optional<double> dt, horizon, quad_dt, kernel_t;
        std::optional<std::uint64_t> seed;
        std::optional<unsigned> workers;
        std::optional<int> order;
        std::vector<double> lambdas, times, snapshots;
    } ov;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"transform", "Map a raw model on [a/b, c/d] to the canonical model on [0,1]"},
        {"evolve", "Run the splitting solver and write snapshots and a mass log"},
        {"pdmp", "Simulate the particle process and write the ensemble and its histogram"},
        {"equilibrium", "Compute the stationary density"},
        {"verify", "Check the convergence hypotheses and the decay to equilibrium"},
        {"converge", "Measure the distance of S(t) to the equilibrium projection"},
    };
    for (const auto& [name, help] : commands)
    {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", config_path, "JSON run config")->check(CLI::ExistingFile);
        sub->add_option("-m,--model", ov.model, "model JSON file");
        sub->add_option("-o,--output-dir", ov.output_dir, "directory for outputs");
        sub->add_option("-n,--cells", ov.n, "grid cells");
        sub->add_option("--dt", ov.dt, "time step");
        sub->add_option("--order", ov.order, "splitting order (1 Lie, 2 Strang)");
        sub->add_option("-T,--horizon", ov.horizon, "final time");
        sub->add_option("--seed", ov.seed, "random seed");
        sub->add_option("--workers", ov.workers, "worker threads");
        if (name == "transform")
            sub->add_option("--output", ov.output, "canonical model file to write");
        if (name == "evolve")
            sub->add_option("--snapshots", ov.snapshots, "snapshot times");
        if (name == "pdmp")
            sub->add_option("-N,--particles", ov.particles, "ensemble size");
        if (name == "equilibrium")
            sub->add_option("--method", ov.method, "automatic, closed_form or quadrature");
        if (name == "verify" || name == "converge")
        {
            sub->add_option("--times", ov.times, "sample times");
            sub->add_option("--quad-n", ov.quad_n, "grid cells for resolvent and convergence runs");
            sub->add_option("--quad-dt", ov.quad_dt, "time step for resolvent and convergence runs");
        }
        if (name == "verify")
        {
            sub->add_option("--lambdas", ov.lambdas, "resolvent parameters");
            sub->add_option("--kernel-t", ov.kernel_t, "time of the kernel domination check");
            sub->add_option("--trials", ov.trials, "random test functions for the kernel check");
        }
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    Context ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    try
    {
        RunConfig& cfg = ctx.cfg;
        if (!config_path.empty())
        {
            std::ifstream in(config_path);
            json doc;
            try
            {
                doc = json::parse(in);
            }
            catch (const json::parse_error& e)
            {
                throw ConfigError(std::string("config JSON: ") + e.what());
            }
            if (!doc.is_object())
                throw ConfigError("config must be a JSON object");
            json common = doc;
            for (const auto& [name, help] : commands)
                common.erase(name);
            read_section(common, cfg);
            if (doc.contains(ctx.command))
                read_section(doc[ctx.command], cfg);
            // Relative paths in the config resolve against its directory.
            const fs::path base = fs::path(config_path).parent_path();
            if (!cfg.model_path.empty() && fs::path(cfg.model_path).is_relative() && !base.empty())
                cfg.model_path = (base / cfg.model_path).string();
        }
        if (!ov.model.empty())
            cfg.model_path = ov.model;
        if (!ov.output_dir.empty())
            cfg.output_dir = ov.output_dir;
        if (!ov.output.empty())
            cfg.output = ov.output;
        if (!ov.method.empty())
            cfg.method = ov.method;
        if (ov.n)
            cfg.n = *ov.n;
        if (ov.particles)
            cfg.particles = *ov.particles;
        if (ov.quad_n)
            cfg.quad_n = *ov.quad_n;
        if (ov.trials)
            cfg.trials = *ov.trials;
        if (ov.dt)
            cfg.dt = *ov.dt;
        if (ov.horizon)
            cfg.horizon = *ov.horizon;
        if (ov.quad_dt)
            cfg.quad_dt = *ov.quad_dt;
        if (ov.kernel_t)
            cfg.kernel_t = *ov.kernel_t;
        if (ov.seed)
            cfg.seed = *ov.seed;
        if (ov.workers)
            cfg.workers = *ov.workers;
        if (ov.order)
            cfg.order = *ov.order;
        if (!ov.lambdas.empty())
            cfg.lambdas = ov.lambdas;
        if (!ov.times.empty())
            cfg.times = ov.times;
        if (!ov.snapshots.empty())
            cfg.snapshots = ov.snapshots;

        check_common(cfg);
        ctx.config_hash = hgrn::hex64(hgrn::fnv1a64(to_json(cfg).dump()));
        ctx.raw = load_model(cfg);
        ctx.model = hgrn::canonicalize(ctx.raw);
    }
    catch (const std::exception& e)
    {
        std::cerr << "hgrn " << ctx.command << ": " << e.what() << '\n';
        return exit_config;
    }

    try
    {
        if (ctx.command == "transform")
            return cmd_transform(ctx);
        if (ctx.command == "evolve")
            return cmd_evolve(ctx);
        if (ctx.command == "pdmp")
            return cmd_pdmp(ctx);
        if (ctx.command == "equilibrium")
            return cmd_equilibrium(ctx);
        if (ctx.command == "verify")
            return cmd_verify(ctx);
        return cmd_converge(ctx);
    }
    catch (const ConfigError& e)
    {
        std::cerr << "hgrn " << ctx.command << ": " << e.what() << '\n';
        return exit_config;
    }
    catch (const hgrn::Error& e)
    {
        std::cerr << "hgrn " << ctx.command << ": " << e.what() << '\n';
        return exit_config;
    }
}

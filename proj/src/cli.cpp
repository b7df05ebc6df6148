#include "choquard/cli.hpp"

#include "choquard/config.hpp"
#include "choquard/field_io.hpp"
#include "choquard/solver.hpp"
#include "choquard/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>

namespace choquard::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalFlags {
    std::string config;
    std::string out;
    std::optional<long long> seed;
    std::string solution;
};

RunConfig load_with_overrides(const GlobalFlags& flags)
{
    if (flags.config.empty())
        throw ConfigError("--config <file> is required");
    RunConfig cfg = load_config(flags.config);
    if (!flags.out.empty())
        cfg.out_dir = flags.out;
    if (flags.seed) {
        if (*flags.seed < 0)
            throw ConfigError("--seed must be nonnegative");
        cfg.solver.seed = static_cast<std::uint64_t>(*flags.seed);
    }
    if (!flags.solution.empty())
        cfg.solution = flags.solution;
    return cfg;
}

std::ofstream open_output(const fs::path& dir, const std::string& name)
{
    fs::create_directories(dir);
    std::ofstream os(dir / name);
    if (!os)
        throw std::runtime_error("cannot write " + (dir / name).string());
    return os;
}

json nonlinearity_json(const Nonlinearity& nl)
{
    json terms = json::array();
    for (const auto& t : nl.terms())
        terms.push_back({{"c", t.coefficient}, {"p", t.exponent}});
    return terms;
}

void write_profile_csv(std::ostream& os, const PathProfile& prof)
{
    os << "t,energy\n" << std::setprecision(17);
    for (std::size_t j = 0; j < prof.t_values.size(); ++j)
        os << prof.t_values[j] << ',' << prof.energies[j] << '\n';
}

int cmd_solve(const RunConfig& cfg, std::ostream& out)
{
    const auto spec = cfg.problem();
    const auto grid = cfg.grid();
    const auto start = std::chrono::steady_clock::now();
    Solution sol = minimize_ground_state(spec, grid, cfg.solver);
    std::optional<Certificate> cert;
    if (sol.status == SolveStatus::converged)
        cert = certify(sol, spec);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    fs::create_directories(cfg.out_dir);
    write_field(cfg.out_dir / "solution.choqf", sol.u, spec);
    json summary;
    summary["status"] = to_string(sol.status);
    summary["energy"] = sol.energy;
    summary["residual_rel"] = sol.residual_rel;
    summary["pohozaev_rel"] = sol.pohozaev_rel;
    summary["nehari_rel"] = sol.nehari_rel;
    summary["multiplier"] = sol.multiplier;
    summary["iterations"] = sol.iterations;
    summary["hypotheses_pass"] = sol.hypotheses_pass;
    summary["boundary_ratio"] = sol.boundary_ratio;
    summary["N"] = spec.dim;
    summary["alpha"] = spec.alpha;
    summary["nonlinearity"] = nonlinearity_json(spec.nonlinearity);
    summary["M"] = grid.points;
    summary["L"] = grid.length;
    summary["seed"] = cfg.solver.seed;
    if (cert) {
        summary["certificate"] = {
            {"passed", cert->passed()},
            {"violations", cert->violations},
            {"peak_t", cert->profile.t_values[cert->peak_index]},
            {"energy_at_t_max", cert->profile.energies.back()},
        };
    }
    summary["wall_time_s"] = wall;
    open_output(cfg.out_dir, "summary.json") << summary.dump(2) << '\n';

    out << "status=" << to_string(sol.status) << " energy=" << std::setprecision(12) << sol.energy
        << " residual_rel=" << sol.residual_rel << " pohozaev_rel=" << sol.pohozaev_rel
        << " iterations=" << sol.iterations << '\n';
    if (cert)
        for (const auto& v : cert->violations)
            out << "certificate violation: " << v << '\n';

    switch (sol.status) {
    case SolveStatus::converged: return ok;
    case SolveStatus::certificate_failed: return certificate_failure;
    default: return degenerate;
    }
}

int cmd_path(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.solution.empty())
        throw ConfigError("path needs a solution file (--solution or key 'solution')");
    const auto stored = read_field(cfg.solution);
    const auto& u = stored.field;
    const auto& spec = stored.spec;
    if (cfg.has_problem()) {
        const auto want = cfg.problem();
        const auto grid = cfg.grid();
        if (!(grid == u.grid) || want.alpha != spec.alpha || want.dim != spec.dim)
            throw ConfigError("solution header does not match the configured problem/grid");
    }

    const auto c = scaling_coefficients(u, spec);
    const auto ts = log_spaced(cfg.t_min, cfg.t_max, cfg.t_count);
    const auto prof = dilation_profile(c, spec.dim, spec.alpha, ts);
    {
        auto os = open_output(cfg.out_dir, "path.csv");
        write_profile_csv(os, prof);
    }
    const auto peak = std::max_element(prof.energies.begin(), prof.energies.end()) - prof.energies.begin();
    out << std::setprecision(12) << "energy=" << energy(u, spec) << " peak_t=" << prof.t_values[peak]
        << " solution_like=" << (prof.solution_like ? "true" : "false") << '\n';

    if (spec.dim == 2 && cfg.t0) {
        const double t0 = *cfg.t0;
        std::vector<double> spliced;
        constexpr int ramp = 21;
        for (int j = 0; j < ramp; ++j)
            spliced.push_back(t0 * j / (ramp - 1));
        for (double t : ts)
            if (t > t0)
                spliced.push_back(t);
        const auto sp = path_n2(c, spec.alpha, spec.nonlinearity.exponent(), t0, spliced);
        auto os = open_output(cfg.out_dir, "path_spliced.csv");
        write_profile_csv(os, sp);
    }
    return ok;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.sweep_points.empty())
        throw ConfigError("sweep needs a nonempty 'points' list");
    const auto result = run_sweep(cfg.sweep_points, cfg.sweep_grids, cfg.solver, cfg.workers);
    for (const auto& f : cfg.formats) {
        auto os = open_output(cfg.out_dir, "sweep." + f);
        if (f == "csv")
            write_csv(os, result);
        else
            write_jsonl(os, result);
    }
    for (const auto& r : result.rows)
        out << "N=" << r.dim << " alpha=" << r.alpha << " p=" << r.p << " in_range=" << r.in_range
            << " status=" << r.status << (r.warnings.empty() ? "" : " [" + r.warnings + "]") << '\n';
    const double score = result.dichotomy_score();
    out << "dichotomy_score=" << score << " (" << result.scored_count() << " scored rows)\n";
    return score == 1.0 ? ok : dichotomy_mismatch;
}

int cmd_check(const RunConfig& cfg, std::ostream& out)
{
    const auto spec = cfg.problem();
    const auto rep = hypothesis_check(spec);
    const bool two = spec.dim == 2;
    out << "F0: " << (rep.f0 ? "pass" : "fail") << '\n'
        << (two ? "F1': " : "F1: ") << (rep.growth ? "pass" : "fail") << '\n'
        << (two ? "F2': " : "F2: ") << (rep.subcritical ? "pass" : "fail") << '\n'
        << std::setprecision(17) << "interval=(" << rep.interval.lo << ", ";
    if (std::isinf(rep.interval.hi))
        out << "inf";
    else
        out << rep.interval.hi;
    out << ")\n"
        << "result: " << (rep.pass() ? "pass" : "fail") << '\n';
    return rep.pass() ? ok : degenerate;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Ground states of the Choquard equation"};
    app.require_subcommand(1);
    GlobalFlags flags;
    long long seed = 0;
    auto add_globals = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config, "key=value configuration file")->required();
        sub->add_option("--out", flags.out, "output directory");
        sub->add_option("--seed", seed, "random seed");
    };
    auto* solve = app.add_subcommand("solve", "compute and certify a ground state");
    auto* path = app.add_subcommand("path", "dilation-path energies of a stored solution");
    auto* sweep = app.add_subcommand("sweep", "existence/nonexistence parameter study");
    auto* check = app.add_subcommand("check", "hypothesis report and existence interval");
    for (auto* sub : {solve, path, sweep, check})
        add_globals(sub);
    path->add_option("--solution", flags.solution, "field file written by solve");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return config_error;
    }
    for (auto* sub : {solve, path, sweep, check})
        if (sub->count("--seed"))
            flags.seed = seed;

    try {
        const RunConfig cfg = load_with_overrides(flags);
        if (*solve)
            return cmd_solve(cfg, out);
        if (*path)
            return cmd_path(cfg, out);
        if (*sweep)
            return cmd_sweep(cfg, out);
        return cmd_check(cfg, out);
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return config_error;
    } catch (const GridMismatch& e) {
        err << "error: " << e.what() << '\n';
        return config_error;
    } catch (const DegenerateField& e) {
        err << "degenerate: " << e.what() << '\n';
        return degenerate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
}

} // namespace choquard::cli

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "choquard/cli.hpp"
#include "choquard/model.hpp"
#include "choquard/riesz.hpp"
#include "choquard/solver.hpp"
#include "choquard/sweep.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>

using namespace choquard;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body)
{
    Outcome r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.pass)
        ++failures;
    std::printf("%s %d %s: %s\n", r.pass ? "PASS" : "FAIL", id, name.c_str(), r.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Field random_field(const GridSpec& g, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field f(g);
    for (auto& v : f.values)
        v = dist(rng);
    return f;
}

// sum of 1-3 Gaussian bumps with random centres, widths and signs
Field random_bumps(const GridSpec& g, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> centre(-0.15 * g.length, 0.15 * g.length);
    std::uniform_real_distribution<double> width(0.5, 2.5);
    std::uniform_real_distribution<double> amp(-2.0, 3.0);
    std::uniform_int_distribution<int> count(1, 3);
    struct Bump {
        double c[3], w, a;
    };
    std::vector<Bump> bumps(count(rng));
    for (auto& b : bumps) {
        for (double& c : b.c)
            c = centre(rng);
        b.w = width(rng);
        b.a = amp(rng);
    }
    return sample(g, [&](std::span<const double> x) {
        double s = 0.0;
        for (const auto& b : bumps) {
            double r2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                r2 += (x[i] - b.c[i]) * (x[i] - b.c[i]);
            s += b.a * std::exp(-r2 / (b.w * b.w));
        }
        return s;
    });
}

double max_abs_diff(const Field& a, const Field& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Newtonian potential of e^{-r^2} at the origin, by 1-D radial quadrature of the shell formula
double gaussian_potential_at_origin()
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate([](double s) { return s * std::exp(-s * s); }, 0.0,
                                                std::numeric_limits<double>::infinity());
}

double profile_max(const ScalingCoefficients& c, int dim, double alpha)
{
    // coarse scan in log t, then Brent refinement around the best sample
    auto f = [&](double s) { return -dilation_energy(std::exp(s), dim, alpha, c); };
    double best_s = -10.0;
    for (double s = -10.0; s <= 10.0; s += 0.01)
        if (f(s) < f(best_s))
            best_s = s;
    const auto r = boost::math::tools::brent_find_minima(f, best_s - 0.01, best_s + 0.01, 52);
    return std::max(-r.second, -f(best_s));
}

const ProblemSpec& newton_spec()
{
    static const ProblemSpec spec = make_problem(3, 2.0, Nonlinearity::power(2.0));
    return spec;
}

const Solution& newton_solution()
{
    static const Solution sol = minimize_ground_state(newton_spec(), make_grid(3, 32, 16.0), SolverConfig{});
    return sol;
}

std::optional<nlohmann::json> solve_summary(const fs::path& cfg, const fs::path& out)
{
    std::ostringstream sink;
    cli::run({"solve", "--config", cfg.string(), "--out", out.string(), "--seed", "11"}, sink, sink);
    std::ifstream is(out / "summary.json");
    if (!is)
        return std::nullopt;
    return nlohmann::json::parse(is);
}

} // namespace

int main()
{
    report(1, "riesz_backend_equivalence", [] {
        std::mt19937_64 rng(1);
        double worst = 0.0;
        for (int dim : {2, 3}) {
            const auto g = make_grid(dim, 16, 8.0);
            const auto k = build_kernel(g, dim == 2 ? 1.0 : 2.0);
            const auto f = random_field(g, rng);
            worst = std::max(worst, max_abs_diff(riesz_convolve(f, k), riesz_convolve_direct(f, k)));
        }
        return Outcome{worst <= 1e-10, fmt("max_abs=%.3e (tol 1e-10)", worst)};
    });

    report(2, "gaussian_potential_anchor", [] {
        const auto g = make_grid(3, 48, 16.0);
        const auto u = sample(g, [](std::span<const double> x) { return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); });
        const auto phi = riesz_convolve(u, build_kernel(g, 2.0));
        const int o = g.origin_index();
        const double got = phi[(static_cast<std::size_t>(o) * g.points + o) * g.points + o];
        const double oracle = gaussian_potential_at_origin();
        const double rel = std::abs(got - oracle) / oracle;
        return Outcome{rel <= 2e-3, fmt("phi(0)=%.8f oracle=%.8f rel=%.3e (tol 2e-3)", got, oracle, rel)};
    });

    report(3, "gradient_consistency", [] {
        const auto g = make_grid(2, 16, 8.0);
        const auto spec = make_problem(2, 1.0, Nonlinearity::power(2.5));
        std::mt19937_64 rng(3);
        double worst = 0.0;
        for (int pair = 0; pair < 20; ++pair) {
            const auto u = random_bumps(g, rng);
            const auto w = random_bumps(g, rng);
            const double analytic = l2_inner(el_residual(u, spec), w);
            double best = std::numeric_limits<double>::infinity();
            for (double eps : {1e-3, 3e-4, 1e-4, 3e-5, 1e-5}) {
                const double fd = (energy(u + eps * w, spec) - energy(u - eps * w, spec)) / (2.0 * eps);
                best = std::min(best, std::abs(fd - analytic) / std::abs(analytic));
            }
            worst = std::max(worst, best);
        }
        return Outcome{worst <= 1e-6, fmt("worst rel=%.3e over 20 pairs (tol 1e-6)", worst)};
    });

    report(4, "ground_state_certification", [] {
        const auto& sol = newton_solution();
        const bool pass = sol.status == SolveStatus::converged && sol.residual_rel <= 1e-8 && sol.nehari_rel <= 1e-6 &&
                          sol.pohozaev_rel <= 1e-4;
        return Outcome{pass, fmt("status=%s residual_rel=%.3e (tol 1e-8) nehari_rel=%.3e (tol 1e-6) "
                                 "pohozaev_rel=%.3e (tol 1e-4) energy=%.10g",
                                 to_string(sol.status).c_str(), sol.residual_rel, sol.nehari_rel, sol.pohozaev_rel,
                                 sol.energy)};
    });

    report(5, "path_maximality", [] {
        const auto& sol = newton_solution();
        const auto ts = log_spaced(0.25, 4.0, 97);
        const auto prof = dilation_profile(sol.u, newton_spec(), ts);
        const auto nearest = std::min_element(ts.begin(), ts.end(), [](double a, double b) {
                                 return std::abs(std::log(a)) < std::abs(std::log(b));
                             }) - ts.begin();
        bool strict = true;
        for (std::size_t j = 0; j < ts.size(); ++j)
            if (static_cast<long>(j) != nearest && !(prof.energies[j] < sol.energy))
                strict = false;
        const auto peak = std::max_element(prof.energies.begin(), prof.energies.end()) - prof.energies.begin();
        const bool pass = peak == nearest && strict && prof.energies.back() < 0.0;
        return Outcome{pass, fmt("peak t=%.6f (nearest to 1: %.6f) others strictly below=%s E(t=4)=%.6g",
                                 ts[peak], ts[nearest], strict ? "yes" : "no", prof.energies.back())};
    });

    report(6, "planar_spliced_path", [] {
        const auto spec = make_problem(2, 1.0, Nonlinearity::power(2.5));
        Solution sol = minimize_ground_state(spec, make_grid(2, 128, 20.0), SolverConfig{});
        const auto cert = certify(sol, spec);
        const double t0 = 0.1;
        const auto c = scaling_coefficients(sol.u, spec);
        const double gap = std::abs(amplitude_branch_energy(t0, t0, 2.5, 1.0, c) - dilation_energy(t0, 2, 1.0, c));
        std::vector<double> ts;
        for (int j = 0; j <= 200; ++j)
            ts.push_back(t0 * j / 200.0);
        const auto prof = path_n2(sol.u, spec, t0, ts);
        const double low_max = *std::max_element(prof.energies.begin(), prof.energies.end());
        const bool pass = cert.passed() && gap <= 1e-12 * std::max(1.0, sol.energy) && low_max < sol.energy;
        return Outcome{pass, fmt("certified=%s splice gap=%.3e (tol 1e-12) max_{t<=t0} E=%.6g < I(u)=%.6g",
                                 cert.passed() ? "yes" : "no", gap, low_max, sol.energy)};
    });

    report(7, "existence_dichotomy", [] {
        const auto pts = canonical_dichotomy_points();
        const auto res = run_sweep(pts, canonical_sweep_grids(), SolverConfig{});
        bool pass = res.dichotomy_score() == 1.0;
        std::string detail;
        for (const auto& r : res.rows) {
            if (r.in_range)
                pass = pass && r.status == "converged" && r.energy > 0.0;
            else
                pass = pass && (r.status == "degenerate_vanishing" || r.status == "degenerate_spreading");
            detail += fmt("p=%.1f:%s ", r.p, r.status.c_str());
        }
        return Outcome{pass, detail + fmt("score=%.3f over %zu scored rows", res.dichotomy_score(), res.scored_count())};
    });

    report(8, "grid_refinement", [] {
        const double coarse = newton_solution().energy;
        const auto fine = minimize_ground_state(newton_spec(), make_grid(3, 48, 16.0), SolverConfig{});
        const double rel = std::abs(fine.energy - coarse) / std::abs(fine.energy);
        const bool pass = newton_solution().status == SolveStatus::converged && fine.status == SolveStatus::converged &&
                          rel <= 0.02;
        return Outcome{pass, fmt("E(M=32)=%.10g E(M=48)=%.10g rel=%.3e (tol 0.02)", coarse, fine.energy, rel)};
    });

    report(9, "mountain_pass_lower_bound", [] {
        const auto& sol = newton_solution();
        std::mt19937_64 rng(9);
        double worst = std::numeric_limits<double>::infinity();
        int sampled = 0;
        while (sampled < 50) {
            const auto w = random_bumps(sol.u.grid, rng);
            const auto c = scaling_coefficients(w, newton_spec());
            if (!(c.nonlocal > 0.0))
                continue;
            worst = std::min(worst, profile_max(c, 3, 2.0) - sol.energy);
            ++sampled;
        }
        return Outcome{worst >= -1e-6, fmt("min over 50 fields of max_t I(w_t) - I(u) = %.6g (tol -1e-6)", worst)};
    });

    report(10, "cli_determinism", [] {
        const auto dir = fs::temp_directory_path() / "choquard_acceptance_determinism";
        fs::remove_all(dir);
        fs::create_directories(dir);
        std::ofstream(dir / "run.cfg") << "N=3\nalpha=2\np=2\nM=32\nL=16\n";
        auto a = solve_summary(dir / "run.cfg", dir / "a");
        auto b = solve_summary(dir / "run.cfg", dir / "b");
        fs::remove_all(dir);
        if (!a || !b)
            return Outcome{false, "summary.json missing"};
        a->erase("wall_time_s");
        b->erase("wall_time_s");
        return Outcome{*a == *b, fmt("summaries %s (status=%s)", *a == *b ? "identical" : "differ",
                                     (*a)["status"].get<std::string>().c_str())};
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

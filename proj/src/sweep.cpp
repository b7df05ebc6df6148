#include "choquard/sweep.hpp"

#include "choquard/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

namespace choquard {

namespace {

std::string format_real(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

SweepRow solve_row(const SweepPoint& pt, const GridsByDim& grids, const SolverConfig& cfg)
{
    SweepRow row;
    row.dim = pt.dim;
    row.alpha = pt.alpha;
    row.p = pt.p;
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto iv = existence_range(pt.dim, pt.alpha);
        row.interval_lo = iv.lo;
        row.interval_hi = iv.hi;
        row.in_range = iv.contains(pt.p);
        if (std::abs(pt.p - iv.lo) < kEndpointBuffer || std::abs(pt.p - iv.hi) < kEndpointBuffer) {
            row.near_endpoint = true;
            row.warnings = "near_endpoint";
        }

        const auto it = grids.find(pt.dim);
        if (it == grids.end())
            throw ParameterError("no grid configured for N=" + std::to_string(pt.dim));
        const auto spec = make_problem(pt.dim, pt.alpha, Nonlinearity::power(pt.p));
        const auto sol = minimize_ground_state(spec, it->second, cfg);
        row.status = to_string(sol.status);
        row.energy = sol.energy;
        row.residual_rel = sol.residual_rel;
        row.pohozaev_rel = sol.pohozaev_rel;
        row.iterations = sol.iterations;
    } catch (const std::exception& e) {
        row.status = "error";
        row.warnings = row.warnings.empty() ? std::string("error: ") + e.what()
                                            : row.warnings + "; error: " + e.what();
    }
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

} // namespace

bool SweepRow::matches_prediction() const
{
    if (in_range)
        return status == to_string(SolveStatus::converged) && energy > 0.0;
    return status == to_string(SolveStatus::degenerate_vanishing) ||
           status == to_string(SolveStatus::degenerate_spreading);
}

std::size_t SweepResult::scored_count() const
{
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.scored(); }));
}

double SweepResult::dichotomy_score() const
{
    std::size_t scored = 0;
    std::size_t hits = 0;
    for (const auto& r : rows) {
        if (!r.scored())
            continue;
        ++scored;
        hits += r.matches_prediction() ? 1 : 0;
    }
    return scored == 0 ? 1.0 : double(hits) / double(scored);
}

GridsByDim canonical_sweep_grids()
{
    return {{2, make_grid(2, 64, 20.0)}, {3, make_grid(3, 64, 16.0)}};
}

std::vector<SweepPoint> canonical_dichotomy_points()
{
    return {{3, 1.0, 2.0}, {3, 1.0, 2.5}, {3, 1.0, 3.0}, {3, 1.0, 1.2}, {3, 1.0, 4.5}};
}

SweepResult run_sweep(std::span<const SweepPoint> points, const GridsByDim& grids,
                      const SolverConfig& cfg, unsigned workers)
{
    if (points.empty())
        throw ParameterError("sweep needs at least one point");
    validate(cfg);
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(points.size()));

    SweepResult result;
    result.rows.resize(points.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++)
            result.rows[i] = solve_row(points[i], grids, cfg);
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    return result;
}

void write_csv(std::ostream& os, const SweepResult& result)
{
    os << "N,alpha,p,interval_lo,interval_hi,in_range,status,energy,residual_rel,"
          "pohozaev_rel,iterations,wall_time_s,warnings\n";
    for (const auto& r : result.rows) {
        os << r.dim << ',' << format_real(r.alpha) << ',' << format_real(r.p) << ','
           << format_real(r.interval_lo) << ',' << format_real(r.interval_hi) << ','
           << (r.in_range ? "true" : "false") << ',' << r.status << ',' << format_real(r.energy) << ','
           << format_real(r.residual_rel) << ',' << format_real(r.pohozaev_rel) << ',' << r.iterations
           << ',' << format_real(r.wall_time_s) << ',' << csv_escape(r.warnings) << '\n';
    }
}

void write_jsonl(std::ostream& os, const SweepResult& result)
{
    for (const auto& r : result.rows) {
        nlohmann::json j;
        j["N"] = r.dim;
        j["alpha"] = r.alpha;
        j["p"] = r.p;
        j["interval_lo"] = r.interval_lo;
        j["interval_hi"] = std::isinf(r.interval_hi) ? nlohmann::json(nullptr) : nlohmann::json(r.interval_hi);
        j["in_range"] = r.in_range;
        j["status"] = r.status;
        j["energy"] = r.energy;
        j["residual_rel"] = r.residual_rel;
        j["pohozaev_rel"] = r.pohozaev_rel;
        j["iterations"] = r.iterations;
        j["wall_time_s"] = r.wall_time_s;
        j["warnings"] = r.warnings;
        os << j.dump() << '\n';
    }
}

} // namespace choquard

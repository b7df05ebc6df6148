#pragma once

#include "choquard/grid.hpp"
#include "choquard/model.hpp"
#include "choquard/solver.hpp"

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace choquard {

struct SweepPoint {
    int dim = 3;
    double alpha = 1.0;
    double p = 2.0;
};

/// Points closer than this to either end of the existence window are run
/// but left out of the dichotomy score.
inline constexpr double kEndpointBuffer = 0.2;

struct SweepRow {
    int dim = 3;
    double alpha = 0.0;
    double p = 0.0;
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    bool in_range = false;
    std::string status;
    double energy = 0.0;
    double residual_rel = 0.0;
    double pohozaev_rel = 0.0;
    int iterations = 0;
    double wall_time_s = 0.0;
    std::string warnings;
    bool near_endpoint = false;

    bool scored() const { return !near_endpoint; }
    /// In-range rows should converge, out-of-range rows should degenerate.
    bool matches_prediction() const;
};

struct SweepResult {
    std::vector<SweepRow> rows;

    std::size_t scored_count() const;
    /// Fraction of scored rows matching the existence prediction (1 if none scored).
    double dichotomy_score() const;
};

using GridsByDim = std::map<int, GridSpec>;

/// N=2: M=64, L=20; N=3: M=64, L=16.
GridsByDim canonical_sweep_grids();
/// N=3, alpha=1 with p in {2, 2.5, 3} (inside (4/3, 4)) and {1.2, 4.5} (outside).
std::vector<SweepPoint> canonical_dichotomy_points();

/// One independent ground-state solve per point, run on up to `workers`
/// threads (0 = hardware concurrency). Rows come back in input order; a
/// failing row records its error instead of aborting the sweep.
SweepResult run_sweep(std::span<const SweepPoint> points, const GridsByDim& grids,
                      const SolverConfig& cfg, unsigned workers = 0);

/// Header plus one row per record; 17 significant digits; +inf written as "inf".
void write_csv(std::ostream& os, const SweepResult& result);
/// One JSON object per row with the record's field names; +inf becomes null.
void write_jsonl(std::ostream& os, const SweepResult& result);

} // namespace choquard

#pragma once

#include "choquard/error.hpp"
#include "choquard/grid.hpp"
#include "choquard/model.hpp"
#include "choquard/solver.hpp"
#include "choquard/sweep.hpp"

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace choquard {

class ConfigError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Flat key=value run configuration. Lines starting with '#' and blank lines
/// are ignored; unknown or repeated keys are errors.
///
/// Problem:  N, alpha, p | terms (c:p pairs, comma separated)
/// Grid:     M, L
/// Solver:   max_iters, tol_residual, armijo_c, armijo_shrink, recenter_every,
///           init_amplitude, init_width, init_noise, seed, pohozaev_defect
/// Output:   out, formats (csv,jsonl)
/// Path:     solution, t_min, t_max, t_count, t0
/// Sweep:    points (N:alpha:p entries separated by ';'), M2, L2, M3, L3, workers
struct RunConfig {
    std::optional<int> dim;
    std::optional<double> alpha;
    std::optional<double> p;
    std::vector<PowerTerm> terms;

    int points_per_axis = 32;
    double box_length = 16.0;

    SolverConfig solver;

    std::filesystem::path out_dir = ".";
    std::vector<std::string> formats = {"csv", "jsonl"};

    std::filesystem::path solution;
    double t_min = 0.25;
    double t_max = 4.0;
    int t_count = 97;
    std::optional<double> t0;

    std::vector<SweepPoint> sweep_points;
    GridsByDim sweep_grids = canonical_sweep_grids();
    unsigned workers = 0;

    bool has_problem() const { return dim.has_value() || alpha.has_value() || p.has_value() || !terms.empty(); }
    /// Throws ConfigError/ParameterError when N, alpha, or the nonlinearity is missing or invalid.
    ProblemSpec problem() const;
    GridSpec grid() const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Parses "c:p,c:p" into power terms.
std::vector<PowerTerm> parse_terms(const std::string& text);
/// Parses "N:alpha:p;N:alpha:p".
std::vector<SweepPoint> parse_points(const std::string& text);

} // namespace choquard

#pragma once

#include "choquard/grid.hpp"
#include "choquard/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace choquard {

struct SolverConfig {
    int max_iters = 2000;
    double tol_residual = 1e-8;   ///< on |r(u)|_2 / |u|_H1
    double armijo_c = 1e-4;
    double armijo_shrink = 0.5;
    int recenter_every = 25;
    double init_amplitude = 1.0;
    double init_width = 1.0;
    /// Relative amplitude of seeded multiplicative noise on the initial
    /// Gaussian; 0 disables it.
    double init_noise = 0.0;
    std::uint64_t seed = 0;
    /// A converged critical point whose |P(u)| / |u|_H1^2 exceeds this is a
    /// lattice-pinned concentration, not a resolved solution.
    double pohozaev_defect = 0.05;
};

/// Throws ParameterError when a field is out of range.
void validate(const SolverConfig& cfg);

enum class SolveStatus {
    converged,
    degenerate_vanishing,
    degenerate_spreading,
    max_iters,
    certificate_failed,
};

std::string to_string(SolveStatus s);
bool is_degenerate(SolveStatus s);

struct Solution {
    Field u;
    double energy = 0.0;
    double residual_rel = 0.0; ///< |r(u)|_2 / |u|_H1
    double pohozaev_rel = 0.0; ///< |P(u)| / |u|_H1^2
    double nehari_rel = 0.0;   ///< |N(u)| / |u|_H1^2
    double multiplier = 0.0;   ///< lambda of the quotient minimizer before rescaling
    int iterations = 0;
    SolveStatus status = SolveStatus::max_iters;
    bool hypotheses_pass = false;

    /// Per-iteration quotient values; the witness for degenerate runs.
    std::vector<double> quotient_trajectory;
    std::vector<double> mass_trajectory;
    std::vector<double> width_trajectory; ///< squared effective width
    /// Accepted steps that increased the quotient (should stay 0).
    int monotonicity_violations = 0;
    /// Largest relative change of the quotient across a recentering.
    double recenter_drift = 0.0;
    double boundary_ratio = 0.0;
};

/// Q(u) = (|grad u|^2 + |u|^2) / D(u)^(1/p); invariant under u -> a u.
/// Throws DegenerateField if D(u) = 0 (including u = 0).
double weinstein_quotient(const Field& u, const ProblemSpec& spec);

/// Second moment of u^2 about its max-|u| sample (minimal-image distance)
/// divided by the mass.
double effective_width_sq(const Field& u);

/// Centered Gaussian a exp(-|x|^2 / w^2), optionally with seeded noise.
Field initial_guess(const GridSpec& grid, const SolverConfig& cfg);

/// Preconditioned descent on the Weinstein quotient followed by the exact
/// amplitude rescaling u = lambda^(1/(2p-2)) v to a critical point of I.
Solution minimize_ground_state(const ProblemSpec& spec, const GridSpec& grid, const SolverConfig& cfg);

struct CertificateThresholds {
    double residual = 1e-8;
    double nehari = 1e-6;
    double pohozaev = 1e-4;
    double t_lo = 0.25;
    double t_hi = 4.0;
    int t_count = 97;
};

struct Certificate {
    double residual_rel = 0.0;
    double nehari_rel = 0.0;
    double pohozaev_rel = 0.0;
    double energy = 0.0;
    PathProfile profile;
    std::size_t peak_index = 0;
    std::size_t unit_index = 0; ///< t-grid point nearest t = 1
    std::vector<std::string> violations;
    bool passed() const { return violations.empty(); }
};

/// Recomputes every identity from scratch and checks dilation-path maximality.
/// Throws ParameterError for a zero field.
Certificate certify(const Field& u, const ProblemSpec& spec, const CertificateThresholds& th = {});
/// Same, and downgrades sol.status to certificate_failed on any violation.
Certificate certify(Solution& sol, const ProblemSpec& spec, const CertificateThresholds& th = {});

} // namespace choquard

#pragma once

#include "choquard/grid.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace choquard {

struct PowerTerm {
    double coefficient = 1.0; ///< c > 0
    double exponent = 2.0;    ///< p > 1
};

/// F(s) = sum_i c_i |s|^p_i / p_i, F'(s) = sum_i c_i |s|^(p_i - 2) s.
class Nonlinearity {
public:
    explicit Nonlinearity(std::vector<PowerTerm> terms);
    static Nonlinearity power(double p) { return Nonlinearity({PowerTerm{1.0, p}}); }

    const std::vector<PowerTerm>& terms() const { return terms_; }
    bool homogeneous() const { return terms_.size() == 1; }
    /// Homogeneity degree; throws ParameterError for multi-term sums.
    double exponent() const;

private:
    std::vector<PowerTerm> terms_;
};

struct ProblemSpec {
    int dim = 3;
    double alpha = 2.0;
    Nonlinearity nonlinearity = Nonlinearity::power(2.0);
};

/// Checks 0 < alpha < N and N in {2,3}.
ProblemSpec make_problem(int dim, double alpha, Nonlinearity nl);

struct FValue {
    double F = 0.0;
    double Fprime = 0.0;
};

FValue f_eval(const Nonlinearity& nl, double s);

/// Pointwise F(u) and F'(u).
Field apply_F(const Nonlinearity& nl, const Field& u);
Field apply_Fprime(const Nonlinearity& nl, const Field& u);

/// D(u) = <I_alpha * F(u), F(u)>.
double nonlocal_term(const Field& u, const ProblemSpec& spec);

/// I(u) = (|grad u|^2 + |u|^2)/2 - D(u)/2.
double energy(const Field& u, const ProblemSpec& spec);

/// (-Laplacian + 1) u - (I_alpha * F(u)) F'(u).
Field el_residual(const Field& u, const ProblemSpec& spec);

/// |grad u|^2 + |u|^2 - <I_alpha * F(u), F'(u) u>.
double nehari(const Field& u, const ProblemSpec& spec);

/// (N-2)/2 |grad u|^2 + N/2 |u|^2 - (N+alpha)/2 D(u).
double pohozaev(const Field& u, const ProblemSpec& spec);

/// The three integrals governing the energy along dilations v(x/t).
struct ScalingCoefficients {
    double grad = 0.0;     ///< A = |grad v|^2
    double mass = 0.0;     ///< B = |v|^2
    double nonlocal = 0.0; ///< C = D(v)
};

ScalingCoefficients scaling_coefficients(const Field& v, const ProblemSpec& spec);

/// t^(N-2) A/2 + t^N B/2 - t^(N+alpha) C/2.
double dilation_energy(double t, int dim, double alpha, const ScalingCoefficients& c);

/// (N-2)A/2 + NB/2 - (N+alpha)C/2, the t-derivative of the dilation energy at t = 1.
double pohozaev_from(const ScalingCoefficients& c, int dim, double alpha);

/// I(v(e^-sigma x)) in closed form.
double scaled_energy(double sigma, const Field& v, const ProblemSpec& spec);
double scaled_energy(double sigma, int dim, double alpha, const ScalingCoefficients& c);

struct PathProfile {
    std::vector<double> t_values;
    std::vector<double> energies;
    ScalingCoefficients coefficients;
    std::optional<double> t0;
    /// True when the triple satisfies the Pohozaev relation within
    /// kSolutionTripleTol relative to A + B; only then is the peak at t = 1.
    bool solution_like = false;
};

inline constexpr double kSolutionTripleTol = 1e-4;

PathProfile dilation_profile(const ScalingCoefficients& c, int dim, double alpha,
                             std::span<const double> t_values);
PathProfile dilation_profile(const Field& v, const ProblemSpec& spec, std::span<const double> t_values);

/// Energy of (t/t0) v(x/t0) in two dimensions, for t in [0, t0].
double amplitude_branch_energy(double t, double t0, double p, double alpha, const ScalingCoefficients& c);

/// Two-dimensional path: amplitude ramp up to t0, dilation beyond.
PathProfile path_n2(const ScalingCoefficients& c, double alpha, double p, double t0,
                    std::span<const double> t_values);
PathProfile path_n2(const Field& v, const ProblemSpec& spec, double t0, std::span<const double> t_values);

/// n log-spaced points in [lo, hi], endpoints exact.
std::vector<double> log_spaced(double lo, double hi, int n);

struct ExistenceInterval {
    double lo = 0.0;
    double hi = 0.0; ///< +infinity in two dimensions
    bool contains(double p) const { return p > lo && p < hi; }
};

/// Exponent window (1 + alpha/N, (N + alpha)/(N - 2)) for power nonlinearities;
/// upper end is +infinity when N = 2.
ExistenceInterval existence_range(int dim, double alpha);

struct HypothesisReport {
    bool f0 = false;     ///< F does not vanish identically
    bool growth = false; ///< (F1) for N = 3, (F1') for N = 2
    bool subcritical = false; ///< (F2) for N = 3, (F2') for N = 2
    ExistenceInterval interval;
    bool pass() const { return f0 && growth && subcritical; }
};

HypothesisReport hypothesis_check(const ProblemSpec& spec);

struct IdentityCombination {
    double grad_coef = 0.0;
    double mass_coef = 0.0;
    double combo = 0.0;
    /// Coefficients of equal sign: combo = 0 forces u = 0.
    bool forces_trivial = false;
};

/// ((N-2)/2 - (N+alpha)/(2p)) |grad u|^2 + (N/2 - (N+alpha)/(2p)) |u|^2.
/// Equals pohozaev(u) - (N+alpha)/(2p) nehari(u) for homogeneous F.
IdentityCombination identity_combination(const Field& u, const ProblemSpec& spec);

} // namespace choquard

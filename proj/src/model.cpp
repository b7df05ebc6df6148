#include "choquard/model.hpp"

#include "choquard/error.hpp"
#include "choquard/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace choquard {

Nonlinearity::Nonlinearity(std::vector<PowerTerm> terms) : terms_(std::move(terms))
{
    if (terms_.empty())
        throw ParameterError("nonlinearity needs at least one power term");
    for (const auto& t : terms_) {
        if (!(t.coefficient > 0.0) || !std::isfinite(t.coefficient))
            throw ParameterError("power-term coefficients must be positive");
        if (!(t.exponent > 1.0) || !std::isfinite(t.exponent))
            throw ParameterError("power-term exponents must exceed 1");
    }
}

double Nonlinearity::exponent() const
{
    if (!homogeneous())
        throw ParameterError("multi-term nonlinearity has no single exponent");
    return terms_.front().exponent;
}

ProblemSpec make_problem(int dim, double alpha, Nonlinearity nl)
{
    if (dim != 2 && dim != 3)
        throw ParameterError("dimension must be 2 or 3");
    if (!(alpha > 0.0 && alpha < dim))
        throw ParameterError("alpha must lie in (0, N)");
    return ProblemSpec{dim, alpha, std::move(nl)};
}

FValue f_eval(const Nonlinearity& nl, double s)
{
    FValue v;
    const double a = std::abs(s);
    if (a == 0.0)
        return v;
    for (const auto& t : nl.terms()) {
        const double pw = std::pow(a, t.exponent - 1.0);
        v.F += t.coefficient * pw * a / t.exponent;
        v.Fprime += t.coefficient * pw;
    }
    if (s < 0.0)
        v.Fprime = -v.Fprime;
    return v;
}

Field apply_F(const Nonlinearity& nl, const Field& u)
{
    Field out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] = f_eval(nl, u[i]).F;
    return out;
}

Field apply_Fprime(const Nonlinearity& nl, const Field& u)
{
    Field out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] = f_eval(nl, u[i]).Fprime;
    return out;
}

namespace {

Field potential_of(const Field& u, const ProblemSpec& spec, const Field& Fu)
{
    return riesz_convolve(Fu, *cached_kernel(u.grid, spec.alpha));
}

} // namespace

double nonlocal_term(const Field& u, const ProblemSpec& spec)
{
    const Field Fu = apply_F(spec.nonlinearity, u);
    return l2_inner(potential_of(u, spec, Fu), Fu);
}

double energy(const Field& u, const ProblemSpec& spec)
{
    const auto c = scaling_coefficients(u, spec);
    return 0.5 * c.grad + 0.5 * c.mass - 0.5 * c.nonlocal;
}

Field el_residual(const Field& u, const ProblemSpec& spec)
{
    const Field Fu = apply_F(spec.nonlinearity, u);
    const Field pot = potential_of(u, spec, Fu);
    Field r = apply_helmholtz(u);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= pot[i] * f_eval(spec.nonlinearity, u[i]).Fprime;
    return r;
}

double nehari(const Field& u, const ProblemSpec& spec)
{
    const auto h1 = h1_seminorms(u);
    const Field Fu = apply_F(spec.nonlinearity, u);
    const Field pot = potential_of(u, spec, Fu);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += pot[i] * f_eval(spec.nonlinearity, u[i]).Fprime * u[i];
    return h1.grad_sq + h1.mass_sq - u.grid.cell_volume() * acc;
}

double pohozaev(const Field& u, const ProblemSpec& spec)
{
    return pohozaev_from(scaling_coefficients(u, spec), spec.dim, spec.alpha);
}

ScalingCoefficients scaling_coefficients(const Field& v, const ProblemSpec& spec)
{
    const auto h1 = h1_seminorms(v);
    return {h1.grad_sq, h1.mass_sq, nonlocal_term(v, spec)};
}

double dilation_energy(double t, int dim, double alpha, const ScalingCoefficients& c)
{
    return 0.5 * std::pow(t, dim - 2) * c.grad + 0.5 * std::pow(t, dim) * c.mass -
           0.5 * std::pow(t, dim + alpha) * c.nonlocal;
}

double pohozaev_from(const ScalingCoefficients& c, int dim, double alpha)
{
    return 0.5 * (dim - 2) * c.grad + 0.5 * dim * c.mass - 0.5 * (dim + alpha) * c.nonlocal;
}

double scaled_energy(double sigma, int dim, double alpha, const ScalingCoefficients& c)
{
    return dilation_energy(std::exp(sigma), dim, alpha, c);
}

double scaled_energy(double sigma, const Field& v, const ProblemSpec& spec)
{
    return scaled_energy(sigma, spec.dim, spec.alpha, scaling_coefficients(v, spec));
}

PathProfile dilation_profile(const ScalingCoefficients& c, int dim, double alpha,
                             std::span<const double> t_values)
{
    PathProfile prof;
    prof.coefficients = c;
    for (double t : t_values) {
        if (!(t > 0.0))
            throw ParameterError("dilation parameters must be positive");
        prof.t_values.push_back(t);
        prof.energies.push_back(dilation_energy(t, dim, alpha, c));
    }
    const double scale = c.grad + c.mass;
    prof.solution_like = scale > 0.0 && c.nonlocal > 0.0 &&
                         std::abs(pohozaev_from(c, dim, alpha)) <= kSolutionTripleTol * scale;
    return prof;
}

PathProfile dilation_profile(const Field& v, const ProblemSpec& spec, std::span<const double> t_values)
{
    if (v.is_zero())
        throw ParameterError("dilation profile of the zero field");
    return dilation_profile(scaling_coefficients(v, spec), spec.dim, spec.alpha, t_values);
}

double amplitude_branch_energy(double t, double t0, double p, double alpha, const ScalingCoefficients& c)
{
    // w = v(x/t0) in 2-D: |grad w|^2 = A, |w|^2 = t0^2 B, D(w) = t0^(2+alpha) C
    const double s = t / t0;
    return 0.5 * s * s * (c.grad + t0 * t0 * c.mass) -
           0.5 * std::pow(s, 2.0 * p) * std::pow(t0, 2.0 + alpha) * c.nonlocal;
}

PathProfile path_n2(const ScalingCoefficients& c, double alpha, double p, double t0,
                    std::span<const double> t_values)
{
    if (!(t0 > 0.0 && t0 < 1.0))
        throw ParameterError("splice point t0 must lie in (0, 1)");
    PathProfile prof;
    prof.coefficients = c;
    prof.t0 = t0;
    for (double t : t_values) {
        if (!(t >= 0.0))
            throw ParameterError("path parameters must be nonnegative");
        prof.t_values.push_back(t);
        prof.energies.push_back(t <= t0 ? amplitude_branch_energy(t, t0, p, alpha, c)
                                        : dilation_energy(t, 2, alpha, c));
    }
    const double scale = c.grad + c.mass;
    prof.solution_like = scale > 0.0 && c.nonlocal > 0.0 &&
                         std::abs(pohozaev_from(c, 2, alpha)) <= kSolutionTripleTol * scale;
    return prof;
}

PathProfile path_n2(const Field& v, const ProblemSpec& spec, double t0, std::span<const double> t_values)
{
    if (spec.dim != 2)
        throw ParameterError("spliced path is defined for N = 2 only");
    const double p = spec.nonlinearity.exponent();
    return path_n2(scaling_coefficients(v, spec), spec.alpha, p, t0, t_values);
}

std::vector<double> log_spaced(double lo, double hi, int n)
{
    if (!(lo > 0.0 && hi > lo) || n < 2)
        throw ParameterError("log_spaced: need 0 < lo < hi and n >= 2");
    std::vector<double> t(n);
    for (int j = 0; j < n; ++j)
        t[j] = lo * std::pow(hi / lo, double(j) / double(n - 1));
    t.back() = hi;
    return t;
}

ExistenceInterval existence_range(int dim, double alpha)
{
    if (dim != 2 && dim != 3)
        throw ParameterError("dimension must be 2 or 3");
    if (!(alpha > 0.0 && alpha < dim))
        throw ParameterError("alpha must lie in (0, N)");
    ExistenceInterval iv;
    iv.lo = 1.0 + alpha / dim;
    iv.hi = dim == 2 ? std::numeric_limits<double>::infinity() : (dim + alpha) / (dim - 2.0);
    return iv;
}

HypothesisReport hypothesis_check(const ProblemSpec& spec)
{
    HypothesisReport rep;
    rep.interval = existence_range(spec.dim, spec.alpha);
    // positive coefficients: F(s) > 0 for every s != 0
    rep.f0 = true;
    rep.growth = true;
    rep.subcritical = true;
    for (const auto& t : spec.nonlinearity.terms()) {
        const double p = t.exponent;
        // |F'(s)| ~ |s|^(p-1) must sit between |s|^(alpha/N) and the upper power
        rep.growth = rep.growth && p >= rep.interval.lo && p <= rep.interval.hi;
        rep.subcritical = rep.subcritical && rep.interval.contains(p);
    }
    return rep;
}

IdentityCombination identity_combination(const Field& u, const ProblemSpec& spec)
{
    const double p = spec.nonlinearity.exponent();
    const double n = spec.dim;
    const double ratio = (n + spec.alpha) / (2.0 * p);
    IdentityCombination ic;
    ic.grad_coef = 0.5 * (n - 2.0) - ratio;
    ic.mass_coef = 0.5 * n - ratio;
    const auto h1 = h1_seminorms(u);
    ic.combo = ic.grad_coef * h1.grad_sq + ic.mass_coef * h1.mass_sq;
    ic.forces_trivial = ic.grad_coef * ic.mass_coef >= 0.0;
    return ic;
}

} // namespace choquard

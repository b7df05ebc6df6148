#include "choquard/grid.hpp"

#include "choquard/error.hpp"
#include "choquard/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace choquard {

namespace {

void require_same_grid(const Field& a, const Field& b)
{
    if (!(a.grid == b.grid) || a.size() != b.size())
        throw GridMismatch("fields live on different grids");
}

// |2 pi k / L|^2 on the half spectrum, plus the multiplicity of each entry
// in the full spectrum (conjugate pairs counted twice).
struct HalfSpectrum {
    std::vector<double> wave_sq;
    std::vector<double> weight;
};

HalfSpectrum half_spectrum(const GridSpec& g)
{
    const int m = g.points;
    const int half = m / 2 + 1;
    const std::size_t n = fft::spectrum_size(g.dim, m);
    HalfSpectrum hs;
    hs.wave_sq.resize(n);
    hs.weight.resize(n);
    const double scale = 2.0 * std::numbers::pi / g.length;
    for (std::size_t idx = 0; idx < n; ++idx) {
        std::size_t rest = idx;
        const int last = static_cast<int>(rest % half);
        rest /= half;
        double k2 = double(last) * last;
        for (int axis = 0; axis < g.dim - 1; ++axis) {
            const int k = fft::mode(static_cast<int>(rest % m), m);
            rest /= m;
            k2 += double(k) * k;
        }
        hs.wave_sq[idx] = scale * scale * k2;
        hs.weight[idx] = (last == 0 || last == m / 2) ? 1.0 : 2.0;
    }
    return hs;
}

template <class Multiplier>
Field apply_multiplier(const Field& u, Multiplier&& mult)
{
    const auto& g = u.grid;
    std::vector<fft::Complex> spec(fft::spectrum_size(g.dim, g.points));
    fft::forward(g.dim, g.points, u.values, spec);
    const auto hs = half_spectrum(g);
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < spec.size(); ++i)
        spec[i] *= mult(hs.wave_sq[i]) * inv_n;
    Field out(g);
    fft::inverse(g.dim, g.points, spec, out.values);
    return out;
}

} // namespace

double GridSpec::cell_volume() const
{
    return std::pow(spacing(), dim);
}

std::size_t GridSpec::size() const
{
    return fft::real_size(dim, points);
}

GridSpec make_grid(int dim, int points, double length)
{
    if (dim != 2 && dim != 3)
        throw ParameterError("dimension must be 2 or 3, got " + std::to_string(dim));
    if (points < 8 || points % 2 != 0)
        throw ParameterError("points per axis must be even and >= 8, got " + std::to_string(points));
    if (!(length > 0.0) || !std::isfinite(length))
        throw ParameterError("box length must be positive");
    return GridSpec{dim, points, length};
}

Field::Field(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v))
{
    if (values.size() != grid.size())
        throw GridMismatch("sample count does not match grid");
}

bool Field::is_finite() const
{
    return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

bool Field::is_zero() const
{
    return std::all_of(values.begin(), values.end(), [](double x) { return x == 0.0; });
}

Field operator+(const Field& a, const Field& b)
{
    require_same_grid(a, b);
    Field out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] + b[i];
    return out;
}

Field operator-(const Field& a, const Field& b)
{
    require_same_grid(a, b);
    Field out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] - b[i];
    return out;
}

Field operator*(double s, const Field& a)
{
    Field out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = s * a[i];
    return out;
}

double l2_inner(const Field& u, const Field& v)
{
    require_same_grid(u, v);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += u[i] * v[i];
    return u.grid.cell_volume() * acc;
}

H1Parts h1_seminorms(const Field& u)
{
    const auto& g = u.grid;
    std::vector<fft::Complex> spec(fft::spectrum_size(g.dim, g.points));
    fft::forward(g.dim, g.points, u.values, spec);
    const auto hs = half_spectrum(g);
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i)
        acc += hs.weight[i] * hs.wave_sq[i] * std::norm(spec[i]);
    H1Parts parts;
    parts.grad_sq = g.cell_volume() / static_cast<double>(g.size()) * acc;
    parts.mass_sq = l2_inner(u, u);
    return parts;
}

double spectral_mass(const Field& u)
{
    const auto& g = u.grid;
    std::vector<fft::Complex> spec(fft::spectrum_size(g.dim, g.points));
    fft::forward(g.dim, g.points, u.values, spec);
    const auto hs = half_spectrum(g);
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i)
        acc += hs.weight[i] * std::norm(spec[i]);
    return g.cell_volume() / static_cast<double>(g.size()) * acc;
}

Field laplacian(const Field& u)
{
    return apply_multiplier(u, [](double k2) { return -k2; });
}

Field apply_helmholtz(const Field& u)
{
    return apply_multiplier(u, [](double k2) { return k2 + 1.0; });
}

Field solve_helmholtz(const Field& u)
{
    return apply_multiplier(u, [](double k2) { return 1.0 / (k2 + 1.0); });
}

Field circular_shift(const Field& u, std::span<const int> shift)
{
    const auto& g = u.grid;
    const int m = g.points;
    Field out(g);
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
        std::size_t rest = idx;
        std::size_t target = 0;
        std::size_t stride = 1;
        for (int axis = g.dim - 1; axis >= 0; --axis) {
            const int j = static_cast<int>(rest % m);
            rest /= m;
            const int jj = ((j + shift[axis]) % m + m) % m;
            target += static_cast<std::size_t>(jj) * stride;
            stride *= m;
        }
        out[target] = u[idx];
    }
    return out;
}

Recentered recenter(const Field& u)
{
    const auto& g = u.grid;
    Recentered r{u, false, std::vector<int>(g.dim, 0)};
    if (u.is_zero()) {
        r.zero_field = true;
        return r;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < u.size(); ++i)
        if (std::abs(u[i]) > std::abs(u[best]))
            best = i;
    std::size_t rest = best;
    bool moved = false;
    for (int axis = g.dim - 1; axis >= 0; --axis) {
        const int j = static_cast<int>(rest % g.points);
        rest /= g.points;
        r.shift[axis] = g.origin_index() - j;
        moved = moved || r.shift[axis] != 0;
    }
    if (moved)
        r.field = circular_shift(u, r.shift);
    return r;
}

double spectral_tail_fraction(const Field& u, double cutoff)
{
    const auto& g = u.grid;
    std::vector<fft::Complex> spec(fft::spectrum_size(g.dim, g.points));
    fft::forward(g.dim, g.points, u.values, spec);
    const auto hs = half_spectrum(g);
    const double kc = cutoff * 0.5 * g.points * 2.0 * std::numbers::pi / g.length;
    double tail = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double e = hs.weight[i] * (1.0 + hs.wave_sq[i]) * std::norm(spec[i]);
        total += e;
        if (hs.wave_sq[i] > kc * kc)
            tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

double boundary_ratio(const Field& u)
{
    const auto& g = u.grid;
    double peak = 0.0;
    double edge = 0.0;
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
        const double a = std::abs(u[idx]);
        peak = std::max(peak, a);
        std::size_t rest = idx;
        bool on_face = false;
        for (int axis = 0; axis < g.dim; ++axis) {
            const int j = static_cast<int>(rest % g.points);
            rest /= g.points;
            on_face = on_face || j == 0 || j == g.points - 1;
        }
        if (on_face)
            edge = std::max(edge, a);
    }
    return peak > 0.0 ? edge / peak : 0.0;
}

} // namespace choquard

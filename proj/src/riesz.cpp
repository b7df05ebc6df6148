#include "choquard/riesz.hpp"

#include "choquard/error.hpp"
#include "choquard/fft.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace choquard {

namespace {

constexpr double pi = std::numbers::pi;

void check_order(int dim, double alpha)
{
    if (dim != 2 && dim != 3)
        throw ParameterError("dimension must be 2 or 3");
    if (!(alpha > 0.0 && alpha < dim))
        throw ParameterError("Riesz order alpha must lie in (0, N)");
}

void require_kernel_grid(const Field& f, const RieszKernel& k)
{
    if (!(f.grid == k.grid()) || f.size() != k.grid().size())
        throw GridMismatch("field and kernel grids differ");
}

} // namespace

double riesz_constant(int dim, double alpha)
{
    check_order(dim, alpha);
    const double n = dim;
    return std::tgamma(0.5 * (n - alpha)) /
           (std::tgamma(0.5 * alpha) * std::pow(pi, 0.5 * n) * std::pow(2.0, alpha));
}

double lattice_zeta(int dim, double s)
{
    if (dim != 2 && dim != 3)
        throw ParameterError("dimension must be 2 or 3");
    if (!(s > 0.0 && s < dim))
        throw ParameterError("lattice_zeta: need 0 < s < N");
    using boost::math::tgamma;
    const double a = 0.5 * s;
    const double b = 0.5 * (dim - s);
    // exp(-pi |m|^2) is below 1e-300 for |m| > 15; radius 7 is ample.
    constexpr int R = 7;
    double acc = 0.0;
    const int zlo = dim == 3 ? -R : 0;
    const int zhi = dim == 3 ? R : 0;
    for (int i = -R; i <= R; ++i)
        for (int j = -R; j <= R; ++j)
            for (int k = zlo; k <= zhi; ++k) {
                const int r2 = i * i + j * j + k * k;
                if (r2 == 0 || r2 > R * R)
                    continue;
                const double x = pi * r2;
                acc += tgamma(a, x) * std::pow(x, -a) + tgamma(b, x) * std::pow(x, -b);
            }
    acc -= 1.0 / b + 1.0 / a;
    return std::pow(pi, a) / std::tgamma(a) * acc;
}

RieszKernel::RieszKernel(const GridSpec& grid, double alpha, SingularCell cell)
    : grid_(make_grid(grid.dim, grid.points, grid.length)),
      alpha_(alpha),
      constant_(riesz_constant(grid.dim, alpha)),
      cell_(cell)
{
    const int dim = grid_.dim;
    const int m2 = padded_points();
    const double h = grid_.spacing();
    const double decay = alpha_ - dim;

    table_.assign(fft::real_size(dim, m2), 0.0);
    for (std::size_t idx = 0; idx < table_.size(); ++idx) {
        std::size_t rest = idx;
        double r2 = 0.0;
        for (int axis = 0; axis < dim; ++axis) {
            const int k = fft::mode(static_cast<int>(rest % m2), m2);
            rest /= m2;
            r2 += double(k) * k;
        }
        if (idx != 0)
            table_[idx] = constant_ * std::pow(h * std::sqrt(r2), decay);
    }

    if (cell_ == SingularCell::lattice_zeta) {
        table_[0] = -lattice_zeta(dim, dim - alpha_) * constant_ * std::pow(h, decay);
    } else {
        const double sphere = 2.0 * std::pow(pi, 0.5 * dim) / std::tgamma(0.5 * dim);
        const double ball = std::pow(pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
        const double rh = h * std::pow(ball, -1.0 / dim);
        table_[0] = constant_ * sphere * std::pow(rh, alpha_) / (alpha_ * grid_.cell_volume());
    }

    std::vector<fft::Complex> spec(fft::spectrum_size(dim, m2));
    fft::forward(dim, m2, table_, spec);
    spectrum_.resize(spec.size());
    // even real table: the transform is real up to roundoff
    for (std::size_t i = 0; i < spec.size(); ++i)
        spectrum_[i] = spec[i].real();
}

double RieszKernel::at(std::span<const int> offset) const
{
    const int m2 = padded_points();
    std::size_t idx = 0;
    for (int axis = 0; axis < grid_.dim; ++axis) {
        const int k = offset[axis];
        if (k < -grid_.points || k >= grid_.points)
            throw ParameterError("kernel offset outside the doubled box");
        idx = idx * m2 + static_cast<std::size_t>((k + m2) % m2);
    }
    return table_[idx];
}

RieszKernel build_kernel(const GridSpec& grid, double alpha, SingularCell cell)
{
    return RieszKernel(grid, alpha, cell);
}

std::shared_ptr<const RieszKernel> cached_kernel(const GridSpec& grid, double alpha)
{
    using Key = std::tuple<int, int, double, double>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const RieszKernel>> cache;
    const Key key{grid.dim, grid.points, grid.length, alpha};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    auto kernel = std::make_shared<const RieszKernel>(grid, alpha);
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(kernel)).first->second;
}

Field riesz_convolve(const Field& f, const RieszKernel& kernel)
{
    require_kernel_grid(f, kernel);
    const auto& g = f.grid;
    const int dim = g.dim;
    const int m = g.points;
    const int m2 = kernel.padded_points();

    // embed f in the low corner of the doubled box
    std::vector<double> padded(fft::real_size(dim, m2), 0.0);
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        std::size_t rest = idx;
        std::size_t target = 0;
        std::size_t stride = 1;
        for (int axis = dim - 1; axis >= 0; --axis) {
            target += (rest % m) * stride;
            rest /= m;
            stride *= m2;
        }
        padded[target] = f[idx];
    }

    std::vector<fft::Complex> spec(fft::spectrum_size(dim, m2));
    fft::forward(dim, m2, padded, spec);
    const auto ks = kernel.spectrum();
    const double scale = g.cell_volume() / static_cast<double>(padded.size());
    for (std::size_t i = 0; i < spec.size(); ++i)
        spec[i] *= ks[i] * scale;
    fft::inverse(dim, m2, spec, padded);

    Field out(g);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        std::size_t rest = idx;
        std::size_t source = 0;
        std::size_t stride = 1;
        for (int axis = dim - 1; axis >= 0; --axis) {
            source += (rest % m) * stride;
            rest /= m;
            stride *= m2;
        }
        out[idx] = padded[source];
    }
    return out;
}

Field riesz_convolve_direct(const Field& f, const RieszKernel& kernel)
{
    require_kernel_grid(f, kernel);
    const auto& g = f.grid;
    if (g.points > 32)
        throw ParameterError("direct Riesz sum is limited to M <= 32");
    const int dim = g.dim;
    const int m = g.points;
    const int m2 = kernel.padded_points();
    const auto table = kernel.table();

    std::vector<std::array<int, 3>> coords(f.size());
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        std::size_t rest = idx;
        for (int axis = dim - 1; axis >= 0; --axis) {
            coords[idx][axis] = static_cast<int>(rest % m);
            rest /= m;
        }
    }

    Field out(g);
    for (std::size_t x = 0; x < f.size(); ++x) {
        double acc = 0.0;
        for (std::size_t y = 0; y < f.size(); ++y) {
            if (f[y] == 0.0)
                continue;
            std::size_t k = 0;
            for (int axis = 0; axis < dim; ++axis)
                k = k * m2 + static_cast<std::size_t>((coords[x][axis] - coords[y][axis] + m2) % m2);
            acc += table[k] * f[y];
        }
        out[x] = g.cell_volume() * acc;
    }
    return out;
}

} // namespace choquard

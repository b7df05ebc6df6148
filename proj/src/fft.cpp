#include "choquard/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace choquard::fft {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

std::mutex& plan_mutex()
{
    static std::mutex m;
    return m;
}

const PlanPair& plans_for(int dim, int n)
{
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard lock(plan_mutex());
    auto it = cache.find({dim, n});
    if (it != cache.end())
        return it->second;

    std::vector<int> extents(dim, n);
    const std::size_t rs = real_size(dim, n);
    const std::size_t cs = spectrum_size(dim, n);
    double* r = fftw_alloc_real(rs);
    fftw_complex* c = fftw_alloc_complex(cs);
    // ESTIMATE keeps plans (and therefore roundoff) reproducible run to run.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.forward = fftw_plan_dft_r2c(dim, extents.data(), r, c, flags);
    p.inverse = fftw_plan_dft_c2r(dim, extents.data(), c, r, flags);
    fftw_free(r);
    fftw_free(c);
    if (!p.forward || !p.inverse)
        throw std::runtime_error("fftw planning failed");
    return cache.emplace(std::make_pair(dim, n), p).first->second;
}

} // namespace

std::size_t real_size(int dim, int n)
{
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a)
        s *= static_cast<std::size_t>(n);
    return s;
}

std::size_t spectrum_size(int dim, int n)
{
    return real_size(dim - 1, n) * static_cast<std::size_t>(n / 2 + 1);
}

void forward(int dim, int n, std::span<const double> in, std::span<Complex> out)
{
    if (in.size() != real_size(dim, n) || out.size() != spectrum_size(dim, n))
        throw std::invalid_argument("fft::forward: size mismatch");
    const auto& p = plans_for(dim, n);
    // r2c leaves its input untouched for out-of-place transforms.
    fftw_execute_dft_r2c(p.forward, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse(int dim, int n, std::span<const Complex> in, std::span<double> out)
{
    if (out.size() != real_size(dim, n) || in.size() != spectrum_size(dim, n))
        throw std::invalid_argument("fft::inverse: size mismatch");
    const auto& p = plans_for(dim, n);
    // c2r overwrites its input
    std::vector<Complex> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(p.inverse, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

} // namespace choquard::fft

#pragma once

#include <complex>
#include <cstddef>
#include <span>

// Thin wrapper over FFTW's real-to-complex transforms on cubic arrays.
// Plans are created once per (dim, n) under a lock; execution uses the
// new-array interface and is safe to call concurrently.
namespace choquard::fft {

using Complex = std::complex<double>;

std::size_t real_size(int dim, int n);
/// Half spectrum: n^(dim-1) * (n/2 + 1) entries, last axis halved.
std::size_t spectrum_size(int dim, int n);

/// Unnormalized forward transform sum_j x_j exp(-2 pi i k.j / n).
void forward(int dim, int n, std::span<const double> in, std::span<Complex> out);
/// Unnormalized inverse; divide by n^dim to undo forward().
void inverse(int dim, int n, std::span<const Complex> in, std::span<double> out);

/// Signed lattice mode for array index i along a full axis of length n.
inline int mode(int i, int n) { return i < n / 2 ? i : i - n; }

} // namespace choquard::fft

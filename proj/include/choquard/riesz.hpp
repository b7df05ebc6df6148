#pragma once

#include "choquard/grid.hpp"

#include <memory>
#include <span>
#include <vector>

namespace choquard {

/// Normalization A(N, alpha) of the Riesz potential A / |x|^(N - alpha).
double riesz_constant(int dim, double alpha);

/// Analytically continued lattice sum Z_N(s) = sum_{m in Z^N, m != 0} |m|^-s,
/// valid for 0 < s < N (theta-function splitting).
double lattice_zeta(int dim, double s);

/// How the singular origin sample of the kernel table is filled.
enum class SingularCell {
    /// -Z_N(N - alpha) * A * h^(alpha - N): removes the O(h^alpha) error of
    /// the punctured rectangle rule for smooth densities.
    lattice_zeta,
    /// Average of the kernel over the ball with the volume of one cell.
    ball_average,
};

/// Riesz kernel sampled on the doubled lattice [-M, M)^N (spacing h), stored
/// in circular order: offset m along an axis lives at index m mod 2M.
class RieszKernel {
public:
    RieszKernel(const GridSpec& grid, double alpha, SingularCell cell = SingularCell::lattice_zeta);

    const GridSpec& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    double constant() const { return constant_; }
    SingularCell cell() const { return cell_; }
    int padded_points() const { return 2 * grid_.points; }

    std::span<const double> table() const { return table_; }
    /// Kernel sample at an integer lattice offset, each component in [-M, M).
    double at(std::span<const int> offset) const;
    /// Real transform of the table on the padded half spectrum.
    std::span<const double> spectrum() const { return spectrum_; }

private:
    GridSpec grid_;
    double alpha_;
    double constant_;
    SingularCell cell_;
    std::vector<double> table_;
    std::vector<double> spectrum_;
};

RieszKernel build_kernel(const GridSpec& grid, double alpha, SingularCell cell = SingularCell::lattice_zeta);

/// Shared immutable kernel for (grid, alpha); built on first use.
std::shared_ptr<const RieszKernel> cached_kernel(const GridSpec& grid, double alpha);

/// Free-space discrete convolution h^N sum_y K(x - y) f(y) by zero padding to
/// the doubled box and a circular transform convolution.
Field riesz_convolve(const Field& f, const RieszKernel& kernel);

/// Same sum by an explicit double loop. Oracle only; requires M <= 32.
Field riesz_convolve_direct(const Field& f, const RieszKernel& kernel);

} // namespace choquard

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace choquard {

/// Uniform periodic box [-L/2, L/2)^N sampled with M points per axis.
///
/// Sample j along an axis sits at -L/2 + j*h with h = L/M, so the origin is
/// index M/2. Lattice frequencies are k/L with k in [-M/2, M/2).
struct GridSpec {
    int dim = 3;
    int points = 32;
    double length = 16.0;

    double spacing() const { return length / points; }
    double cell_volume() const;
    std::size_t size() const;
    double coordinate(int j) const { return -0.5 * length + j * spacing(); }
    int origin_index() const { return points / 2; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Validates (N in {2,3}, M even and >= 8, L > 0); throws ParameterError.
GridSpec make_grid(int dim, int points, double length);

/// Real samples on a grid, row-major with the last axis fastest.
struct Field {
    GridSpec grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const GridSpec& g) : grid(g), values(g.size(), 0.0) {}
    Field(const GridSpec& g, std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    bool is_finite() const;
    bool is_zero() const;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

/// Samples a function of the position vector (length grid.dim).
template <class Fn>
Field sample(const GridSpec& grid, Fn&& fn)
{
    Field out(grid);
    const int m = grid.points;
    double x[3] = {0.0, 0.0, 0.0};
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        std::size_t rest = idx;
        for (int axis = grid.dim - 1; axis >= 0; --axis) {
            x[axis] = grid.coordinate(static_cast<int>(rest % m));
            rest /= m;
        }
        out[idx] = fn(std::span<const double>(x, grid.dim));
    }
    return out;
}

/// Rectangle-rule inner product h^N sum u_j v_j.
double l2_inner(const Field& u, const Field& v);

struct H1Parts {
    double grad_sq = 0.0; ///< spectral approximation of the Dirichlet integral
    double mass_sq = 0.0; ///< squared L2 norm
    double total() const { return grad_sq + mass_sq; }
};

H1Parts h1_seminorms(const Field& u);

/// Sum of |c_k|^2 over the full lattice spectrum, with the coefficients
/// scaled so that it equals l2_inner(u,u) (Parseval).
double spectral_mass(const Field& u);

/// Spectral Laplacian with multiplier -|2 pi k / L|^2.
Field laplacian(const Field& u);
/// (-Laplacian + 1) u.
Field apply_helmholtz(const Field& u);
/// (-Laplacian + 1)^{-1} u; the Sobolev preconditioner.
Field solve_helmholtz(const Field& u);

struct Recentered {
    Field field;
    bool zero_field = false; ///< input was identically zero; returned unchanged
    std::vector<int> shift;  ///< circular shift applied per axis
};

/// Circular lattice shift moving the first max-|u| sample to the origin index.
Recentered recenter(const Field& u);

/// Circular shift by an integer number of samples along each axis.
Field circular_shift(const Field& u, std::span<const int> shift);

/// Share of the H1 energy sum (1 + |2 pi k/L|^2)|c_k|^2 carried by modes with
/// |k| above `cutoff` times the per-axis Nyquist index M/2. Near zero for
/// fields the grid resolves.
double spectral_tail_fraction(const Field& u, double cutoff = 0.5);

/// Largest |u| over the box faces divided by max |u| (0 for a zero field).
double boundary_ratio(const Field& u);

} // namespace choquard

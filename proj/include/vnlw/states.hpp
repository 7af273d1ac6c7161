#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "vnlw/error.hpp"
#include "vnlw/lattice.hpp"

namespace vnlw {

using cplx = std::complex<double>;

/// One-partite amplitude psi(x_i, t).
struct WaveFunction {
    Eigen::VectorXcd amplitudes;
    Grid1D grid;
    double time = 0.0;

    /// sum |psi_i|^2 dx
    [[nodiscard]] double norm_squared() const { return amplitudes.squaredNorm() * grid.dx(); }

    [[nodiscard]] WaveFunction normalized() const {
        WaveFunction out = *this;
        const double n2 = norm_squared();
        if (!(n2 > 0.0)) throw Error(ErrorCode::UnnormalizedState, "cannot normalize a zero wave function");
        out.amplitudes /= std::sqrt(n2);
        return out;
    }
};

/// Kernel Psi(x_i, y_j, t) on the grid square; rows index x, columns y.
struct BipartiteWave {
    Eigen::MatrixXcd kernel;
    Grid1D grid;
    double time = 0.0;

    [[nodiscard]] BipartiteWave normalized() const;
};

/// sum |Psi_ij|^2 dx^2, the conserved density of the bipartite equation.
inline double bipartite_norm(const BipartiteWave& psi) {
    return psi.kernel.squaredNorm() * psi.grid.dx() * psi.grid.dx();
}

inline BipartiteWave BipartiteWave::normalized() const {
    BipartiteWave out = *this;
    const double n2 = bipartite_norm(*this);
    if (!(n2 > 0.0)) throw Error(ErrorCode::UnnormalizedState, "cannot normalize a zero kernel");
    out.kernel /= std::sqrt(n2);
    return out;
}

/// L2 distance between two kernels on the same grid (dx-weighted Frobenius norm).
inline double kernel_distance(const BipartiteWave& a, const BipartiteWave& b) {
    if (!(a.grid == b.grid)) throw Error(ErrorCode::GridMismatch, "kernels live on different grids");
    return (a.kernel - b.kernel).norm() * a.grid.dx();
}

inline WaveFunction make_wave(const Grid1D& grid, Eigen::VectorXcd amplitudes, double time = 0.0) {
    if (amplitudes.size() != grid.size()) {
        throw Error(ErrorCode::LengthMismatch, "wave function length does not match grid");
    }
    return {std::move(amplitudes), grid, time};
}

/// Normalized Gaussian packet exp(-(x-center)^2 / (2 width^2) + i momentum x / hbar).
inline WaveFunction gaussian_packet(const Grid1D& grid, double center, double width, double momentum = 0.0,
                                    double hbar = 1.0) {
    if (!(width > 0.0)) throw Error(ErrorCode::InvalidParameters, "gaussian width must be positive");
    Eigen::VectorXcd a(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double x = grid.x(static_cast<std::size_t>(i));
        const double d = (x - center) / width;
        a[i] = std::exp(cplx(-0.5 * d * d, momentum * x / hbar));
    }
    return WaveFunction{std::move(a), grid, 0.0}.normalized();
}

inline void require_same_grid(const Grid1D& a, const Grid1D& b, const char* what) {
    if (!(a == b)) throw Error(ErrorCode::GridMismatch, what);
}

}  // namespace vnlw

#pragma once

// Test-only helpers: analytic reference spectra, random generators and small
// brute-force routines kept independent of the library code paths they check.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "vnlw/vnlw.hpp"

namespace vnlw::testing {

/// Hard-wall box of width L: E_n = n^2 pi^2 hbar^2 / (2 m L^2), n = 1, 2, ...
inline double box_energy(int n, double width = 1.0, double hbar = 1.0, double mass = 1.0) {
    return n * n * std::numbers::pi * std::numbers::pi * hbar * hbar / (2.0 * mass * width * width);
}

/// Harmonic oscillator E_n = hbar omega (n + 1/2), n = 0, 1, ...
inline double oscillator_energy(int n, double omega = 1.0, double hbar = 1.0) { return hbar * omega * (n + 0.5); }

/// Exact eigenvalues of the zero-potential Dirichlet stencil with n unknowns:
/// (hbar^2 / (m dx^2)) (1 - cos(j pi / (n + 1))), j = 1..n.
inline double stencil_box_eigenvalue(int j, std::size_t n, double dx, double hbar = 1.0, double mass = 1.0) {
    return hbar * hbar / (mass * dx * dx) * (1.0 - std::cos(j * std::numbers::pi / double(n + 1)));
}

inline HamiltonianMatrix harmonic_hamiltonian(std::size_t n, double half_width = 10.0, double omega = 1.0) {
    const Grid1D grid = build_grid(-half_width, half_width, n);
    return build_hamiltonian(grid, potential::Harmonic{omega, 0.0});
}

inline HamiltonianMatrix box_hamiltonian(std::size_t n, double width = 1.0) {
    const Grid1D grid = box_grid(0.0, width, n);
    return build_hamiltonian(grid, potential::InfiniteBox{});
}

inline Eigen::VectorXcd random_complex(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = normal(rng);
        v[i] = std::complex<double>(re, normal(rng));
    }
    return v;
}

inline WaveFunction random_wave(const Grid1D& grid, std::mt19937_64& rng) {
    return WaveFunction{random_complex(grid.size(), rng), grid, 0.0}.normalized();
}

/// Random Hermitian matrix H = (A + A^dagger) / 2.
inline Eigen::MatrixXcd random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) a.col(j) = random_complex(n, rng);
    return 0.5 * (a + a.adjoint());
}

/// n x k matrix with dx-orthonormal columns (complex QR of a Gaussian matrix).
inline Eigen::MatrixXcd random_orthonormal(Eigen::Index n, Eigen::Index k, double dx, std::mt19937_64& rng) {
    Eigen::MatrixXcd a(n, k);
    for (Eigen::Index j = 0; j < k; ++j) a.col(j) = random_complex(n, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, k);
    return q / std::sqrt(dx);
}

inline BipartiteWave random_bipartite(const Grid1D& grid, std::mt19937_64& rng) {
    Eigen::MatrixXcd k(grid.size(), grid.size());
    for (Eigen::Index j = 0; j < grid.size(); ++j) k.col(j) = random_complex(grid.size(), rng);
    return BipartiteWave{k, grid, 0.0}.normalized();
}

/// -sum p ln p evaluated term by term.
inline double shannon(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) {
        if (v > 0.0) s -= v * std::log(v);
    }
    return s;
}

inline WaveFunction eigen_column(const EigenSystem& eigs, Eigen::Index n) {
    return WaveFunction{eigs.states.col(n).cast<std::complex<double>>(), eigs.grid, 0.0};
}

}  // namespace vnlw::testing

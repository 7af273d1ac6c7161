#pragma once

// Analysis of bipartite kernels Psi(x, y): Schmidt form, entanglement
// entropy, the kernel operator rho_Psi and the measurement functional
// Tr[rho O rho^dagger], position densities, eigenbasis transition
// amplitudes c_{n,m} and the collapse statistics derived from them.
//
// Grid kernels are turned into operators with one factor of dx per
// integration, so (rho_Psi phi)_i = sum_j Psi_ij phi_j dx and the matrix of
// rho_Psi acting on grid vectors is Psi * dx.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "vnlw/error.hpp"
#include "vnlw/lattice.hpp"
#include "vnlw/spectra.hpp"
#include "vnlw/states.hpp"

namespace vnlw {

inline constexpr double default_schmidt_tolerance = 1e-12;
inline constexpr double normalization_tolerance = 1e-8;

/// Psi(x, y) = psi(x) conj(phi(y)).
inline BipartiteWave from_product(const WaveFunction& psi, const WaveFunction& phi) {
    require_same_grid(psi.grid, phi.grid, "product factors live on different grids");
    return {psi.amplitudes * phi.amplitudes.adjoint(), psi.grid, psi.time};
}

struct SchmidtDecomposition {
    Eigen::VectorXd coefficients;   // mu_0 >= mu_1 >= ... > tol * mu_0
    Eigen::MatrixXcd left_states;   // psi_n(x), dx-orthonormal columns
    Eigen::MatrixXcd right_states;  // phi_n(y), dx-orthonormal columns
    double residual = 0.0;          // sum of the dropped mu_n^2
    Grid1D grid;

    [[nodiscard]] std::size_t rank() const noexcept { return static_cast<std::size_t>(coefficients.size()); }

    /// sum mu_n psi_n(x) conj(phi_n(y))
    [[nodiscard]] BipartiteWave reconstruct() const {
        return {left_states * coefficients.asDiagonal() * right_states.adjoint(), grid, 0.0};
    }
};

inline SchmidtDecomposition schmidt(const BipartiteWave& psi, double tol = default_schmidt_tolerance) {
    if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidParameters, "Schmidt tolerance must be nonnegative");
    const double dx = psi.grid.dx();
    const Eigen::MatrixXcd weighted = psi.kernel * dx;
    if (!weighted.allFinite()) throw Error(ErrorCode::DecompositionFailure, "kernel contains non-finite entries");

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw Error(ErrorCode::DecompositionFailure, "SVD did not converge");

    const Eigen::VectorXd& s = svd.singularValues();
    const double cutoff = s.size() > 0 ? tol * s[0] : 0.0;
    Eigen::Index keep = 0;
    while (keep < s.size() && s[keep] > cutoff && s[keep] > 0.0) ++keep;

    SchmidtDecomposition out{s.head(keep), svd.matrixU().leftCols(keep) / std::sqrt(dx),
                             svd.matrixV().leftCols(keep) / std::sqrt(dx), s.tail(s.size() - keep).squaredNorm(),
                             psi.grid};

    // Fix the joint phase of each (psi_n, phi_n) pair: the first significant
    // component of psi_n is made real and positive.
    for (Eigen::Index c = 0; c < keep; ++c) {
        auto u = out.left_states.col(c);
        const double scale = u.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            if (std::abs(u[i]) > 1e-8 * scale) {
                const cplx phase = std::conj(u[i]) / std::abs(u[i]);
                u *= phase;
                out.right_states.col(c) *= phase;
                break;
            }
        }
    }
    return out;
}

namespace detail {

inline double entropy_of_weights(const Eigen::Ref<const Eigen::VectorXd>& weights) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        const double p = weights[i];
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

inline void require_normalized(const BipartiteWave& psi) {
    const double n2 = bipartite_norm(psi);
    if (std::abs(n2 - 1.0) > normalization_tolerance) {
        throw Error(ErrorCode::UnnormalizedState, "kernel norm^2 = " + std::to_string(n2));
    }
}

}  // namespace detail

/// S = -sum mu_n^2 ln mu_n^2 from the Schmidt coefficients (0 ln 0 = 0).
inline double entanglement_entropy(const BipartiteWave& psi) {
    detail::require_normalized(psi);
    const Eigen::MatrixXcd weighted = psi.kernel * psi.grid.dx();
    if (!weighted.allFinite()) throw Error(ErrorCode::DecompositionFailure, "kernel contains non-finite entries");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted);  // singular values only
    if (svd.info() != Eigen::Success) throw Error(ErrorCode::DecompositionFailure, "SVD did not converge");
    return detail::entropy_of_weights(svd.singularValues().array().square().matrix());
}

enum class Side { X, Y };

/// Reduced density operator as a grid matrix: rho_x = Psi Psi^dagger dx^2
/// (kernel integrated over y), rho_y = Psi^T conj(Psi) dx^2.
inline Eigen::MatrixXcd reduced_density_matrix(const BipartiteWave& psi, Side side) {
    const double dx2 = psi.grid.dx() * psi.grid.dx();
    if (side == Side::X) return psi.kernel * psi.kernel.adjoint() * dx2;
    return psi.kernel.transpose() * psi.kernel.conjugate() * dx2;
}

/// von Neumann entropy -tr[rho ln rho] of a reduced density operator.
inline double reduced_entropy(const BipartiteWave& psi, Side side = Side::X) {
    detail::require_normalized(psi);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(reduced_density_matrix(psi, side),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::DecompositionFailure, "reduced density matrix diagonalization failed");
    }
    return detail::entropy_of_weights(solver.eigenvalues());
}

/// (rho_Psi phi)(x) = integral Psi(x, y) phi(y) dy
inline WaveFunction apply_rho(const BipartiteWave& psi, const WaveFunction& phi) {
    require_same_grid(psi.grid, phi.grid, "apply_rho: kernel and vector grids differ");
    return {psi.kernel * phi.amplitudes * psi.grid.dx(), psi.grid, psi.time};
}

/// Tr[rho_Psi O rho_Psi^dagger] where `op` acts on grid vectors. The trace of
/// this product for a Hermitian O is real; an imaginary part above 1e-10
/// (relative) is reported as a non-Hermitian operator.
inline double expectation(const BipartiteWave& psi, const Eigen::MatrixXcd& op) {
    detail::require_normalized(psi);
    if (op.rows() != psi.grid.size() || op.cols() != psi.grid.size()) {
        throw Error(ErrorCode::DimensionMismatch, "operator shape does not match the grid");
    }
    const Eigen::MatrixXcd rho = psi.kernel * psi.grid.dx();
    const cplx value = (rho * op * rho.adjoint()).trace();
    if (std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real()))) {
        throw Error(ErrorCode::NonHermitianOperator, "imaginary residue " + std::to_string(value.imag()));
    }
    return value.real();
}

inline double expectation(const BipartiteWave& psi, const Eigen::MatrixXd& op) {
    return expectation(psi, Eigen::MatrixXcd(op.cast<cplx>()));
}

inline double expectation(const BipartiteWave& psi, const HamiltonianMatrix& h) {
    require_same_grid(psi.grid, h.grid(), "expectation: kernel and Hamiltonian grids differ");
    return expectation(psi, h.dense());
}

/// Probability that the state reduces to |phi>: ||rho_Psi phi||^2.
inline double projection_probability(const BipartiteWave& psi, const WaveFunction& phi) {
    return apply_rho(psi, phi).norm_squared();
}

/// d(x) = integral |Psi(x, y)|^2 dy, the diagonal of rho rho^dagger.
inline Eigen::VectorXd position_density(const BipartiteWave& psi) {
    return psi.kernel.cwiseAbs2().rowwise().sum() * psi.grid.dx();
}

/// Coefficients of Psi in the product eigenbasis psi_n(x) conj(psi_m(y)),
/// truncated to the states retained in an EigenSystem.
struct TransitionAmplitudes {
    Eigen::MatrixXcd c;
    Eigen::VectorXd energies;
    double truncation_residual = 0.0;  // ||Psi||^2 - sum |c_nm|^2

    [[nodiscard]] std::size_t k() const noexcept { return static_cast<std::size_t>(c.rows()); }
};

inline TransitionAmplitudes transition_amplitudes(const BipartiteWave& psi, const EigenSystem& eigs) {
    require_same_grid(psi.grid, eigs.grid, "transition_amplitudes: kernel and eigenbasis grids differ");
    const double dx = psi.grid.dx();
    // Eigenstates are real, so conj(psi_n) = psi_n.
    Eigen::MatrixXcd c = eigs.states.transpose().cast<cplx>() * psi.kernel * eigs.states.cast<cplx>();
    c *= dx * dx;
    const double residual = bipartite_norm(psi) - c.squaredNorm();
    return {std::move(c), eigs.energies, std::max(residual, 0.0)};
}

struct CollapseStatistics {
    Eigen::VectorXd p;        // p_m = sum_n |c_nm|^2
    Eigen::VectorXd delta_e;  // Delta E_m = sum_n |c_nm|^2 (E_n - E_m)
    /// Delta E_m / p_m, the mean energy change given outcome m (zero where
    /// p_m vanishes). Convenience quantity, not part of the collapse formula.
    Eigen::VectorXd conditional_delta_e;
};

inline CollapseStatistics collapse_statistics(const TransitionAmplitudes& amps) {
    const Eigen::Index k = amps.c.rows();
    if (amps.c.cols() != k || amps.energies.size() != k) {
        throw Error(ErrorCode::DimensionMismatch, "transition amplitudes and energies disagree in size");
    }
    const Eigen::MatrixXd w = amps.c.cwiseAbs2();
    CollapseStatistics out{Eigen::VectorXd::Zero(k), Eigen::VectorXd::Zero(k), Eigen::VectorXd::Zero(k)};
    for (Eigen::Index m = 0; m < k; ++m) {
        for (Eigen::Index n = 0; n < k; ++n) {
            out.p[m] += w(n, m);
            out.delta_e[m] += w(n, m) * (amps.energies[n] - amps.energies[m]);
        }
        out.conditional_delta_e[m] = out.p[m] > 0.0 ? out.delta_e[m] / out.p[m] : 0.0;
    }
    return out;
}

}  // namespace vnlw

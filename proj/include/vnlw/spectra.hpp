#pragma once

// Stationary states of the grid Hamiltonian and the energy-gap spectrum of
// the difference operator H(x) - H(y).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vnlw/detail/lapack.hpp"
#include "vnlw/error.hpp"
#include "vnlw/lattice.hpp"

namespace vnlw {

/// Lowest k eigenpairs of a HamiltonianMatrix. Columns of `states` are
/// dx-orthonormal and sign-fixed (first significant component positive).
struct EigenSystem {
    Eigen::VectorXd energies;
    Eigen::MatrixXd states;
    Grid1D grid;
    double hbar = 1.0;
    double max_residual = 0.0;  // max_n ||H psi_n - E_n psi_n|| / max(1, |E_n|)

    [[nodiscard]] std::size_t k() const noexcept { return static_cast<std::size_t>(energies.size()); }
};

namespace detail {

inline void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-8 * scale) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

}  // namespace detail

inline EigenSystem eigensystem(const HamiltonianMatrix& h, std::size_t k) {
    const auto n = static_cast<lapack_int>(h.size());
    if (k < 1 || k > static_cast<std::size_t>(n)) {
        throw Error(ErrorCode::KOutOfRange, "k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    const auto kk = static_cast<lapack_int>(k);

    std::vector<double> d(h.diagonal().data(), h.diagonal().data() + n);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    std::copy(h.off_diagonal().data(), h.off_diagonal().data() + (n - 1), e.begin());
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(kk));
    Eigen::MatrixXd z(n, kk);
    lapack_int found = 0;

    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, kk, 0.0,
                                           &found, w.data(), z.data(), n, isuppz.data());
    if (info != 0 || found != kk) {
        throw Error(ErrorCode::ConvergenceFailure, "dstevr info = " + std::to_string(info) + ", found " +
                                                       std::to_string(found) + " of " + std::to_string(kk) +
                                                       " eigenpairs (n = " + std::to_string(n) + ")");
    }

    EigenSystem out{Eigen::Map<Eigen::VectorXd>(w.data(), kk), std::move(z), h.grid(), h.hbar(), 0.0};
    out.states /= std::sqrt(h.grid().dx());
    for (Eigen::Index j = 0; j < kk; ++j) detail::fix_sign(out.states.col(j));

    const double sqrt_dx = std::sqrt(h.grid().dx());
    for (Eigen::Index j = 0; j < kk; ++j) {
        const Eigen::VectorXd r = h.apply(out.states.col(j)) - out.energies[j] * out.states.col(j);
        const double rel = r.norm() * sqrt_dx / std::max(1.0, std::abs(out.energies[j]));
        out.max_residual = std::max(out.max_residual, rel);
    }
    if (!(out.max_residual <= 1e-8)) {
        throw Error(ErrorCode::ConvergenceFailure,
                    "eigenpair residual " + std::to_string(out.max_residual) + " exceeds 1e-8 (n = " +
                        std::to_string(n) + ", k = " + std::to_string(k) + ")");
    }
    return out;
}

/// max |<psi_n, psi_m> - delta_nm| over the retained states.
inline double orthonormality_error(const EigenSystem& eigs) {
    const Eigen::MatrixXd gram = eigs.states.transpose() * eigs.states * eigs.grid.dx();
    return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

struct GapEntry {
    std::size_t n;
    std::size_t m;
    double lambda;  // E_n - E_m
};

struct GapSpectrum {
    std::vector<GapEntry> entries;
    std::size_t k = 0;

    [[nodiscard]] double gap(std::size_t n, std::size_t m) const { return entries.at(n * k + m).lambda; }

    [[nodiscard]] std::vector<double> sorted_values() const {
        std::vector<double> v;
        v.reserve(entries.size());
        for (const auto& e : entries) v.push_back(e.lambda);
        std::sort(v.begin(), v.end());
        return v;
    }
};

/// All k^2 ordered pairs, row-major in (n, m).
inline GapSpectrum gap_spectrum(const EigenSystem& eigs) {
    GapSpectrum g;
    g.k = eigs.k();
    g.entries.reserve(g.k * g.k);
    for (std::size_t n = 0; n < g.k; ++n) {
        for (std::size_t m = 0; m < g.k; ++m) {
            const auto en = eigs.energies[static_cast<Eigen::Index>(n)];
            const auto em = eigs.energies[static_cast<Eigen::Index>(m)];
            g.entries.push_back({n, m, en - em});
        }
    }
    return g;
}

/// Collapses sorted gap values into clusters whose members lie within `tol`
/// of the cluster's smallest value; each cluster is reported by its mean.
inline std::vector<double> distinct_gaps(const GapSpectrum& g, double tol = 1e-9) {
    const std::vector<double> v = g.sorted_values();
    std::vector<double> out;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < v.size() && v[j] - v[i] <= tol) sum += v[j++];
        out.push_back(sum / static_cast<double>(j - i));
        i = j;
    }
    return out;
}

inline constexpr std::size_t default_difference_max_dim = 64 * 64;

/// Dense H (x) I - I (x) H on the N^2-dimensional product grid.
inline Eigen::MatrixXd difference_operator(const HamiltonianMatrix& h) {
    const Eigen::Index n = h.size();
    const Eigen::MatrixXd hd = h.dense();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n * n, n * n);
    // Row-major pairing (i, j) -> i*n + j with i on the x factor and j on y.
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index ip = 0; ip < n; ++ip) {
            if (hd(i, ip) == 0.0) continue;
            for (Eigen::Index j = 0; j < n; ++j) d(i * n + j, ip * n + j) += hd(i, ip);
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index jp = 0; jp < n; ++jp) {
                if (hd(j, jp) != 0.0) d(i * n + j, i * n + jp) -= hd(j, jp);
            }
        }
    }
    return d;
}

/// Full ascending eigenvalue list of the explicit difference operator. Only
/// meant as an independent check of gap_spectrum at small n.
inline std::vector<double> difference_operator_spectrum(const HamiltonianMatrix& h,
                                                        std::size_t max_dim = default_difference_max_dim) {
    const auto n = static_cast<std::size_t>(h.size());
    if (n * n > max_dim) {
        throw Error(ErrorCode::DimensionTooLarge, "difference operator dimension " + std::to_string(n * n) +
                                                      " exceeds max_dim " + std::to_string(max_dim));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(difference_operator(h), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "dense eigensolver failed on the difference operator");
    }
    std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace vnlw

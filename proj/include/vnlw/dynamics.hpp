#pragma once

// Time propagation of one-partite states (i hbar d/dt psi = H psi) and of
// bipartite kernels (i hbar d/dt Psi = (H(x) - H(y)) Psi).
//
// Two propagators share one interface:
//   * Crank-Nicolson: U = (I + i dt H / 2hbar)^-1 (I - i dt H / 2hbar), a
//     Cayley transform and hence unitary for any dt;
//   * eigenbasis: exact phases exp(-i E_n t / hbar) in a (possibly truncated)
//     EigenSystem.
// A bipartite step is Psi <- U Psi U^dagger, applied as two column sweeps,
// never through the N^2 x N^2 operator.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vnlw/bipartite.hpp"
#include "vnlw/detail/lapack.hpp"
#include "vnlw/error.hpp"
#include "vnlw/lattice.hpp"
#include "vnlw/spectra.hpp"
#include "vnlw/states.hpp"

namespace vnlw {

enum class PropagationMethod { CrankNicolson, Eigenbasis };

inline constexpr double default_dt = 1e-3;

struct PropagatorConfig {
    double dt = default_dt;  // negative dt runs the propagation backwards
    std::size_t steps = 0;
    PropagationMethod method = PropagationMethod::CrankNicolson;
    std::size_t basis_size = 0;  // eigenbasis only; 0 keeps every state

    [[nodiscard]] double duration() const noexcept { return dt * static_cast<double>(steps); }
};

inline void validate(const PropagatorConfig& cfg) {
    if (!(cfg.dt != 0.0) || !std::isfinite(cfg.dt)) {
        throw Error(ErrorCode::InvalidParameters, "time step must be finite and nonzero");
    }
}

/// Pre-factored Crank-Nicolson step for a fixed Hamiltonian and time step.
class CrankNicolsonStepper {
public:
    CrankNicolsonStepper(const HamiltonianMatrix& h, double dt) : n_(h.size()) {
        const cplx tau(0.0, dt / (2.0 * h.hbar()));
        const auto n = static_cast<std::size_t>(n_);
        b_diag_.resize(n);
        b_off_.resize(n - 1);
        d_.resize(n);
        dl_.resize(n - 1);
        du_.resize(n - 1);
        du2_.resize(n > 2 ? n - 2 : 1);
        ipiv_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double hd = h.diagonal()[static_cast<Eigen::Index>(i)];
            d_[i] = 1.0 + tau * hd;
            b_diag_[i] = 1.0 - tau * hd;
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double ho = h.off_diagonal()[static_cast<Eigen::Index>(i)];
            dl_[i] = tau * ho;
            du_[i] = tau * ho;
            b_off_[i] = -tau * ho;
        }
        const lapack_int info =
            LAPACKE_zgttrf(static_cast<lapack_int>(n), dl_.data(), d_.data(), du_.data(), du2_.data(), ipiv_.data());
        if (info != 0) {
            throw Error(ErrorCode::LinearSolveFailure, "tridiagonal factorization failed, zgttrf info = " +
                                                           std::to_string(info));
        }
    }

    /// Advances every column of `x` by one step, in place.
    void apply(Eigen::MatrixXcd& x) const {
        if (x.rows() != n_) throw Error(ErrorCode::DimensionMismatch, "state length does not match Hamiltonian");
        const Eigen::Index n = n_;
        Eigen::MatrixXcd rhs(n, x.cols());
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            const auto& src = x.col(c);
            auto dst = rhs.col(c);
            for (Eigen::Index i = 0; i < n; ++i) {
                cplx acc = b_diag_[static_cast<std::size_t>(i)] * src[i];
                if (i > 0) acc += b_off_[static_cast<std::size_t>(i - 1)] * src[i - 1];
                if (i + 1 < n) acc += b_off_[static_cast<std::size_t>(i)] * src[i + 1];
                dst[i] = acc;
            }
        }
        const lapack_int info = LAPACKE_zgttrs(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(n),
                                               static_cast<lapack_int>(rhs.cols()), dl_.data(), d_.data(), du_.data(),
                                               du2_.data(), ipiv_.data(), rhs.data(), static_cast<lapack_int>(n));
        if (info != 0) {
            throw Error(ErrorCode::LinearSolveFailure, "tridiagonal solve failed, zgttrs info = " +
                                                           std::to_string(info));
        }
        x = std::move(rhs);
    }

    void apply(Eigen::VectorXcd& v) const {
        Eigen::MatrixXcd m = v;
        apply(m);
        v = m.col(0);
    }

    /// Psi <- U Psi U^dagger, using Psi U^dagger = (U Psi^dagger)^dagger.
    void apply_bipartite(Eigen::MatrixXcd& kernel) const {
        apply(kernel);
        Eigen::MatrixXcd adj = kernel.adjoint();
        apply(adj);
        kernel = adj.adjoint();
    }

private:
    Eigen::Index n_;
    std::vector<cplx> b_diag_, b_off_;
    std::vector<cplx> d_, dl_, du_, du2_;
    std::vector<lapack_int> ipiv_;
};

namespace detail {

inline EigenSystem basis_for(const HamiltonianMatrix& h, const PropagatorConfig& cfg) {
    const auto n = static_cast<std::size_t>(h.size());
    return eigensystem(h, cfg.basis_size == 0 ? n : std::min(cfg.basis_size, n));
}

}  // namespace detail

/// psi(t) = sum_n exp(-i E_n t / hbar) <psi_n, psi> psi_n over the retained states.
inline WaveFunction evolve_in_eigenbasis(const WaveFunction& psi, const EigenSystem& eigs, double t) {
    require_same_grid(psi.grid, eigs.grid, "eigenbasis propagation: grids differ");
    const Eigen::MatrixXcd phi = eigs.states.cast<cplx>();
    Eigen::VectorXcd a = phi.transpose() * psi.amplitudes * psi.grid.dx();
    for (Eigen::Index n = 0; n < a.size(); ++n) {
        a[n] *= std::exp(cplx(0.0, -eigs.energies[n] * t / eigs.hbar));
    }
    return {phi * a, psi.grid, psi.time + t};
}

inline WaveFunction propagate_schrodinger(const WaveFunction& psi, const HamiltonianMatrix& h,
                                          const PropagatorConfig& cfg) {
    validate(cfg);
    require_same_grid(psi.grid, h.grid(), "propagate_schrodinger: state and Hamiltonian grids differ");
    if (cfg.steps == 0) return psi;
    if (cfg.method == PropagationMethod::Eigenbasis) {
        return evolve_in_eigenbasis(psi, detail::basis_for(h, cfg), cfg.duration());
    }
    const CrankNicolsonStepper stepper(h, cfg.dt);
    WaveFunction out = psi;
    for (std::size_t s = 0; s < cfg.steps; ++s) stepper.apply(out.amplitudes);
    out.time = psi.time + cfg.duration();
    return out;
}

/// Closed-form Psi(t) = sum c_nm exp(-i (E_n - E_m) t / hbar) psi_n(x) conj(psi_m(y)).
inline BipartiteWave eigenbasis_bipartite_evolution(const TransitionAmplitudes& amps, const EigenSystem& eigs,
                                                    double t) {
    const auto k = static_cast<Eigen::Index>(eigs.k());
    if (amps.c.rows() != k || amps.c.cols() != k) {
        throw Error(ErrorCode::DimensionMismatch, "amplitudes are " + std::to_string(amps.c.rows()) + "x" +
                                                      std::to_string(amps.c.cols()) + " but the eigenbasis has " +
                                                      std::to_string(k) + " states");
    }
    Eigen::MatrixXcd phased(k, k);
    for (Eigen::Index n = 0; n < k; ++n) {
        for (Eigen::Index m = 0; m < k; ++m) {
            const double gap = eigs.energies[n] - eigs.energies[m];
            phased(n, m) = amps.c(n, m) * std::exp(cplx(0.0, -gap * t / eigs.hbar));
        }
    }
    const Eigen::MatrixXcd phi = eigs.states.cast<cplx>();
    return {phi * phased * phi.transpose(), eigs.grid, t};
}

/// Called with the current state at step 0, every `stride` steps, and at the end.
using BipartiteObserver = std::function<void(std::size_t step, const BipartiteWave&)>;

inline BipartiteWave propagate_vnl(const BipartiteWave& psi, const HamiltonianMatrix& h, const PropagatorConfig& cfg,
                                   const BipartiteObserver& observer = {}, std::size_t stride = 0) {
    validate(cfg);
    require_same_grid(psi.grid, h.grid(), "propagate_vnl: kernel and Hamiltonian grids differ");
    const auto notify = [&](std::size_t step, const BipartiteWave& state) {
        if (observer) observer(step, state);
    };
    notify(0, psi);
    if (cfg.steps == 0) return psi;

    BipartiteWave out = psi;
    if (cfg.method == PropagationMethod::Eigenbasis) {
        const EigenSystem eigs = detail::basis_for(h, cfg);
        const TransitionAmplitudes amps = transition_amplitudes(psi, eigs);
        const bool sampled = observer && stride > 0;
        if (sampled) {
            for (std::size_t s = stride; s < cfg.steps; s += stride) {
                BipartiteWave snap = eigenbasis_bipartite_evolution(amps, eigs, cfg.dt * static_cast<double>(s));
                snap.time += psi.time;
                notify(s, snap);
            }
        }
        out = eigenbasis_bipartite_evolution(amps, eigs, cfg.duration());
        out.time += psi.time;
        notify(cfg.steps, out);
        return out;
    }

    const CrankNicolsonStepper stepper(h, cfg.dt);
    for (std::size_t s = 1; s <= cfg.steps; ++s) {
        stepper.apply_bipartite(out.kernel);
        out.time = psi.time + cfg.dt * static_cast<double>(s);
        if (observer && ((stride > 0 && s % stride == 0) || s == cfg.steps)) notify(s, out);
    }
    return out;
}

}  // namespace vnlw

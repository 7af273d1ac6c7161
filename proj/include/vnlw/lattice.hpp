#pragma once

// Uniform 1-D grid, sampled potentials and the finite-difference
// single-particle Hamiltonian  H = -hbar^2/(2m) d^2/dx^2 + U(x).
//
// Boundary convention: every grid node is an unknown and the wave function is
// pinned to zero on the two ghost nodes x_min - dx and x_max + dx. A hard-wall
// box of width L with n unknowns therefore uses box_grid(0, L, n), whose
// nodes are the interior points L/(n+1), ..., n L/(n+1).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vnlw/error.hpp"

namespace vnlw {

class Grid1D {
public:
    static constexpr std::size_t min_points = 8;

    Grid1D(double x_min, double x_max, std::size_t n_points) : x_min_(x_min), x_max_(x_max), n_(n_points) {
        if (!(x_max > x_min)) {
            throw Error(ErrorCode::DegenerateInterval,
                        "x_max (" + std::to_string(x_max) + ") must exceed x_min (" + std::to_string(x_min) + ")");
        }
        if (n_points < min_points) {
            throw Error(ErrorCode::TooFewPoints,
                        "n_points = " + std::to_string(n_points) + ", need at least " + std::to_string(min_points));
        }
        dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
    }

    [[nodiscard]] double x_min() const noexcept { return x_min_; }
    [[nodiscard]] double x_max() const noexcept { return x_max_; }
    [[nodiscard]] std::size_t n_points() const noexcept { return n_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(n_); }
    [[nodiscard]] double dx() const noexcept { return dx_; }
    [[nodiscard]] double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }

    [[nodiscard]] Eigen::VectorXd coordinates() const {
        Eigen::VectorXd xs(size());
        for (std::size_t i = 0; i < n_; ++i) xs[static_cast<Eigen::Index>(i)] = x(i);
        return xs;
    }

    /// Index of the node closest to `pos`, clamped to the grid.
    [[nodiscard]] std::size_t nearest_index(double pos) const noexcept {
        const double r = std::round((pos - x_min_) / dx_);
        if (r <= 0.0) return 0;
        return std::min(static_cast<std::size_t>(r), n_ - 1);
    }

    friend bool operator==(const Grid1D&, const Grid1D&) = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double dx_ = 0.0;
};

inline Grid1D build_grid(double x_min, double x_max, std::size_t n_points) { return Grid1D(x_min, x_max, n_points); }

/// Grid of `n_points` unknowns strictly inside the hard walls at `wall_left`
/// and `wall_right`; the walls coincide with the Dirichlet ghost nodes.
inline Grid1D box_grid(double wall_left, double wall_right, std::size_t n_points) {
    if (!(wall_right > wall_left)) {
        throw Error(ErrorCode::DegenerateInterval, "box walls must satisfy wall_right > wall_left");
    }
    const double h = (wall_right - wall_left) / static_cast<double>(n_points + 1);
    return Grid1D(wall_left + h, wall_right - h, n_points);
}

namespace potential {

struct InfiniteBox {};

struct Harmonic {
    double omega = 1.0;
    double center = 0.0;
};

/// U(x) = depth * ((x/half_separation)^2 - 1)^2 : minima at +-half_separation, barrier `depth` at 0.
struct DoubleWell {
    double depth = 1.0;
    double half_separation = 1.0;
};

/// Rectangular barrier of given height occupying |x - center| <= width/2.
struct Barrier {
    double height = 1.0;
    double width = 1.0;
    double center = 0.0;
};

struct Tabulated {
    std::vector<double> values;
};

}  // namespace potential

using PotentialSpec = std::variant<potential::InfiniteBox, potential::Harmonic, potential::DoubleWell,
                                   potential::Barrier, potential::Tabulated>;

inline std::string potential_kind(const PotentialSpec& spec) {
    struct Namer {
        std::string operator()(const potential::InfiniteBox&) const { return "infinite-box"; }
        std::string operator()(const potential::Harmonic&) const { return "harmonic"; }
        std::string operator()(const potential::DoubleWell&) const { return "double-well"; }
        std::string operator()(const potential::Barrier&) const { return "barrier"; }
        std::string operator()(const potential::Tabulated&) const { return "tabulated"; }
    };
    return std::visit(Namer{}, spec);
}

/// U(x_i) on every grid node. `mass` only enters the harmonic term 1/2 m w^2 x^2.
inline Eigen::VectorXd sample_potential(const Grid1D& grid, const PotentialSpec& spec, double mass = 1.0) {
    const Eigen::Index n = grid.size();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);

    if (const auto* h = std::get_if<potential::Harmonic>(&spec)) {
        if (!(h->omega > 0.0)) throw Error(ErrorCode::InvalidPotential, "harmonic omega must be positive");
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = grid.x(static_cast<std::size_t>(i)) - h->center;
            u[i] = 0.5 * mass * h->omega * h->omega * d * d;
        }
    } else if (const auto* w = std::get_if<potential::DoubleWell>(&spec)) {
        if (!(w->depth > 0.0) || !(w->half_separation > 0.0)) {
            throw Error(ErrorCode::InvalidPotential, "double-well depth and half_separation must be positive");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const double s = grid.x(static_cast<std::size_t>(i)) / w->half_separation;
            u[i] = w->depth * (s * s - 1.0) * (s * s - 1.0);
        }
    } else if (const auto* b = std::get_if<potential::Barrier>(&spec)) {
        if (!(b->width > 0.0)) throw Error(ErrorCode::InvalidPotential, "barrier width must be positive");
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(grid.x(static_cast<std::size_t>(i)) - b->center) <= 0.5 * b->width) u[i] = b->height;
        }
    } else if (const auto* t = std::get_if<potential::Tabulated>(&spec)) {
        if (t->values.size() != grid.n_points()) {
            throw Error(ErrorCode::LengthMismatch, "tabulated potential has " + std::to_string(t->values.size()) +
                                                       " values for a grid of " + std::to_string(grid.n_points()));
        }
        for (Eigen::Index i = 0; i < n; ++i) u[i] = t->values[static_cast<std::size_t>(i)];
    }
    return u;
}

/// Linear interpolation of a tabulated (x, U) curve onto the grid; values
/// outside the table are held at the nearest end value.
inline std::vector<double> interpolate_potential(std::span<const double> xs, std::span<const double> us,
                                                 const Grid1D& grid) {
    if (xs.size() != us.size() || xs.size() < 2) {
        throw Error(ErrorCode::LengthMismatch, "potential table needs matching x/U columns with at least 2 rows");
    }
    if (!std::is_sorted(xs.begin(), xs.end()) || std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
        throw Error(ErrorCode::InvalidPotential, "potential table x column must be strictly increasing");
    }
    std::vector<double> out(grid.n_points());
    for (std::size_t i = 0; i < grid.n_points(); ++i) {
        const double x = grid.x(i);
        if (x <= xs.front()) {
            out[i] = us.front();
        } else if (x >= xs.back()) {
            out[i] = us.back();
        } else {
            const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
            const std::size_t lo = hi - 1;
            const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
            out[i] = (1.0 - t) * us[lo] + t * us[hi];
        }
    }
    return out;
}

/// Real symmetric tridiagonal Hamiltonian on a Grid1D.
class HamiltonianMatrix {
public:
    HamiltonianMatrix(Grid1D grid, Eigen::VectorXd diagonal, Eigen::VectorXd off_diagonal, double hbar, double mass)
        : grid_(grid), diag_(std::move(diagonal)), off_(std::move(off_diagonal)), hbar_(hbar), mass_(mass) {}

    [[nodiscard]] const Grid1D& grid() const noexcept { return grid_; }
    [[nodiscard]] const Eigen::VectorXd& diagonal() const noexcept { return diag_; }
    [[nodiscard]] const Eigen::VectorXd& off_diagonal() const noexcept { return off_; }
    [[nodiscard]] double hbar() const noexcept { return hbar_; }
    [[nodiscard]] double mass() const noexcept { return mass_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return diag_.size(); }
    [[nodiscard]] double trace() const { return diag_.sum(); }

    template <typename Derived>
    [[nodiscard]] Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> apply(
        const Eigen::MatrixBase<Derived>& v) const {
        const Eigen::Index n = size();
        Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            typename Derived::Scalar acc = diag_[i] * v[i];
            if (i > 0) acc += off_[i - 1] * v[i - 1];
            if (i + 1 < n) acc += off_[i] * v[i + 1];
            out[i] = acc;
        }
        return out;
    }

    [[nodiscard]] Eigen::MatrixXd dense() const {
        const Eigen::Index n = size();
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        m.diagonal() = diag_;
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            m(i, i + 1) = off_[i];
            m(i + 1, i) = off_[i];
        }
        return m;
    }

private:
    Grid1D grid_;
    Eigen::VectorXd diag_;
    Eigen::VectorXd off_;
    double hbar_;
    double mass_;
};

inline HamiltonianMatrix build_hamiltonian(const Grid1D& grid, const Eigen::VectorXd& potential, double hbar = 1.0,
                                           double mass = 1.0) {
    if (potential.size() != grid.size()) {
        throw Error(ErrorCode::LengthMismatch, "potential has " + std::to_string(potential.size()) +
                                                   " entries for a grid of " + std::to_string(grid.n_points()));
    }
    if (!(hbar > 0.0) || !(mass > 0.0)) {
        throw Error(ErrorCode::NonpositiveConstant, "hbar and mass must be positive");
    }
    const double kinetic = hbar * hbar / (mass * grid.dx() * grid.dx());
    Eigen::VectorXd diag = potential.array() + kinetic;
    Eigen::VectorXd off = Eigen::VectorXd::Constant(grid.size() - 1, -0.5 * kinetic);
    return {grid, std::move(diag), std::move(off), hbar, mass};
}

inline HamiltonianMatrix build_hamiltonian(const Grid1D& grid, const PotentialSpec& spec, double hbar = 1.0,
                                           double mass = 1.0) {
    return build_hamiltonian(grid, sample_potential(grid, spec, mass), hbar, mass);
}

/// Inner product <f, g> = sum conj(f_i) g_i dx.
template <typename A, typename B>
[[nodiscard]] std::complex<double> inner(const Eigen::MatrixBase<A>& f, const Eigen::MatrixBase<B>& g, double dx) {
    return std::complex<double>(f.template cast<std::complex<double>>().dot(g.template cast<std::complex<double>>())) *
           dx;
}

}  // namespace vnlw

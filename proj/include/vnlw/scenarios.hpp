#pragma once

// Reproducible experiment runners: two-slit duality, collapse statistics,
// gap spectroscopy and product-state equivalence, plus the single-purpose
// computations exposed by the command-line tool. Every runner returns a
// ScenarioReport whose numbers come straight from the library operations.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "vnlw/bipartite.hpp"
#include "vnlw/config.hpp"
#include "vnlw/dynamics.hpp"
#include "vnlw/error.hpp"
#include "vnlw/io.hpp"
#include "vnlw/lattice.hpp"
#include "vnlw/spectra.hpp"
#include "vnlw/states.hpp"

namespace vnlw {

// ---------------------------------------------------------------------------
// Two-slit states

struct TwoSlitCoefficients {
    cplx a11, a12, a21, a22;

    [[nodiscard]] double norm_squared() const {
        return std::norm(a11) + std::norm(a12) + std::norm(a21) + std::norm(a22);
    }

    [[nodiscard]] TwoSlitCoefficients normalized() const {
        const double s = std::sqrt(norm_squared());
        if (!(s > 0.0)) throw Error(ErrorCode::NonNormalizedCoefficients, "all two-slit coefficients vanish");
        return {a11 / s, a12 / s, a21 / s, a22 / s};
    }

    static TwoSlitCoefficients from_list(const std::vector<cplx>& v) {
        if (v.size() != 4) throw Error(ErrorCode::InvalidParameters, "two-slit state needs 4 coefficients");
        return {v[0], v[1], v[2], v[3]};
    }
};

/// Psi_W = 1/2 (psi_1 + psi_2)(x) conj(psi_1 + psi_2)(y)
inline TwoSlitCoefficients wave_coefficients() { return {0.5, 0.5, 0.5, 0.5}; }

/// Psi_P = (psi_1(x) conj(psi_1(y)) + psi_2(x) conj(psi_2(y))) / sqrt 2
inline TwoSlitCoefficients particle_coefficients() {
    const double r = 1.0 / std::numbers::sqrt2;
    return {r, 0.0, 0.0, r};
}

/// cos(theta) Psi_W + sin(theta) Psi_P, renormalized; theta in [0, pi/2].
inline TwoSlitCoefficients interpolated_coefficients(double theta) {
    const TwoSlitCoefficients w = wave_coefficients();
    const TwoSlitCoefficients p = particle_coefficients();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return TwoSlitCoefficients{c * w.a11 + s * p.a11, c * w.a12 + s * p.a12, c * w.a21 + s * p.a21,
                               c * w.a22 + s * p.a22}
        .normalized();
}

struct SlitModes {
    WaveFunction psi1;
    WaveFunction psi2;
};

/// Gaussians exp(-(x -+ separation/2)^2 / (2 width^2)), symmetrically
/// (Lowdin) orthonormalized so <psi_1, psi_2> vanishes to rounding.
inline SlitModes make_slit_modes(const Grid1D& grid, double separation = 4.0, double width = 0.5) {
    if (!(separation > 0.0) || !(width > 0.0)) {
        throw Error(ErrorCode::InvalidParameters, "slit separation and width must be positive");
    }
    const WaveFunction g1 = gaussian_packet(grid, -0.5 * separation, width);
    const WaveFunction g2 = gaussian_packet(grid, 0.5 * separation, width);
    const double eps = inner(g1.amplitudes, g2.amplitudes, grid.dx()).real();
    if (std::abs(eps) >= 0.5) {
        throw Error(ErrorCode::NonOrthogonalModes, "slit Gaussians overlap too strongly (" + std::to_string(eps) + ")");
    }
    const double p = 1.0 / std::sqrt(1.0 + eps);
    const double m = 1.0 / std::sqrt(1.0 - eps);
    const double alpha = 0.5 * (p + m);
    const double beta = 0.5 * (p - m);
    return {WaveFunction{alpha * g1.amplitudes + beta * g2.amplitudes, grid, 0.0},
            WaveFunction{beta * g1.amplitudes + alpha * g2.amplitudes, grid, 0.0}};
}

inline SlitModes evolve_slit_modes(const SlitModes& modes, const HamiltonianMatrix& h, const PropagatorConfig& cfg) {
    return {propagate_schrodinger(modes.psi1, h, cfg), propagate_schrodinger(modes.psi2, h, cfg)};
}

inline BipartiteWave two_slit_state(const SlitModes& modes, const TwoSlitCoefficients& a) {
    require_same_grid(modes.psi1.grid, modes.psi2.grid, "slit modes live on different grids");
    if (std::abs(a.norm_squared() - 1.0) > 1e-10) {
        throw Error(ErrorCode::NonNormalizedCoefficients, "sum |a_kl|^2 = " + format_double(a.norm_squared()));
    }
    const double dx = modes.psi1.grid.dx();
    if (std::abs(inner(modes.psi1.amplitudes, modes.psi2.amplitudes, dx)) >= 1e-6) {
        throw Error(ErrorCode::NonOrthogonalModes, "|<psi_1, psi_2>| must be below 1e-6");
    }
    const Eigen::VectorXcd& u = modes.psi1.amplitudes;
    const Eigen::VectorXcd& v = modes.psi2.amplitudes;
    BipartiteWave out{a.a11 * u * u.adjoint() + a.a12 * u * v.adjoint() + a.a21 * v * u.adjoint() +
                          a.a22 * v * v.adjoint(),
                      modes.psi1.grid, modes.psi1.time};
    // Residual mode overlap below 1e-6 can leave the norm off by ~1e-6.
    if (std::abs(bipartite_norm(out) - 1.0) > 1e-12) out = out.normalized();
    return out;
}

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
};

inline IndexRange window_indices(const Grid1D& grid, double x_lo, double x_hi) {
    const std::size_t lo = grid.nearest_index(x_lo);
    const std::size_t hi = grid.nearest_index(x_hi);
    return {lo, hi + 1};
}

/// V = (d_max - d_min) / (d_max + d_min), d_max the largest interior local
/// maximum and d_min the smallest interior local minimum inside the window.
/// A window without both kinds of extremum has no fringes and gives V = 0.
inline double fringe_visibility(const Eigen::Ref<const Eigen::VectorXd>& density, IndexRange window) {
    const auto n = static_cast<std::size_t>(density.size());
    if (window.end > n) window.end = n;
    if (window.begin + 3 > window.end) {
        throw Error(ErrorCode::EmptyWindow, "visibility window needs at least 3 points");
    }
    std::optional<double> d_max, d_min;
    for (std::size_t i = window.begin + 1; i + 1 < window.end; ++i) {
        const auto at = [&](std::size_t j) { return density[static_cast<Eigen::Index>(j)]; };
        if (at(i) < 0.0) throw Error(ErrorCode::InvalidParameters, "density must be nonnegative");
        if (at(i) > at(i - 1) && at(i) >= at(i + 1)) d_max = std::max(d_max.value_or(at(i)), at(i));
        if (at(i) < at(i - 1) && at(i) <= at(i + 1)) d_min = std::min(d_min.value_or(at(i)), at(i));
    }
    if (!d_max || !d_min || !(*d_max + *d_min > 0.0)) return 0.0;
    return (*d_max - *d_min) / (*d_max + *d_min);
}

// ---------------------------------------------------------------------------
// Reports

struct ScenarioReport {
    std::string name;
    json config;
    json results = json::object();
    std::vector<std::pair<std::string, Table>> tables;
    std::string key_metric;
    double key_value = 0.0;
    double elapsed_seconds = 0.0;

    ScenarioReport(std::string report_name, json effective_config)
        : name(std::move(report_name)), config(std::move(effective_config)) {}

    /// Summary document; timing is left out so repeated runs are byte-identical.
    [[nodiscard]] json summary() const {
        json out;
        out["scenario"] = name;
        out["key_metric"] = {{"name", key_metric}, {"value", key_value}};
        out["results"] = results;
        json names = json::array();
        for (const auto& t : tables) names.push_back(t.first);
        out["tables"] = names;
        out["config"] = config;
        return out;
    }
};

namespace scenario_detail {

inline json vector_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

inline Table density_table(const Grid1D& grid, const std::vector<std::pair<std::string, Eigen::VectorXd>>& cols) {
    Table t;
    t.columns.push_back("x");
    for (const auto& c : cols) t.columns.push_back(c.first);
    for (std::size_t i = 0; i < grid.n_points(); ++i) {
        std::vector<double> row{grid.x(i)};
        for (const auto& c : cols) row.push_back(c.second[static_cast<Eigen::Index>(i)]);
        t.add_row(std::move(row));
    }
    return t;
}

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace scenario_detail

/// Physical setup shared by every runner.
struct Setup {
    Grid1D grid;
    HamiltonianMatrix hamiltonian;
};

inline Setup make_setup(const ScenarioConfig& cfg) {
    const Grid1D grid = cfg.grid.build();
    PotentialSpec spec = cfg.potential;
    if (auto* t = std::get_if<potential::Tabulated>(&spec); t && !cfg.potential_csv.empty()) {
        const auto [xs, us] = read_potential_csv(cfg.potential_csv);
        t->values = interpolate_potential(xs, us, grid);
    }
    return {grid, build_hamiltonian(grid, sample_potential(grid, spec, cfg.dynamics.mass), cfg.dynamics.hbar,
                                    cfg.dynamics.mass)};
}

/// Complex Gaussian vector normalized to the unit sphere.
inline Eigen::VectorXcd random_unit_vector(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v[i] = cplx(re, im);
    }
    return v.normalized();
}

/// Normalized random kernel of the given rank (0 = full rank) on the grid.
inline BipartiteWave random_kernel(const Grid1D& grid, std::size_t rank, std::mt19937_64& rng) {
    const Eigen::Index n = grid.size();
    BipartiteWave out{Eigen::MatrixXcd::Zero(n, n), grid, 0.0};
    if (rank == 0) {
        out.kernel = Eigen::Map<Eigen::MatrixXcd>(random_unit_vector(n * n, rng).data(), n, n);
    } else {
        for (std::size_t r = 0; r < rank; ++r) {
            const Eigen::VectorXcd u = random_unit_vector(n, rng);
            const Eigen::VectorXcd v = random_unit_vector(n, rng);
            out.kernel += u * v.adjoint();
        }
    }
    return out.normalized();
}

/// Normalized random kernel sum c_nm psi_n(x) psi_m(y) over the retained eigenstates.
inline BipartiteWave random_eigen_kernel(const EigenSystem& eigs, std::mt19937_64& rng) {
    const auto k = static_cast<Eigen::Index>(eigs.k());
    const Eigen::VectorXcd flat = random_unit_vector(k * k, rng);
    const Eigen::MatrixXcd c = Eigen::Map<const Eigen::MatrixXcd>(flat.data(), k, k);
    const Eigen::MatrixXcd phi = eigs.states.cast<cplx>();
    return BipartiteWave{phi * c * phi.transpose(), eigs.grid, 0.0}.normalized();
}

/// psi = sum a_n psi_n, normalized.
inline WaveFunction eigen_superposition(const EigenSystem& eigs, const std::vector<cplx>& amplitudes) {
    if (amplitudes.size() > eigs.k()) {
        throw Error(ErrorCode::DimensionMismatch, "more amplitudes than retained eigenstates");
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(eigs.grid.size());
    for (std::size_t n = 0; n < amplitudes.size(); ++n) {
        psi += amplitudes[n] * eigs.states.col(static_cast<Eigen::Index>(n)).cast<cplx>();
    }
    return WaveFunction{std::move(psi), eigs.grid, 0.0}.normalized();
}

/// Initial bipartite state described by the config's scenario.state block.
inline BipartiteWave build_state(const ScenarioConfig& cfg, const Setup& setup) {
    const StateConfig& s = cfg.state;
    std::mt19937_64 rng(cfg.seed);
    switch (s.kind) {
        case StateKind::Gaussian: {
            const WaveFunction g = gaussian_packet(setup.grid, s.center, s.width, s.momentum, cfg.dynamics.hbar);
            return from_product(g, g);
        }
        case StateKind::EigenPair: {
            const EigenSystem eigs = eigensystem(setup.hamiltonian, std::max(s.n, s.m) + 1);
            const auto col = [&](std::size_t j) {
                return WaveFunction{eigs.states.col(static_cast<Eigen::Index>(j)).cast<cplx>(), setup.grid, 0.0};
            };
            return from_product(col(s.n), col(s.m));
        }
        case StateKind::Superposition: {
            const EigenSystem eigs = eigensystem(setup.hamiltonian, s.amplitudes.size());
            const WaveFunction psi = eigen_superposition(eigs, s.amplitudes);
            return from_product(psi, psi);
        }
        case StateKind::TwoSlit: {
            const SlitModes modes = make_slit_modes(setup.grid, cfg.slits.separation, cfg.slits.width);
            return two_slit_state(modes, TwoSlitCoefficients::from_list(s.amplitudes));
        }
        case StateKind::Random: {
            if (s.eigen_basis) return random_eigen_kernel(eigensystem(setup.hamiltonian, cfg.spectra.k), rng);
            return random_kernel(setup.grid, s.rank, rng);
        }
    }
    throw Error(ErrorCode::InvalidParameters, "unhandled state kind");
}

// ---------------------------------------------------------------------------
// Individual computations

inline ScenarioReport run_spectrum(const ScenarioConfig& cfg) {
    const scenario_detail::Stopwatch clock;
    const Setup setup = make_setup(cfg);
    const EigenSystem eigs = eigensystem(setup.hamiltonian, cfg.spectra.k);

    ScenarioReport r{"spectrum", to_json(cfg)};
    r.results["energies"] = scenario_detail::vector_json(eigs.energies);
    r.results["max_residual"] = eigs.max_residual;
    r.results["orthonormality_error"] = orthonormality_error(eigs);

    Table energies{{"n", "energy"}, {}};
    for (Eigen::Index n = 0; n < eigs.energies.size(); ++n) energies.add_row({double(n), eigs.energies[n]});
    Table states;
    states.columns.push_back("x");
    for (std::size_t n = 0; n < eigs.k(); ++n) states.columns.push_back("psi_" + std::to_string(n));
    for (std::size_t i = 0; i < setup.grid.n_points(); ++i) {
        std::vector<double> row{setup.grid.x(i)};
        for (Eigen::Index n = 0; n < eigs.states.cols(); ++n) row.push_back(eigs.states(Eigen::Index(i), n));
        states.add_row(std::move(row));
    }
    r.tables.emplace_back("energies", std::move(energies));
    r.tables.emplace_back("states", std::move(states));
    r.key_metric = "ground_energy";
    r.key_value = eigs.energies[0];
    r.elapsed_seconds = clock.seconds();
    return r;
}

inline ScenarioReport run_gaps(const ScenarioConfig& cfg, const std::string& name = "gaps") {
    const scenario_detail::Stopwatch clock;
    const Setup setup = make_setup(cfg);
    const EigenSystem eigs = eigensystem(setup.hamiltonian, cfg.spectra.k);
    const GapSpectrum gaps = gap_spectrum(eigs);
    const std::vector<double> distinct = distinct_gaps(gaps, cfg.spectra.dedup_tolerance);

    ScenarioReport r{name, to_json(cfg)};
    r.results["energies"] = scenario_detail::vector_json(eigs.energies);
    r.results["distinct_gaps"] = distinct;
    r.results["distinct_gap_count"] = distinct.size();
    r.results["dedup_tolerance"] = cfg.spectra.dedup_tolerance;

    const auto n = setup.grid.n_points();
    if (n * n <= cfg.spectra.max_dim && eigs.k() == n) {
        const std::vector<double> oracle = difference_operator_spectrum(setup.hamiltonian, cfg.spectra.max_dim);
        const std::vector<double> pairwise = gaps.sorted_values();
        double dev = 0.0;
        for (std::size_t i = 0; i < oracle.size(); ++i) dev = std::max(dev, std::abs(oracle[i] - pairwise[i]));
        r.results["difference_operator_max_deviation"] = dev;
    }

    Table t{{"n", "m", "lambda"}, {}};
    for (const auto& e : gaps.entries) t.add_row({double(e.n), double(e.m), e.lambda});
    Table d{{"lambda"}, {}};
    for (double g : distinct) d.add_row({g});
    r.tables.emplace_back("gaps", std::move(t));
    r.tables.emplace_back("distinct_gaps", std::move(d));
    r.key_metric = "distinct_gap_count";
    r.key_value = double(distinct.size());
    r.elapsed_seconds = clock.seconds();
    return r;
}

inline ScenarioReport run_evolve(const ScenarioConfig& cfg) {
    const scenario_detail::Stopwatch clock;
    const Setup setup = make_setup(cfg);
    const BipartiteWave initial = build_state(cfg, setup);
    const double norm0 = bipartite_norm(initial);
    const Eigen::VectorXd xs = setup.grid.coordinates();

    Table traj{{"t", "norm", "energy", "mean_x"}, {}};
    const auto observe = [&](std::size_t, const BipartiteWave& state) {
        const double n2 = bipartite_norm(state);
        const BipartiteWave unit = state.normalized();
        const double energy = expectation(unit, setup.hamiltonian);
        const double mean_x = position_density(unit).dot(xs) * setup.grid.dx();
        traj.add_row({state.time, n2, energy, mean_x});
    };
    const bool sampled = cfg.dynamics.stride > 0;
    const BipartiteWave final_state =
        sampled ? propagate_vnl(initial, setup.hamiltonian, cfg.dynamics.propagator, observe, cfg.dynamics.stride)
                : propagate_vnl(initial, setup.hamiltonian, cfg.dynamics.propagator);

    ScenarioReport r{"evolve", to_json(cfg)};
    const double norm1 = bipartite_norm(final_state);
    r.results["final_time"] = final_state.time;
    r.results["initial_norm"] = norm0;
    r.results["final_norm"] = norm1;
    r.results["norm_drift"] = std::abs(norm1 - norm0);
    if (sampled) r.tables.emplace_back("trajectory", std::move(traj));
    r.tables.emplace_back("density", scenario_detail::density_table(
                                         setup.grid, {{"initial", position_density(initial)},
                                                      {"final", position_density(final_state)}}));
    r.key_metric = "norm_drift";
    r.key_value = std::abs(norm1 - norm0);
    r.elapsed_seconds = clock.seconds();
    return r;
}

inline json schmidt_json(const SchmidtDecomposition& sd) {
    json out;
    out["rank"] = sd.rank();
    out["coefficients"] = scenario_detail::vector_json(sd.coefficients);
    out["residual"] = sd.residual;
    return out;
}

inline ScenarioReport run_schmidt(const ScenarioConfig& cfg) {
    const scenario_detail::Stopwatch clock;
    const Setup setup = make_setup(cfg);
    const BipartiteWave state = build_state(cfg, setup);
    const SchmidtDecomposition sd = schmidt(state, cfg.spectra.schmidt_tolerance);

    ScenarioReport r{"schmidt", to_json(cfg)};
    r.results["schmidt"] = schmidt_json(sd);
    r.results["reconstruction_error_squared"] =
        std::pow(kernel_distance(sd.reconstruct(), state), 2);
    Table t{{"n", "mu"}, {}};
    for (Eigen::Index n = 0; n < sd.coefficients.size(); ++n) t.add_row({double(n), sd.coefficients[n]});
    r.tables.emplace_back("coefficients", std::move(t));
    r.key_metric = "rank";
    r.key_value = double(sd.rank());
    r.elapsed_seconds = clock.seconds();
    return r;
}

inline ScenarioReport run_entropy(const ScenarioConfig& cfg) {
    const scenario_detail::Stopwatch clock;
    const Setup setup = make_setup(cfg);
    const BipartiteWave state = build_state(cfg, setup);
    const double s_schmidt = entanglement_entropy(state);
    const double s_x = reduced_entropy(state, Side::X);
    const double s_y = reduced_entropy(state, Side::Y);

    ScenarioReport r{"entropy", to_json(cfg)};
    r.results["entropy"] = s_schmidt;
    r.results["reduced_entropy_x"] = s_x;
    r.results["reduced_entropy_y"] = s_y;
    r.results["route_disagreement"] = std::max(std::abs(s_schmidt - s_x), std::abs(s_schmidt - s_y));
    r.tables.emplace_back("density", scenario_detail::density_table(setup.grid, {{"density", position_density(state)}}));
    r.key_metric = "entropy";
    r.key_value = s_schmidt;
    r.elapsed_seconds = clock.seconds();
    return r;
}

inline ScenarioReport run_collapse(const ScenarioConfig& cfg, const std::string& name = "collapse") {
    const scenario_detail::Stopwatch clock;
    ScenarioConfig effective = cfg;
    // Without an explicit state the collapse run uses an equal superposition of the two lowest levels.
    if (!effective.state.given) {
        const double r = 1.0 / std::numbers::sqrt2;
        effective.state.kind = StateKind::Superposition;
        effective.state.amplitudes = {r, r};
        effective.state.given = true;
    }
    const Setup setup = make_setup(effective);
    const EigenSystem eigs = eigensystem(setup.hamiltonian, effective.spectra.k);
    const BipartiteWave state = build_state(effective, setup);
    const TransitionAmplitudes amps = transition_amplitudes(state, eigs);
    const CollapseStatistics stats = collapse_statistics(amps);

    ScenarioReport r{name, to_json(effective)};
    r.results["energies"] = scenario_detail::vector_json(eigs.energies);
    r.results["p"] = scenario_detail::vector_json(stats.p);
    r.results["delta_e"] = scenario_detail::vector_json(stats.delta_e);
    r.results["conditional_delta_e"] = scenario_detail::vector_json(stats.conditional_delta_e);
    r.results["truncation_residual"] = amps.truncation_residual;
    r.results["sum_p"] = stats.p.sum();

    Table t{{"m", "energy", "p", "delta_e", "conditional_delta_e"}, {}};
    for (Eigen::Index m = 0; m < stats.p.size(); ++m) {
        t.add_row({double(m), eigs.energies[m], stats.p[m], stats.delta_e[m], stats.conditional_delta_e[m]});
    }
    r.tables.emplace_back("collapse", std::move(t));
    r.key_metric = "sum_p";
    r.key_value = stats.p.sum();
    r.elapsed_seconds = clock.seconds();
    return r;
}

// ---------------------------------------------------------------------------
// Scenarios

struct SweepPoint {
    double theta;
    double entropy;
    double visibility;
};

/// Two-slit run: slit modes evolved freely for the configured time, then the
/// wave-like and particle-like states and the interpolating sweep between them.
inline ScenarioReport run_two_slit(const ScenarioConfig& cfg) {
    const scenario_detail::Stopwatch clock;
    const Setup setup = make_setup(cfg);
    const SlitConfig& sl = cfg.slits;
    const SlitModes initial = make_slit_modes(setup.grid, sl.separation, sl.width);

    PropagatorConfig prop = cfg.dynamics.propagator;
    prop.steps = static_cast<std::size_t>(std::llround(sl.evolution_time / prop.dt));
    const SlitModes modes = evolve_slit_modes(initial, setup.hamiltonian, prop);
    const IndexRange window = window_indices(setup.grid, sl.window_min, sl.window_max);

    const auto measure = [&](const TwoSlitCoefficients& a) {
        const BipartiteWave state = two_slit_state(modes, a);
        const Eigen::VectorXd density = position_density(state);
        return std::tuple{entanglement_entropy(state), fringe_visibility(density, window), density};
    };

    const auto [s_w, v_w, d_w] = measure(wave_coefficients());
    const auto [s_p, v_p, d_p] = measure(particle_coefficients());

    ScenarioReport r{"two-slit", to_json(cfg)};
    r.results["mode_overlap"] = std::abs(inner(modes.psi1.amplitudes, modes.psi2.amplitudes, setup.grid.dx()));
    r.results["evolution_time"] = modes.psi1.time;
    r.results["entropy_wave"] = s_w;
    r.results["entropy_particle"] = s_p;
    r.results["visibility_wave"] = v_w;
    r.results["visibility_particle"] = v_p;

    std::vector<std::pair<std::string, Eigen::VectorXd>> densities{{"wave", d_w}, {"particle", d_p}};
    if (!sl.coefficients.empty()) {
        const auto [s_c, v_c, d_c] = measure(TwoSlitCoefficients::from_list(sl.coefficients));
        r.results["entropy_custom"] = s_c;
        r.results["visibility_custom"] = v_c;
        densities.emplace_back("custom", d_c);
    }

    if (sl.sweep_points >= 2) {
        std::vector<SweepPoint> sweep;
        Table t{{"theta", "entropy", "visibility"}, {}};
        for (std::size_t i = 0; i < sl.sweep_points; ++i) {
            const double theta = 0.5 * std::numbers::pi * double(i) / double(sl.sweep_points - 1);
            const auto [s, v, d] = measure(interpolated_coefficients(theta));
            sweep.push_back({theta, s, v});
            t.add_row({theta, s, v});
        }
        bool v_monotone = true;
        bool s_monotone = true;
        for (std::size_t i = 1; i < sweep.size(); ++i) {
            v_monotone = v_monotone && sweep[i].visibility <= sweep[i - 1].visibility;
            s_monotone = s_monotone && sweep[i].entropy >= sweep[i - 1].entropy;
        }
        r.results["visibility_non_increasing"] = v_monotone;
        r.results["entropy_non_decreasing"] = s_monotone;
        r.results["complementarity_note"] =
            "visibility-vs-entropy monotonicity is an operational reading of wave/particle complementarity";
        r.tables.emplace_back("sweep", std::move(t));
    }
    r.tables.emplace_back("densities", scenario_detail::density_table(setup.grid, densities));
    r.key_metric = "visibility_wave";
    r.key_value = v_w;
    r.elapsed_seconds = clock.seconds();
    return r;
}

/// Gaussian packet evolved as the bipartite kernel psi psi* and, separately,
/// through the one-partite equation; reports the L2 gap between the two.
inline ScenarioReport run_product_equivalence(const ScenarioConfig& cfg) {
    const scenario_detail::Stopwatch clock;
    const Setup setup = make_setup(cfg);
    const StateConfig& s = cfg.state;
    const WaveFunction psi = gaussian_packet(setup.grid, s.center, s.width, s.momentum, cfg.dynamics.hbar);
    const PropagatorConfig& prop = cfg.dynamics.propagator;

    const BipartiteWave via_vnl = propagate_vnl(from_product(psi, psi), setup.hamiltonian, prop);
    const WaveFunction psi_t = propagate_schrodinger(psi, setup.hamiltonian, prop);
    const BipartiteWave via_schrodinger = from_product(psi_t, psi_t);
    const double gap = kernel_distance(via_vnl, via_schrodinger);

    ScenarioReport r{"product-equivalence", to_json(cfg)};
    r.results["final_time"] = via_vnl.time;
    r.results["frobenius_gap"] = gap;
    r.results["vnl_norm"] = bipartite_norm(via_vnl);
    r.results["schrodinger_norm"] = psi_t.norm_squared();
    r.tables.emplace_back("density", scenario_detail::density_table(
                                         setup.grid, {{"vnl", position_density(via_vnl)},
                                                      {"schrodinger", psi_t.amplitudes.cwiseAbs2()}}));
    r.key_metric = "frobenius_gap";
    r.key_value = gap;
    r.elapsed_seconds = clock.seconds();
    return r;
}

inline ScenarioReport run_scenario(const ScenarioConfig& cfg) {
    if (cfg.scenario == "two-slit") return run_two_slit(cfg);
    if (cfg.scenario == "collapse") return run_collapse(cfg);
    if (cfg.scenario == "gap-spectroscopy") return run_gaps(cfg, "gap-spectroscopy");
    if (cfg.scenario == "product-equivalence") return run_product_equivalence(cfg);
    throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + cfg.scenario + "'");
}

}  // namespace vnlw

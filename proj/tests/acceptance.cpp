// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "test_support.hpp"

using namespace vnlw;
using namespace vnlw::testing;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit;  // seconds, 0 = none
    std::function<Outcome()> check;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

cplx kernel_overlap(const BipartiteWave& a, const BipartiteWave& b) {
    return (a.kernel.conjugate().cwiseProduct(b.kernel)).sum() * a.grid.dx() * a.grid.dx();
}

Outcome gap_oracle() {
    double worst = 0.0;
    for (std::size_t n : {16u, 32u}) {
        const std::vector<HamiltonianMatrix> hs{
            build_hamiltonian(build_grid(0.0, 1.0, n), potential::InfiniteBox{}),
            build_hamiltonian(build_grid(-5.0, 5.0, n), potential::Harmonic{1.0, 0.0})};
        for (const auto& h : hs) {
            const std::vector<double> oracle = difference_operator_spectrum(h);
            const std::vector<double> pairs = gap_spectrum(eigensystem(h, n)).sorted_values();
            if (oracle.size() != pairs.size()) return {false, "size mismatch"};
            for (std::size_t i = 0; i < oracle.size(); ++i) worst = std::max(worst, std::abs(oracle[i] - pairs[i]));
        }
    }
    return {worst < 1e-8, fmt("max deviation %.3e", worst)};
}

Outcome stationary_phase() {
    const HamiltonianMatrix h = harmonic_hamiltonian(201);
    const EigenSystem eigs = eigensystem(h, 3);
    const BipartiteWave psi0 = from_product(eigen_column(eigs, 2), eigen_column(eigs, 0));
    // Phase reference: the gap E_2 - E_0 of the grid Hamiltonian (2 in the continuum).
    const double lambda = eigs.energies[2] - eigs.energies[0];
    const auto deficit = [&](PropagationMethod m) {
        const BipartiteWave out = propagate_vnl(psi0, h, {1e-3, 1000, m, 0});
        return std::abs(1.0 - kernel_overlap(psi0, out) * std::exp(cplx(0.0, lambda)));
    };
    const double d_cn = deficit(PropagationMethod::CrankNicolson);
    const double d_eig = deficit(PropagationMethod::Eigenbasis);
    return {d_cn < 1e-5 && d_eig < 1e-10,
            fmt("crank-nicolson deficit %.3e", d_cn) + fmt(", eigenbasis deficit %.3e", d_eig) +
                fmt(", grid gap %.9f", lambda)};
}

Outcome norm_conservation() {
    std::mt19937_64 rng(2024);
    const HamiltonianMatrix h = harmonic_hamiltonian(201);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const BipartiteWave out = propagate_vnl(random_bipartite(h.grid(), rng), h, {1e-3, 1000,
                                                PropagationMethod::CrankNicolson, 0});
        worst = std::max(worst, std::abs(bipartite_norm(out) - 1.0));
    }
    return {worst < 1e-10, fmt("max |norm - 1| %.3e over 5 kernels", worst)};
}

Outcome product_equivalence() {
    const HamiltonianMatrix h = harmonic_hamiltonian(201);
    const WaveFunction psi = gaussian_packet(h.grid(), -1.0, 0.8, 1.0);
    const PropagatorConfig cfg{1e-3, 1000, PropagationMethod::CrankNicolson, 0};
    const BipartiteWave vnl = propagate_vnl(from_product(psi, psi), h, cfg);
    const WaveFunction s = propagate_schrodinger(psi, h, cfg);
    const double gap = kernel_distance(vnl, from_product(s, s));
    return {gap < 1e-8, fmt("Frobenius gap %.3e", gap)};
}

SlitModes default_modes(bool evolved) {
    const Grid1D g = build_grid(-20.0, 20.0, 801);
    const SlitModes m = make_slit_modes(g);
    if (!evolved) return m;
    return evolve_slit_modes(m, build_hamiltonian(g, potential::InfiniteBox{}),
                             {1e-3, 2000, PropagationMethod::CrankNicolson, 0});
}

Outcome entropy_endpoints() {
    const SlitModes m = default_modes(false);
    const double s_w = entanglement_entropy(two_slit_state(m, wave_coefficients()));
    const double s_p = entanglement_entropy(two_slit_state(m, particle_coefficients()));
    std::mt19937_64 rng(7);
    const Grid1D g = build_grid(-2.0, 2.0, 32);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const BipartiteWave psi = random_bipartite(g, rng);
        const double s = entanglement_entropy(psi);
        worst = std::max({worst, std::abs(reduced_entropy(psi, Side::X) - s), std::abs(reduced_entropy(psi, Side::Y) - s)});
    }
    const double dp = std::abs(s_p - std::numbers::ln2);
    return {s_w < 1e-12 && dp < 1e-10 && worst < 1e-9,
            fmt("S(W) %.3e", s_w) + fmt(", |S(P) - ln 2| %.3e", dp) + fmt(", route gap %.3e", worst)};
}

Outcome measurement_reduction() {
    std::mt19937_64 rng(11);
    const Grid1D g = build_grid(-3.0, 3.0, 48);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const WaveFunction psi = random_wave(g, rng);
        const Eigen::MatrixXcd op = random_hermitian(g.size(), rng);
        const double direct = psi.amplitudes.dot(op * psi.amplitudes).real() * g.dx();
        worst = std::max(worst, std::abs(expectation(from_product(psi, psi), op) - direct));
    }
    const SlitModes m = default_modes(false);
    const double p = projection_probability(two_slit_state(m, particle_coefficients()), m.psi1);
    return {worst < 1e-9 && std::abs(p - 0.5) < 1e-10,
            fmt("max reduction gap %.3e", worst) + fmt(", projection %.15f", p)};
}

Outcome position_densities() {
    const SlitModes m = default_modes(true);
    const Eigen::VectorXcd& a = m.psi1.amplitudes;
    const Eigen::VectorXcd& b = m.psi2.amplitudes;
    const Eigen::VectorXd dw = position_density(two_slit_state(m, wave_coefficients()));
    const Eigen::VectorXd dp = position_density(two_slit_state(m, particle_coefficients()));
    const double ew = (dw - 0.5 * (a + b).cwiseAbs2()).cwiseAbs().maxCoeff();
    const double ep = (dp - 0.5 * (a.cwiseAbs2() + b.cwiseAbs2())).cwiseAbs().maxCoeff();
    return {ew < 1e-10 && ep < 1e-10, fmt("wave %.3e", ew) + fmt(", particle %.3e", ep)};
}

Outcome collapse() {
    const HamiltonianMatrix h = harmonic_hamiltonian(201);
    EigenSystem eigs = eigensystem(h, 2);
    const double r = 1.0 / std::numbers::sqrt2;
    const WaveFunction psi{eigs.states.cast<cplx>() * Eigen::Vector2cd(r, r), h.grid(), 0.0};
    const BipartiteWave state = from_product(psi, psi);

    // Oscillator levels 1/2, 3/2: p = (1/2, 1/2), Delta E = |a_m|^2 (<E> - E_m) = (1/4, -1/4).
    EigenSystem ladder = eigs;
    ladder.energies << 0.5, 1.5;
    const CollapseStatistics st = collapse_statistics(transition_amplitudes(state, ladder));
    const double ep = std::max(std::abs(st.p[0] - 0.5), std::abs(st.p[1] - 0.5));
    const double ee = std::max(std::abs(st.delta_e[0] - 0.25), std::abs(st.delta_e[1] + 0.25));

    // Same state against the grid Hamiltonian's own levels.
    const CollapseStatistics sg = collapse_statistics(transition_amplitudes(state, eigs));
    const double mean_e = 0.5 * (eigs.energies[0] + eigs.energies[1]);
    const double eg = std::max(std::abs(sg.delta_e[0] - 0.5 * (mean_e - eigs.energies[0])),
                               std::abs(sg.delta_e[1] - 0.5 * (mean_e - eigs.energies[1])));

    std::mt19937_64 rng(13);
    const HamiltonianMatrix hr = harmonic_hamiltonian(64, 6.0);
    const EigenSystem er = eigensystem(hr, 12);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const TransitionAmplitudes amps = transition_amplitudes(random_bipartite(hr.grid(), rng), er);
        worst = std::max(worst, std::abs(collapse_statistics(amps).p.sum() + amps.truncation_residual - 1.0));
    }
    return {ep < 1e-12 && ee < 1e-12 && eg < 1e-12 && worst < 1e-9,
            fmt("p err %.3e", ep) + fmt(", dE err %.3e", ee) + fmt(", grid-level dE err %.3e", eg) +
                fmt(", sum rule %.3e", worst)};
}

Outcome complementarity() {
    const ScenarioConfig cfg = parse_config(json::parse(R"({"schema_version": 1, "scenario": {"name": "two-slit"}})"));
    const ScenarioReport r = run_two_slit(cfg);
    const bool v_mono = r.results.at("visibility_non_increasing").get<bool>();
    const bool s_mono = r.results.at("entropy_non_decreasing").get<bool>();
    const double vw = r.results.at("visibility_wave").get<double>();
    const double vp = r.results.at("visibility_particle").get<double>();
    const std::size_t points = r.tables.front().second.rows.size();
    return {v_mono && s_mono && vw > 0.9 && vp < 0.05 && points == 11,
            fmt("V(W) %.4f", vw) + fmt(", V(P) %.4f", vp) + ", V non-increasing " + (v_mono ? "yes" : "no") +
                ", S non-decreasing " + (s_mono ? "yes" : "no")};
}

Outcome box_regression() {
    const EigenSystem box = eigensystem(box_hamiltonian(2001), 3);
    double rel = 0.0;
    for (int n = 1; n <= 3; ++n) rel = std::max(rel, std::abs(box.energies[n - 1] / box_energy(n) - 1.0));
    const EigenSystem osc = eigensystem(harmonic_hamiltonian(2001), 4);
    double abs_err = 0.0;
    for (int n = 0; n < 4; ++n) abs_err = std::max(abs_err, std::abs(osc.energies[n] - oscillator_energy(n)));
    return {rel < 1e-3 && abs_err < 1e-3, fmt("box max rel err %.3e", rel) + fmt(", oscillator max err %.3e", abs_err)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "gap spectrum equals Kronecker difference-operator spectrum", 5.0, gap_oracle},
        {2, "stationary bipartite phase", 10.0, stationary_phase},
        {3, "norm conservation under 1000 crank-nicolson steps", 30.0, norm_conservation},
        {4, "product-state equivalence", 0.0, product_equivalence},
        {5, "entropy endpoints and route equality", 0.0, entropy_endpoints},
        {6, "measurement reduction and projection probability", 0.0, measurement_reduction},
        {7, "position densities of wave and particle states", 0.0, position_densities},
        {8, "collapse statistics", 0.0, collapse},
        {9, "complementarity sweep", 60.0, complementarity},
        {10, "box and oscillator spectrum regression", 0.0, box_regression},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0 && secs >= c.time_limit) {
            o.pass = false;
            o.detail += fmt(", over time limit %.0fs", c.time_limit);
        }
        std::printf("[%s] %2d %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

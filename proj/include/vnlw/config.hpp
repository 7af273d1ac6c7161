#pragma once

// Typed run configuration and its JSON schema (version 1). Every object is
// read strictly: unknown keys and wrongly typed values are rejected with a
// SchemaViolation that names the offending dotted key. The reference for all
// keys is docs/config-schema.md.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "vnlw/dynamics.hpp"
#include "vnlw/error.hpp"
#include "vnlw/lattice.hpp"

namespace vnlw {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

struct GridConfig {
    double x_min = -10.0;
    double x_max = 10.0;
    std::size_t n_points = 201;
    bool walls = false;  // x_min/x_max are hard-wall positions (box_grid) instead of node positions

    [[nodiscard]] Grid1D build() const {
        return walls ? box_grid(x_min, x_max, n_points) : build_grid(x_min, x_max, n_points);
    }
};

struct DynamicsConfig {
    double hbar = 1.0;
    double mass = 1.0;
    PropagatorConfig propagator{default_dt, 1000, PropagationMethod::CrankNicolson, 0};
    std::size_t stride = 0;  // trajectory sampling stride; 0 disables the trajectory table
};

struct SpectraConfig {
    std::size_t k = 4;
    double dedup_tolerance = 1e-9;
    std::size_t max_dim = 64 * 64;
    double schmidt_tolerance = 1e-12;
};

enum class StateKind { Gaussian, EigenPair, Superposition, TwoSlit, Random };

struct StateConfig {
    StateKind kind = StateKind::Gaussian;
    bool given = false;  // false when the config has no scenario.state block
    // gaussian
    double center = 0.0;
    double width = 1.0;
    double momentum = 0.0;
    // eigen-pair
    std::size_t n = 0;
    std::size_t m = 0;
    // superposition / two-slit coefficients (a11, a12, a21, a22)
    std::vector<std::complex<double>> amplitudes;
    // random
    std::size_t rank = 0;  // 0 = full rank
    bool eigen_basis = false;
};

struct SlitConfig {
    double separation = 4.0;
    double width = 0.5;
    double evolution_time = 2.0;
    std::size_t sweep_points = 11;
    double window_min = -5.0;
    double window_max = 5.0;
    std::vector<std::complex<double>> coefficients;  // optional extra state a11, a12, a21, a22
};

struct ScenarioConfig {
    GridConfig grid;
    PotentialSpec potential = potential::Harmonic{};
    DynamicsConfig dynamics;
    SpectraConfig spectra;
    std::string scenario = "gap-spectroscopy";
    std::uint64_t seed = 0;
    StateConfig state;
    SlitConfig slits;
    std::string potential_csv;  // source of a tabulated potential, if any
};

namespace config_detail {

[[noreturn]] inline void violation(const std::string& key, const std::string& why) {
    throw Error(ErrorCode::SchemaViolation, "key '" + key + "': " + why);
}

class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) violation(path_.empty() ? "<root>" : path_, "expected an object");
    }

    [[nodiscard]] std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    [[nodiscard]] bool has(const std::string& k) {
        seen_.insert(k);
        return obj_.contains(k);
    }

    [[nodiscard]] const json& raw(const std::string& k) {
        seen_.insert(k);
        return obj_.at(k);
    }

    double number(const std::string& k, double fallback) {
        if (!has(k)) return fallback;
        const json& v = obj_.at(k);
        if (!v.is_number()) violation(key(k), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) violation(key(k), "expected a finite number");
        return d;
    }

    std::size_t count(const std::string& k, std::size_t fallback) {
        if (!has(k)) return fallback;
        const json& v = obj_.at(k);
        if (!v.is_number_integer() || v.get<long long>() < 0) violation(key(k), "expected a nonnegative integer");
        return v.get<std::size_t>();
    }

    std::string text(const std::string& k, const std::string& fallback) {
        if (!has(k)) return fallback;
        const json& v = obj_.at(k);
        if (!v.is_string()) violation(key(k), "expected a string");
        return v.get<std::string>();
    }

    std::vector<std::complex<double>> complex_list(const std::string& k) {
        std::vector<std::complex<double>> out;
        if (!has(k)) return out;
        const json& v = obj_.at(k);
        if (!v.is_array()) violation(key(k), "expected an array of numbers or [re, im] pairs");
        for (const auto& e : v) {
            if (e.is_number()) {
                out.emplace_back(e.get<double>(), 0.0);
            } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                out.emplace_back(e[0].get<double>(), e[1].get<double>());
            } else {
                violation(key(k), "expected an array of numbers or [re, im] pairs");
            }
        }
        return out;
    }

    void finish() const {
        for (const auto& [k, v] : obj_.items()) {
            if (!seen_.contains(k)) violation(key(k), "unknown key");
        }
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

inline std::vector<double> read_numbers(const json& v, const std::string& key) {
    if (!v.is_array()) violation(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) violation(key, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

inline const std::set<std::string>& scenario_names() {
    static const std::set<std::string> names{"two-slit", "collapse", "gap-spectroscopy", "product-equivalence"};
    return names;
}

}  // namespace config_detail

/// Parses and validates a configuration document. Numerical domain checks
/// that need the grid (tabulated lengths, k <= n) happen here too, so a
/// config that parses is runnable.
inline ScenarioConfig parse_config(const json& doc) {
    using config_detail::Reader;
    using config_detail::violation;
    ScenarioConfig cfg;
    Reader root(doc, "");
    if (!root.has("schema_version")) violation("schema_version", "missing (expected 1)");
    if (!doc.at("schema_version").is_number_integer() || doc.at("schema_version").get<int>() != schema_version) {
        violation("schema_version", "unsupported value (expected 1)");
    }

    if (root.has("scenario")) {
        Reader s(root.raw("scenario"), "scenario");
        cfg.scenario = s.text("name", cfg.scenario);
        if (!config_detail::scenario_names().contains(cfg.scenario)) {
            violation("scenario.name", "unknown scenario '" + cfg.scenario + "'");
        }
        cfg.seed = s.count("seed", 0);
        if (s.has("state")) {
            Reader st(s.raw("state"), "scenario.state");
            const std::string kind = st.text("kind", "gaussian");
            StateConfig& state = cfg.state;
            state.given = true;
            if (kind == "gaussian") {
                state.kind = StateKind::Gaussian;
                state.center = st.number("center", 0.0);
                state.width = st.number("width", 1.0);
                state.momentum = st.number("momentum", 0.0);
                if (!(state.width > 0.0)) violation("scenario.state.width", "must be positive");
            } else if (kind == "eigen-pair") {
                state.kind = StateKind::EigenPair;
                state.n = st.count("n", 0);
                state.m = st.count("m", 0);
            } else if (kind == "superposition") {
                state.kind = StateKind::Superposition;
                state.amplitudes = st.complex_list("amplitudes");
                if (state.amplitudes.empty()) violation("scenario.state.amplitudes", "must be a nonempty list");
            } else if (kind == "two-slit") {
                state.kind = StateKind::TwoSlit;
                state.amplitudes = st.complex_list("coefficients");
                if (state.amplitudes.size() != 4) violation("scenario.state.coefficients", "expected 4 entries");
            } else if (kind == "random") {
                state.kind = StateKind::Random;
                state.rank = st.count("rank", 0);
                const std::string basis = st.text("basis", "grid");
                if (basis != "grid" && basis != "eigen") violation("scenario.state.basis", "expected grid or eigen");
                state.eigen_basis = basis == "eigen";
            } else {
                violation("scenario.state.kind", "unknown state kind '" + kind + "'");
            }
            st.finish();
        }
        if (s.has("slits")) {
            Reader sl(s.raw("slits"), "scenario.slits");
            SlitConfig& slits = cfg.slits;
            slits.separation = sl.number("separation", slits.separation);
            slits.width = sl.number("width", slits.width);
            slits.evolution_time = sl.number("evolution_time", slits.evolution_time);
            slits.sweep_points = sl.count("sweep_points", slits.sweep_points);
            if (sl.has("window")) {
                const auto w = config_detail::read_numbers(sl.raw("window"), "scenario.slits.window");
                if (w.size() != 2 || !(w[1] > w[0])) violation("scenario.slits.window", "expected [min, max]");
                slits.window_min = w[0];
                slits.window_max = w[1];
            }
            slits.coefficients = sl.complex_list("coefficients");
            if (!slits.coefficients.empty() && slits.coefficients.size() != 4) {
                violation("scenario.slits.coefficients", "expected 4 entries");
            }
            if (!(slits.separation > 0.0)) violation("scenario.slits.separation", "must be positive");
            if (!(slits.width > 0.0)) violation("scenario.slits.width", "must be positive");
            if (!(slits.evolution_time >= 0.0)) violation("scenario.slits.evolution_time", "must be nonnegative");
            if (slits.sweep_points == 1) violation("scenario.slits.sweep_points", "must be 0 or at least 2");
            sl.finish();
        }
        s.finish();
    }

    // Scenario-dependent defaults for the physical setup.
    if (cfg.scenario == "two-slit") {
        cfg.grid = GridConfig{-20.0, 20.0, 801, false};
        cfg.potential = potential::InfiniteBox{};
    }

    if (root.has("grid")) {
        Reader g(root.raw("grid"), "grid");
        cfg.grid.x_min = g.number("x_min", cfg.grid.x_min);
        cfg.grid.x_max = g.number("x_max", cfg.grid.x_max);
        cfg.grid.n_points = g.count("n_points", cfg.grid.n_points);
        const std::string boundary = g.text("boundary", "nodes");
        if (boundary != "nodes" && boundary != "walls") violation("grid.boundary", "expected nodes or walls");
        cfg.grid.walls = boundary == "walls";
        g.finish();
        if (!(cfg.grid.x_max > cfg.grid.x_min)) violation("grid.x_max", "must exceed grid.x_min");
        if (cfg.grid.n_points < Grid1D::min_points) violation("grid.n_points", "must be at least 8");
    }
    const Grid1D grid = cfg.grid.build();

    if (root.has("potential")) {
        Reader p(root.raw("potential"), "potential");
        const std::string kind = p.text("kind", "harmonic");
        if (kind == "infinite-box") {
            cfg.potential = potential::InfiniteBox{};
        } else if (kind == "harmonic") {
            potential::Harmonic h{p.number("omega", 1.0), p.number("center", 0.0)};
            if (!(h.omega > 0.0)) violation("potential.omega", "must be positive");
            cfg.potential = h;
        } else if (kind == "double-well") {
            potential::DoubleWell w{p.number("depth", 1.0), p.number("half_separation", 1.0)};
            if (!(w.depth > 0.0)) violation("potential.depth", "must be positive");
            if (!(w.half_separation > 0.0)) violation("potential.half_separation", "must be positive");
            cfg.potential = w;
        } else if (kind == "barrier") {
            potential::Barrier b{p.number("height", 1.0), p.number("width", 1.0), p.number("center", 0.0)};
            if (!(b.width > 0.0)) violation("potential.width", "must be positive");
            cfg.potential = b;
        } else if (kind == "tabulated") {
            potential::Tabulated t;
            if (p.has("values")) t.values = config_detail::read_numbers(p.raw("values"), "potential.values");
            cfg.potential_csv = p.text("csv", "");
            if (t.values.empty() == cfg.potential_csv.empty()) {
                violation("potential.values", "tabulated potential needs exactly one of values or csv");
            }
            if (!t.values.empty() && t.values.size() != grid.n_points()) {
                violation("potential.values", "length " + std::to_string(t.values.size()) +
                                                  " does not match grid.n_points " +
                                                  std::to_string(grid.n_points()));
            }
            cfg.potential = t;
        } else {
            violation("potential.kind", "unknown potential kind '" + kind + "'");
        }
        p.finish();
    }

    if (root.has("dynamics")) {
        Reader d(root.raw("dynamics"), "dynamics");
        DynamicsConfig& dyn = cfg.dynamics;
        dyn.hbar = d.number("hbar", dyn.hbar);
        dyn.mass = d.number("mass", dyn.mass);
        dyn.propagator.dt = d.number("dt", dyn.propagator.dt);
        dyn.propagator.steps = d.count("steps", dyn.propagator.steps);
        const std::string method = d.text("method", "crank-nicolson");
        if (method == "crank-nicolson") {
            dyn.propagator.method = PropagationMethod::CrankNicolson;
        } else if (method == "eigenbasis") {
            dyn.propagator.method = PropagationMethod::Eigenbasis;
        } else {
            violation("dynamics.method", "expected crank-nicolson or eigenbasis");
        }
        dyn.propagator.basis_size = d.count("basis_size", 0);
        dyn.stride = d.count("stride", 0);
        d.finish();
        if (!(dyn.hbar > 0.0)) violation("dynamics.hbar", "must be positive");
        if (!(dyn.mass > 0.0)) violation("dynamics.mass", "must be positive");
        if (!(dyn.propagator.dt > 0.0)) violation("dynamics.dt", "must be positive");
        if (dyn.propagator.basis_size > grid.n_points()) {
            violation("dynamics.basis_size", "exceeds grid.n_points");
        }
    }

    if (root.has("spectra")) {
        Reader s(root.raw("spectra"), "spectra");
        SpectraConfig& sp = cfg.spectra;
        sp.k = s.count("k", sp.k);
        sp.dedup_tolerance = s.number("dedup_tolerance", sp.dedup_tolerance);
        sp.max_dim = s.count("max_dim", sp.max_dim);
        sp.schmidt_tolerance = s.number("schmidt_tolerance", sp.schmidt_tolerance);
        s.finish();
        if (!(sp.dedup_tolerance >= 0.0)) violation("spectra.dedup_tolerance", "must be nonnegative");
        if (!(sp.schmidt_tolerance >= 0.0)) violation("spectra.schmidt_tolerance", "must be nonnegative");
    }
    if (cfg.spectra.k < 1 || cfg.spectra.k > grid.n_points()) {
        violation("spectra.k", "must lie in [1, grid.n_points]");
    }
    if (cfg.state.kind == StateKind::EigenPair &&
        (cfg.state.n >= grid.n_points() || cfg.state.m >= grid.n_points())) {
        violation("scenario.state.n", "eigenstate index exceeds grid size");
    }
    if (cfg.state.kind == StateKind::Superposition && cfg.state.amplitudes.size() > grid.n_points()) {
        violation("scenario.state.amplitudes", "more amplitudes than grid points");
    }
    root.finish();
    return cfg;
}

/// Sets `value` at a dotted path such as "spectra.k", creating objects on the way.
/// The value text is parsed as JSON when possible and kept as a string otherwise.
inline void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        config_detail::violation(assignment, "override must look like key.path=value");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) config_detail::violation(path, "empty path component");
        if (!node->is_object()) config_detail::violation(path, "cannot descend into a non-object");
        if (dot == std::string::npos) {
            (*node)[part] = std::move(value);
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

inline json load_config_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    json doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::SchemaViolation, "config '" + path + "' is not valid JSON");
    return doc;
}

namespace config_detail {

inline json complex_json(const std::vector<std::complex<double>>& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(json::array({z.real(), z.imag()}));
    return out;
}

}  // namespace config_detail

/// The effective configuration, defaults included, in schema form.
inline json to_json(const ScenarioConfig& cfg) {
    json out;
    out["schema_version"] = schema_version;
    out["grid"] = {{"x_min", cfg.grid.x_min},
                   {"x_max", cfg.grid.x_max},
                   {"n_points", cfg.grid.n_points},
                   {"boundary", cfg.grid.walls ? "walls" : "nodes"}};

    json pot;
    pot["kind"] = potential_kind(cfg.potential);
    if (const auto* h = std::get_if<potential::Harmonic>(&cfg.potential)) {
        pot["omega"] = h->omega;
        pot["center"] = h->center;
    } else if (const auto* w = std::get_if<potential::DoubleWell>(&cfg.potential)) {
        pot["depth"] = w->depth;
        pot["half_separation"] = w->half_separation;
    } else if (const auto* b = std::get_if<potential::Barrier>(&cfg.potential)) {
        pot["height"] = b->height;
        pot["width"] = b->width;
        pot["center"] = b->center;
    } else if (const auto* t = std::get_if<potential::Tabulated>(&cfg.potential)) {
        if (cfg.potential_csv.empty()) {
            pot["values"] = t->values;
        } else {
            pot["csv"] = cfg.potential_csv;
        }
    }
    out["potential"] = pot;

    const auto& d = cfg.dynamics;
    out["dynamics"] = {{"hbar", d.hbar},
                       {"mass", d.mass},
                       {"dt", d.propagator.dt},
                       {"steps", d.propagator.steps},
                       {"method", d.propagator.method == PropagationMethod::Eigenbasis ? "eigenbasis"
                                                                                        : "crank-nicolson"},
                       {"basis_size", d.propagator.basis_size},
                       {"stride", d.stride}};
    out["spectra"] = {{"k", cfg.spectra.k},
                      {"dedup_tolerance", cfg.spectra.dedup_tolerance},
                      {"max_dim", cfg.spectra.max_dim},
                      {"schmidt_tolerance", cfg.spectra.schmidt_tolerance}};

    json state;
    switch (cfg.state.kind) {
        case StateKind::Gaussian:
            state = {{"kind", "gaussian"},
                     {"center", cfg.state.center},
                     {"width", cfg.state.width},
                     {"momentum", cfg.state.momentum}};
            break;
        case StateKind::EigenPair: state = {{"kind", "eigen-pair"}, {"n", cfg.state.n}, {"m", cfg.state.m}}; break;
        case StateKind::Superposition:
            state = {{"kind", "superposition"}, {"amplitudes", config_detail::complex_json(cfg.state.amplitudes)}};
            break;
        case StateKind::TwoSlit:
            state = {{"kind", "two-slit"}, {"coefficients", config_detail::complex_json(cfg.state.amplitudes)}};
            break;
        case StateKind::Random:
            state = {{"kind", "random"}, {"rank", cfg.state.rank}, {"basis", cfg.state.eigen_basis ? "eigen" : "grid"}};
            break;
    }
    json slits = {{"separation", cfg.slits.separation},
                  {"width", cfg.slits.width},
                  {"evolution_time", cfg.slits.evolution_time},
                  {"sweep_points", cfg.slits.sweep_points},
                  {"window", json::array({cfg.slits.window_min, cfg.slits.window_max})}};
    if (!cfg.slits.coefficients.empty()) slits["coefficients"] = config_detail::complex_json(cfg.slits.coefficients);
    out["scenario"] = {{"name", cfg.scenario}, {"seed", cfg.seed}, {"state", state}, {"slits", slits}};
    return out;
}

}  // namespace vnlw

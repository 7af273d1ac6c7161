#pragma once

// Command-line front end: argument parsing into a validated CliInvocation and
// execution that writes a report directory atomically.
//
// Exit status: 0 success, 2 usage error (unknown subcommand, missing config),
// 3 schema violation, 4 numerical failure, 1 anything else (e.g. I/O).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vnlw/config.hpp"
#include "vnlw/error.hpp"
#include "vnlw/io.hpp"
#include "vnlw/scenarios.hpp"

namespace vnlw::cli {

enum class Subcommand { Run, Spectrum, Gaps, Evolve, Schmidt, Entropy, Collapse, ValidateConfig };

inline const std::vector<std::pair<std::string, Subcommand>>& subcommands() {
    static const std::vector<std::pair<std::string, Subcommand>> table{
        {"run", Subcommand::Run},         {"spectrum", Subcommand::Spectrum},
        {"gaps", Subcommand::Gaps},       {"evolve", Subcommand::Evolve},
        {"schmidt", Subcommand::Schmidt}, {"entropy", Subcommand::Entropy},
        {"collapse", Subcommand::Collapse}, {"validate-config", Subcommand::ValidateConfig}};
    return table;
}

inline std::string subcommand_name(Subcommand s) {
    for (const auto& [name, value] : subcommands()) {
        if (value == s) return name;
    }
    return "?";
}

inline constexpr int exit_ok = 0;
inline constexpr int exit_other = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_schema = 3;
inline constexpr int exit_numerical = 4;

struct CliInvocation {
    Subcommand subcommand = Subcommand::Run;
    std::string config_path;
    std::string output_dir;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    TableFormat format = TableFormat::Csv;
    bool timestamp = true;
    ScenarioConfig config;  // parsed, overrides applied, validated
};

/// Parse failure carrying the exit status the process should return.
class CliError : public std::runtime_error {
public:
    CliError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
    [[nodiscard]] int status() const noexcept { return status_; }

private:
    int status_;
};

inline int exit_status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::SchemaViolation:
        case ErrorCode::InvalidParameters:
        case ErrorCode::UnknownScenario: return exit_schema;
        case ErrorCode::IoFailure: return exit_other;
        default: return exit_numerical;
    }
}

inline std::string default_output_dir() {
    if (const char* env = std::getenv("VNLW_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
    return "vnlw-out";
}

/// `args` excludes the program name. Throws CliError; a help request is
/// reported as CliError with status 0 and the help text as message.
inline CliInvocation parse_invocation(const std::vector<std::string>& args) {
    CLI::App app{"vnlw: bipartite wave-function simulations on a 1-D grid", "vnlw"};
    app.require_subcommand(1);

    CliInvocation inv;
    std::string format = "csv";
    bool no_timestamp = false;
    std::uint64_t seed = 0;

    for (const auto& [name, value] : subcommands()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", inv.config_path, "JSON configuration file")->required();
        sub->add_option("-o,--output-dir", inv.output_dir, "output root (default $VNLW_OUTPUT_DIR or ./vnlw-out)");
        sub->add_option("--set", inv.overrides, "override a config key, e.g. spectra.k=6")->take_all();
        sub->add_option("--seed", seed, "random seed (overrides scenario.seed)");
        sub->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json", "gnuplot"}));
        sub->add_flag("--no-timestamp", no_timestamp, "omit the timestamp from the output directory name");
    }

    if (!args.empty() && !args.front().starts_with('-')) {
        const auto& table = subcommands();
        const bool known = std::any_of(table.begin(), table.end(), [&](const auto& e) { return e.first == args.front(); });
        if (!known) throw CliError(exit_usage, "unknown command '" + args.front() + "'\n" + app.help());
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw CliError(exit_ok, app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw CliError(exit_ok, app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        throw CliError(exit_usage, e.what());
    }

    for (const auto* sub : app.get_subcommands()) {
        for (const auto& [name, value] : subcommands()) {
            if (sub->get_name() == name) inv.subcommand = value;
        }
        if (sub->count("--seed") > 0) inv.seed = seed;
    }
    inv.format = format == "json" ? TableFormat::Json : format == "gnuplot" ? TableFormat::Gnuplot : TableFormat::Csv;
    inv.timestamp = !no_timestamp;
    if (inv.output_dir.empty()) inv.output_dir = default_output_dir();

    if (!std::filesystem::is_regular_file(inv.config_path)) {
        throw CliError(exit_usage, "config file '" + inv.config_path + "' does not exist");
    }
    try {
        json doc = load_config_document(inv.config_path);
        for (const auto& o : inv.overrides) apply_override(doc, o);
        if (inv.seed) apply_override(doc, "scenario.seed=" + std::to_string(*inv.seed));
        inv.config = parse_config(doc);
    } catch (const Error& e) {
        throw CliError(e.code() == ErrorCode::IoFailure ? exit_usage : exit_schema, e.what());
    }
    return inv;
}

inline ScenarioReport compute(const CliInvocation& inv) {
    const ScenarioConfig& cfg = inv.config;
    switch (inv.subcommand) {
        case Subcommand::Run: return run_scenario(cfg);
        case Subcommand::Spectrum: return run_spectrum(cfg);
        case Subcommand::Gaps: return run_gaps(cfg);
        case Subcommand::Evolve: return run_evolve(cfg);
        case Subcommand::Schmidt: return run_schmidt(cfg);
        case Subcommand::Entropy: return run_entropy(cfg);
        case Subcommand::Collapse: return run_collapse(cfg);
        case Subcommand::ValidateConfig: break;
    }
    throw Error(ErrorCode::InvalidParameters, "validate-config produces no report");
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
    return out.str();
}

/// Writes summary.json, timing.json and one file per table into
/// <root>/<name>[-<timestamp>]. Files go to a hidden temporary directory
/// first, which is renamed into place only once everything is written.
inline std::filesystem::path write_report(const ScenarioReport& report, const std::filesystem::path& root,
                                          TableFormat format, bool timestamp) {
    namespace fs = std::filesystem;
    const std::string dirname = timestamp ? report.name + "-" + utc_timestamp() : report.name;
    const fs::path final_dir = root / dirname;
    const fs::path tmp_dir = root / ("." + dirname + ".tmp");

    const auto write_file = [](const fs::path& p, const std::string& content) {
        std::ofstream out(p, std::ios::binary);
        out << content;
        if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + p.string() + "'");
    };

    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create output root '" + root.string() + "': " + ec.message());
    fs::remove_all(tmp_dir, ec);
    try {
        fs::create_directories(tmp_dir);
        write_file(tmp_dir / "summary.json", to_json_text(report.summary()));
        write_file(tmp_dir / "timing.json", to_json_text(json{{"elapsed_seconds", report.elapsed_seconds}}));
        for (const auto& [name, table] : report.tables) {
            write_file(tmp_dir / (name + table_extension(format)), render_table(table, format));
        }
        fs::remove_all(final_dir);
        fs::rename(tmp_dir, final_dir);
    } catch (const fs::filesystem_error& e) {
        fs::remove_all(tmp_dir, ec);
        throw Error(ErrorCode::IoFailure, e.what());
    } catch (...) {
        fs::remove_all(tmp_dir, ec);
        throw;
    }
    return final_dir;
}

inline std::string summary_line(const ScenarioReport& r) {
    std::ostringstream out;
    out << r.name << " " << r.key_metric << "=" << format_double(r.key_value) << " elapsed=" << std::fixed
        << std::setprecision(3) << r.elapsed_seconds << "s";
    return out.str();
}

inline int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
    if (inv.subcommand == Subcommand::ValidateConfig) {
        out << "validate-config ok " << inv.config_path << " (scenario " << inv.config.scenario << ")\n";
        return exit_ok;
    }
    try {
        const ScenarioReport report = compute(inv);
        const auto dir = write_report(report, inv.output_dir, inv.format, inv.timestamp);
        out << summary_line(report) << "\n";
        err << "wrote " << dir.string() << "\n";
        return exit_ok;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_status_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_other;
    }
}

inline int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return execute(parse_invocation(args), out, err);
    } catch (const CliError& e) {
        (e.status() == exit_ok ? out : err) << e.what() << "\n";
        return e.status();
    }
}

}  // namespace vnlw::cli

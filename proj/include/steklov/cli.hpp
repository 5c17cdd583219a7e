/*
 * steklov/cli.hpp — command configuration, artifact generation, and the
 * CSV/JSON emitters behind the `steklov` binary.
 *
 * Commands: eigen, verify, count, weyl, remainder, tfun. Output is CSV (one
 * header row, 17-significant-digit numbers, '.' decimal separator, no locale)
 * or a single JSON object { "meta": ..., "rows": [...] } whose meta echoes the
 * parsed configuration and re-parses to an equal RunConfig.
 *
 * Exit codes: 0 success, 2 usage/validation error, 3 invariant violation
 * (bracket or residual breach), 4 I/O error. STEKLOV_WEYL_THREADS caps the
 * worker count; results are byte-identical for any setting.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "steklov/box_spectrum.hpp"
#include "steklov/counting.hpp"
#include "steklov/special_functions.hpp"
#include "steklov/version.hpp"
#include "steklov/weyl.hpp"

namespace steklov::cli {

using ordered_json = nlohmann::ordered_json;

enum class Command { Eigen, Verify, Count, Weyl, Remainder, Tfun };
enum class OutputFormat { Csv, Json };

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int points_per_decade = 40;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct RunConfig {
    Command command = Command::Tfun;
    std::optional<SteklovProblem> problem;
    std::uint64_t k = 1;                    // eigen / verify
    std::optional<double> tau;              // count (single point)
    std::optional<GridSpec> grid;           // count / weyl / remainder
    std::vector<double> s_values;           // tfun
    OutputFormat output = OutputFormat::Csv;
    std::optional<std::string> output_path;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_invariant = 3;
inline constexpr int exit_io = 4;

// Residual acceptance threshold enforced by `verify`.
inline constexpr double verify_tolerance = 1e-8;

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string mode_label(const ModeIndex& mode) {
    std::string s;
    for (std::size_t i = 0; i < mode.m.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(mode.m[i]);
    }
    return s;
}

}  // namespace detail

inline const char* command_name(Command c) {
    switch (c) {
        case Command::Eigen: return "eigen";
        case Command::Verify: return "verify";
        case Command::Count: return "count";
        case Command::Weyl: return "weyl";
        case Command::Remainder: return "remainder";
        default: return "tfun";
    }
}

inline Command command_from_name(const std::string& name) {
    if (name == "eigen") return Command::Eigen;
    if (name == "verify") return Command::Verify;
    if (name == "count") return Command::Count;
    if (name == "weyl") return Command::Weyl;
    if (name == "remainder") return Command::Remainder;
    if (name == "tfun") return Command::Tfun;
    throw std::invalid_argument("unknown command: " + name);
}

inline const char* variant_name(ProblemVariant v) {
    return v == ProblemVariant::LateralDirichlet ? "lateral-dirichlet" : "lateral-free";
}

inline ProblemVariant variant_from_name(const std::string& name) {
    if (name == "lateral-dirichlet") return ProblemVariant::LateralDirichlet;
    if (name == "lateral-free") return ProblemVariant::LateralFree;
    throw std::invalid_argument("unknown variant: " + name + " (expected lateral-dirichlet or lateral-free)");
}

inline ordered_json problem_to_json(const SteklovProblem& p) {
    ordered_json j;
    j["dim"] = p.box.dim();
    j["sides"] = std::vector<double>(p.box.sides().begin(), p.box.sides().end());
    j["variant"] = variant_name(p.variant);
    j["rho"] = p.rho;
    return j;
}

inline SteklovProblem problem_from_json(const ordered_json& j) {
    const auto sides = j.at("sides").get<std::vector<double>>();
    if (j.contains("dim") && j.at("dim").get<int>() != static_cast<int>(sides.size()))
        throw std::invalid_argument("problem config: dim does not match the number of sides");
    return SteklovProblem(BoxDomain(sides), variant_from_name(j.at("variant").get<std::string>()),
                          j.at("rho").get<double>());
}

inline ordered_json config_to_json(const RunConfig& cfg) {
    ordered_json j;
    j["command"] = command_name(cfg.command);
    if (cfg.problem) j["problem"] = problem_to_json(*cfg.problem);
    switch (cfg.command) {
        case Command::Eigen:
        case Command::Verify:
            j["k"] = cfg.k;
            break;
        case Command::Count:
            if (cfg.tau) j["tau"] = *cfg.tau;
            break;
        default:
            break;
    }
    if (cfg.grid) {
        ordered_json g;
        g["min"] = cfg.grid->min;
        g["max"] = cfg.grid->max;
        g["points_per_decade"] = cfg.grid->points_per_decade;
        j["grid"] = g;
    }
    if (!cfg.s_values.empty()) j["s"] = cfg.s_values;
    j["output"] = cfg.output == OutputFormat::Csv ? "csv" : "json";
    if (cfg.output_path) j["output_path"] = *cfg.output_path;
    return j;
}

inline RunConfig config_from_json(const ordered_json& j) {
    RunConfig cfg;
    cfg.command = command_from_name(j.at("command").get<std::string>());
    if (j.contains("problem")) cfg.problem = problem_from_json(j.at("problem"));
    if (j.contains("k")) cfg.k = j.at("k").get<std::uint64_t>();
    if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
    if (j.contains("grid")) {
        GridSpec g;
        g.min = j.at("grid").at("min").get<double>();
        g.max = j.at("grid").at("max").get<double>();
        g.points_per_decade = j.at("grid").at("points_per_decade").get<int>();
        cfg.grid = g;
    }
    if (j.contains("s")) cfg.s_values = j.at("s").get<std::vector<double>>();
    cfg.output = j.at("output").get<std::string>() == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
    return cfg;
}

namespace detail {

// Column-ordered table; every cell is already typed for JSON emission and
// formatted on demand for CSV.
struct Table {
    std::vector<std::string> columns;
    std::vector<ordered_json> rows;

    void add_row(ordered_json row) { rows.push_back(std::move(row)); }

    std::string to_csv() const {
        std::string out;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ',';
            out += columns[c];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < columns.size(); ++c) {
                if (c) out += ',';
                const auto& cell = row.at(columns[c]);
                if (cell.is_number_float())
                    out += format_double(cell.get<double>());
                else if (cell.is_number_unsigned())
                    out += std::to_string(cell.get<std::uint64_t>());
                else if (cell.is_number_integer())
                    out += std::to_string(cell.get<std::int64_t>());
                else
                    out += cell.get<std::string>();
            }
            out += '\n';
        }
        return out;
    }
};

inline void require_problem(const RunConfig& cfg) {
    if (!cfg.problem)
        throw std::invalid_argument(std::string(command_name(cfg.command)) +
                                    ": a problem description is required (--sides/--variant/--rho or --config)");
}

inline std::vector<double> resolve_tau_points(const RunConfig& cfg) {
    if (cfg.tau && cfg.grid)
        throw std::invalid_argument("count: give either --tau or a grid, not both");
    if (cfg.tau) return {*cfg.tau};
    if (cfg.grid) return geometric_grid(cfg.grid->min, cfg.grid->max, cfg.grid->points_per_decade);
    throw std::invalid_argument(std::string(command_name(cfg.command)) +
                                ": a tau value or grid specification is required");
}

}  // namespace detail

struct ExecResult {
    int exit_code = exit_ok;
    std::string payload;   // the artifact bytes (CSV text or JSON text + newline)
    std::string message;   // one-line diagnostic for nonzero exits
};

// Builds the artifact for a validated configuration. Performs no filesystem
// access; exit codes 0 and 3 come with a payload, others with a message only.
inline ExecResult execute(const RunConfig& cfg, int workers = 1) {
    ExecResult result;
    detail::Table table;
    ordered_json extra;

    switch (cfg.command) {
        case Command::Eigen: {
            detail::require_problem(cfg);
            table.columns = {"k", "mode", "freq", "lambda_cubed", "lambda"};
            auto modes = smallest_eigenvalues(*cfg.problem, cfg.k);
            for (std::uint64_t k = 1; k <= cfg.k; ++k) {
                const auto& mode = modes[k - 1];
                ordered_json row;
                row["k"] = k;
                row["mode"] = detail::mode_label(mode.mode);
                row["freq"] = mode.freq;
                row["lambda_cubed"] = mode.lambda_cubed;
                row["lambda"] = mode.lambda;
                table.add_row(std::move(row));
            }
            break;
        }
        case Command::Verify: {
            detail::require_problem(cfg);
            table.columns = {"k", "mode", "lambda", "flux", "ode", "lateral",
                             "top_value", "top_slope", "base_slope", "max_residual"};
            auto modes = smallest_eigenvalues(*cfg.problem, cfg.k);
            bool ok = true;
            for (std::uint64_t k = 1; k <= cfg.k; ++k) {
                const auto& mode = modes[k - 1];
                const ResidualReport rep = steklov_residual(*cfg.problem, mode.mode);
                ordered_json row;
                row["k"] = k;
                row["mode"] = detail::mode_label(mode.mode);
                row["lambda"] = mode.lambda;
                row["flux"] = rep.flux;
                row["ode"] = rep.ode;
                row["lateral"] = rep.lateral;
                row["top_value"] = rep.top_value;
                row["top_slope"] = rep.top_slope;
                row["base_slope"] = rep.base_slope;
                row["max_residual"] = rep.max_scaled();
                table.add_row(std::move(row));
                if (rep.max_scaled() > verify_tolerance) ok = false;
            }
            if (!ok) {
                result.exit_code = exit_invariant;
                result.message = "verify: a residual exceeds " + detail::format_double(verify_tolerance);
            }
            break;
        }
        case Command::Count: {
            detail::require_problem(cfg);
            table.columns = {"tau", "count", "radius", "volume", "surface",
                             "bracket_low", "bracket_high"};
            bool ok = true;
            for (double tau : detail::resolve_tau_points(cfg)) {
                const CountReport rep = assemble_count_report(*cfg.problem, tau, workers);
                ordered_json row;
                row["tau"] = rep.tau;
                row["count"] = rep.count_direct;
                row["radius"] = rep.radius;
                row["volume"] = rep.volume_estimate;
                row["surface"] = rep.surface_estimate;
                row["bracket_low"] = rep.bracket_low;
                row["bracket_high"] = rep.bracket_high;
                table.add_row(std::move(row));
                if (!rep.bracket_ok) ok = false;
            }
            if (!ok) {
                result.exit_code = exit_invariant;
                result.message = "count: the volume/surface bracket failed";
            }
            break;
        }
        case Command::Weyl:
        case Command::Remainder: {
            detail::require_problem(cfg);
            if (!cfg.grid)
                throw std::invalid_argument(std::string(command_name(cfg.command)) +
                                            ": a grid specification is required");
            const auto taus = geometric_grid(cfg.grid->min, cfg.grid->max, cfg.grid->points_per_decade);
            table.columns = {"tau", "count", "ratio", "weyl_constant", "relative_gap",
                             "scaled_remainder"};
            const WeylSweep sweep = weyl_sweep(*cfg.problem, taus, workers);
            for (const WeylRow& r : sweep.rows) {
                ordered_json row;
                row["tau"] = r.tau;
                row["count"] = r.count;
                row["ratio"] = r.ratio;
                row["weyl_constant"] = r.weyl_constant;
                row["relative_gap"] = r.relative_gap;
                row["scaled_remainder"] = r.scaled_remainder;
                table.add_row(std::move(row));
            }
            if (cfg.command == Command::Remainder) {
                const RemainderSummary summary = remainder_report(*cfg.problem, taus, workers);
                ordered_json s;
                s["max_scaled_remainder"] = summary.max_scaled_remainder;
                s["slope_fit"] = summary.slope_fit;
                s["fitted_rows"] = summary.fitted_rows;
                extra["summary"] = s;
            }
            break;
        }
        case Command::Tfun: {
            if (cfg.s_values.empty())
                throw std::invalid_argument("tfun: at least one --s value is required");
            table.columns = {"s", "t", "theta"};
            for (double s : cfg.s_values) {
                ordered_json row;
                row["s"] = s;
                row["t"] = t_fn(s);
                row["theta"] = theta_fn(s);
                table.add_row(std::move(row));
            }
            break;
        }
    }

    if (cfg.output == OutputFormat::Csv) {
        result.payload = table.to_csv();
    } else {
        ordered_json doc;
        ordered_json meta = config_to_json(cfg);
        meta["version"] = steklov::version;
        doc["meta"] = meta;
        doc["rows"] = ordered_json::array();
        for (auto& row : table.rows) doc["rows"].push_back(row);
        if (!extra.is_null())
            for (auto& [key, value] : extra.items()) doc[key] = value;
        result.payload = doc.dump(2);
        result.payload += '\n';
    }
    return result;
}

}  // namespace steklov::cli

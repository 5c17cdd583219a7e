// steklov/cli_args.hpp — argv -> RunConfig translation for the steklov
// binary, plus worker-count resolution from STEKLOV_WEYL_THREADS.

#pragma once

#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "steklov/cli.hpp"

namespace steklov::cli {

struct ParseResult {
    std::optional<RunConfig> config;  // set on success
    int exit_code = exit_ok;          // meaningful when config is empty
    std::string text;                 // help or error text
};

namespace detail {

struct ProblemFlags {
    int dim = 0;
    std::string sides_raw;
    std::string variant;
    double rho = 1.0;
    std::string config_path;
};

inline void add_problem_options(CLI::App* sub, ProblemFlags& flags) {
    sub->add_option("--dim", flags.dim, "box dimension n (redundant with --sides, checked if given)");
    auto* sides = sub->add_option("--sides", flags.sides_raw,
                                  "comma-separated side lengths l_1,...,l_n");
    auto* variant = sub->add_option("--variant", flags.variant,
                                    "lateral boundary condition: lateral-dirichlet | lateral-free");
    auto* rho = sub->add_option("--rho", flags.rho, "constant density on the base face");
    auto* config = sub->add_option("--config", flags.config_path,
                                   "JSON problem file {dim, sides, variant, rho}");
    config->excludes(sides)->excludes(variant)->excludes(rho);
}

inline std::vector<double> parse_csv_doubles(const std::string& raw, const char* what) {
    std::vector<double> values;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t comma = raw.find(',', pos);
        const std::string token =
            raw.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": malformed number '" + token + "'");
        }
        if (used != token.size())
            throw std::invalid_argument(std::string(what) + ": malformed number '" + token + "'");
        values.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return values;
}

inline SteklovProblem build_problem(const ProblemFlags& flags) {
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw std::invalid_argument("cannot read problem config: " + flags.config_path);
        ordered_json j = ordered_json::parse(in);
        return problem_from_json(j);
    }
    if (flags.sides_raw.empty())
        throw std::invalid_argument("a problem requires --sides and --variant (or --config)");
    if (flags.variant.empty())
        throw std::invalid_argument("a problem requires --variant lateral-dirichlet | lateral-free");
    const std::vector<double> sides = parse_csv_doubles(flags.sides_raw, "--sides");
    if (flags.dim != 0 && flags.dim != static_cast<int>(sides.size()))
        throw std::invalid_argument("--dim does not match the number of --sides entries");
    return SteklovProblem(BoxDomain(sides), variant_from_name(flags.variant), flags.rho);
}

struct GridFlags {
    double tau_min = 0.0;
    double tau_max = 0.0;
    int points_per_decade = 40;
    bool min_set = false, max_set = false;
};

inline void add_grid_options(CLI::App* sub, GridFlags& flags) {
    sub->add_option("--tau-min", flags.tau_min, "grid start")->each([&](const std::string&) { flags.min_set = true; });
    sub->add_option("--tau-max", flags.tau_max, "grid end")->each([&](const std::string&) { flags.max_set = true; });
    sub->add_option("--points-per-decade", flags.points_per_decade, "grid resolution (default 40)");
}

inline std::optional<GridSpec> build_grid(const GridFlags& flags) {
    if (!flags.min_set && !flags.max_set) return std::nullopt;
    if (!flags.min_set || !flags.max_set)
        throw std::invalid_argument("--tau-min and --tau-max must be given together");
    GridSpec g;
    g.min = flags.tau_min;
    g.max = flags.tau_max;
    g.points_per_decade = flags.points_per_decade;
    if (!(g.min < g.max)) throw std::invalid_argument("grid requires tau-min < tau-max");
    if (g.points_per_decade < 1) throw std::invalid_argument("--points-per-decade must be >= 1");
    return g;
}

}  // namespace detail

// Parses argv (excluding the program name is handled by CLI11 itself).
inline ParseResult parse_args(int argc, const char* const* argv) {
    CLI::App app{"biharmonic Steklov spectra on boxes: eigenvalues, counting, Weyl diagnostics"};
    app.require_subcommand(1);

    detail::ProblemFlags problem_flags;
    detail::GridFlags grid_flags;
    std::string output_format = "csv";
    std::string output_path;
    std::uint64_t k = 1;
    double tau = 0.0;
    bool tau_set = false;
    std::vector<double> s_values;

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--output", output_format, "csv | json (default csv)")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", output_path, "write the artifact to this path (default stdout)");
    };

    auto* eigen = app.add_subcommand("eigen", "table of the k smallest eigenpairs");
    detail::add_problem_options(eigen, problem_flags);
    eigen->add_option("--k", k, "number of eigenvalues (default 1)");
    add_output(eigen);

    auto* verify = app.add_subcommand("verify", "residual verification of the k smallest eigenpairs");
    detail::add_problem_options(verify, problem_flags);
    verify->add_option("--k", k, "number of eigenvalues to verify (default 1)");
    add_output(verify);

    auto* count = app.add_subcommand("count", "counting function with volume/surface bracket");
    detail::add_problem_options(count, problem_flags);
    count->add_option("--tau", tau, "single evaluation point")->each([&](const std::string&) { tau_set = true; });
    detail::add_grid_options(count, grid_flags);
    add_output(count);

    auto* weyl = app.add_subcommand("weyl", "counting-function sweep against the Weyl constant");
    detail::add_problem_options(weyl, problem_flags);
    detail::add_grid_options(weyl, grid_flags);
    add_output(weyl);

    auto* remainder = app.add_subcommand("remainder", "remainder diagnostics over a grid");
    detail::add_problem_options(remainder, problem_flags);
    detail::add_grid_options(remainder, grid_flags);
    add_output(remainder);

    auto* tfun = app.add_subcommand("tfun", "evaluate the spectral map t and its certificate theta");
    tfun->add_option("--s", s_values, "comma-separated evaluation points")->delimiter(',');
    add_output(tfun);

    ParseResult result;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        result.exit_code = exit_ok;
        result.text = app.help();
        return result;
    } catch (const CLI::ParseError& e) {
        result.exit_code = exit_usage;
        result.text = std::string("error: ") + e.what();
        return result;
    }

    try {
        RunConfig cfg;
        CLI::App* sub = app.get_subcommands().front();
        cfg.command = command_from_name(sub->get_name());
        if (cfg.command != Command::Tfun) cfg.problem = detail::build_problem(problem_flags);
        cfg.k = k;
        if (tau_set) cfg.tau = tau;
        cfg.grid = detail::build_grid(grid_flags);
        cfg.s_values = s_values;
        cfg.output = output_format == "json" ? OutputFormat::Json : OutputFormat::Csv;
        if (!output_path.empty()) cfg.output_path = output_path;
        result.config = std::move(cfg);
    } catch (const std::exception& e) {
        result.exit_code = exit_usage;
        result.text = std::string("error: ") + e.what();
    }
    return result;
}

// STEKLOV_WEYL_THREADS caps the worker count; unset means one worker.
inline int workers_from_env() {
    const char* raw = std::getenv("STEKLOV_WEYL_THREADS");
    if (raw == nullptr || *raw == '\0') return 1;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 1)
        throw std::invalid_argument("STEKLOV_WEYL_THREADS must be a positive integer");
    return resolve_workers(static_cast<int>(v));
}

}  // namespace steklov::cli

// steklov — command-line front end. See README.md for usage.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>

#include "steklov/cli.hpp"
#include "steklov/cli_args.hpp"

namespace {

int emit(const steklov::cli::RunConfig& cfg, const steklov::cli::ExecResult& result) {
    if (cfg.output_path) {
        std::ofstream out(*cfg.output_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot open output file: " << *cfg.output_path << '\n';
            return steklov::cli::exit_io;
        }
        out << result.payload;
        if (!out) {
            std::cerr << "error: failed writing output file: " << *cfg.output_path << '\n';
            return steklov::cli::exit_io;
        }
    } else {
        std::cout << result.payload;
    }
    if (!result.message.empty()) std::cerr << result.message << '\n';
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace steklov::cli;
    try {
        ParseResult parsed = parse_args(argc, argv);
        if (!parsed.config) {
            if (parsed.exit_code == exit_ok)
                std::cout << parsed.text;
            else
                std::cerr << parsed.text << '\n';
            return parsed.exit_code;
        }
        const int workers = workers_from_env();
        const ExecResult result = execute(*parsed.config, workers);
        return emit(*parsed.config, result);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

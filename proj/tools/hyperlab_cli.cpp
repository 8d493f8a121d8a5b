#include "hyperlab/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Runs one hyperlab experiment from a JSON config and writes a JSON report."};
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    app.add_option("--config", config, "experiment config (JSON)")->required();
    app.add_option("--seed", seed, "overrides the config seed");
    app.add_option("--out", out, "output directory for reports and CSV files");
    app.add_flag("--quiet", quiet, "only print errors");
    app.footer(
        "Exit codes: 0 success, 2 config error, 3 bound violation, 4 numerical failure.\n"
        "Commands: criterion mscan family-a family-b admissible-c lattice runge common-vector\n"
        "          sm2 kitai hardy pn-checks cn-volume mf-area threshold");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : hyperlab::cli::exit_config_error;
    }
    return hyperlab::cli::run_file(config, seed, out, quiet, quiet ? std::cerr : std::cout);
}

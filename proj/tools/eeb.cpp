// eeb: boundary catalogue, bonus profiles and PSOR verification from scenario files.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "eeb/error.hpp"
#include "eeb/runner.hpp"
#include "eeb/scenario.hpp"

namespace {

struct Overrides {
    std::optional<int> n_space;
    std::optional<int> n_time;
    std::optional<double> tol;
    std::optional<double> tolerance;
};

void add_psor_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--n-space", o.n_space, "PSOR space steps");
    cmd->add_option("--n-time", o.n_time, "PSOR time steps");
    cmd->add_option("--tol", o.tol, "PSOR stopping tolerance");
    cmd->add_option("--tolerance", o.tolerance, "relative error allowed per boundary point (default 5e-4)");
}

void apply(const Overrides& o, eeb::RunOptions& opts) {
    opts.n_space = o.n_space;
    opts.n_time = o.n_time;
    opts.tol = o.tol;
    if (o.tolerance) opts.default_tolerance = *o.tolerance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Early-exercise boundary at expiry: closed forms, bonus profiles, PSOR checks"};
    app.require_subcommand(1);

    eeb::RunOptions opts;
    std::string out_dir = opts.out_dir.string();
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--workers", opts.workers, "concurrent scenarios")->check(CLI::PositiveNumber)->capture_default_str();

    std::string file;
    std::string grid = "0.5:2.5:201";
    Overrides verify_flags, table_flags;

    auto* boundary = app.add_subcommand("boundary", "analytic boundary per scenario");
    boundary->add_option("file", file, "scenario file")->required();
    boundary->fallthrough();

    auto* profile = app.add_subcommand("bonus-profile", "bonus function sampled on a grid");
    profile->add_option("file", file, "scenario file")->required();
    profile->add_option("--grid", grid, "lo:hi:n")->capture_default_str();
    profile->fallthrough();

    auto* verify = app.add_subcommand("psor-verify", "PSOR boundary against the closed form");
    verify->add_option("file", file, "scenario file")->required();
    add_psor_flags(verify, verify_flags);
    verify->fallthrough();

    auto* table1 = app.add_subcommand("table1", "the three built-in condor rows");
    add_psor_flags(table1, table_flags);
    table1->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? eeb::kExitOk : eeb::kExitInputError;
    }
    opts.out_dir = out_dir;

    try {
        eeb::RunReport rep;
        if (*table1) {
            apply(table_flags, opts);
            rep = eeb::run_table1(opts);
        } else {
            const auto scenarios = eeb::load_scenarios(file);
            if (*boundary) {
                rep = eeb::run_boundary(scenarios, opts);
            } else if (*profile) {
                opts.grid = eeb::parse_grid(grid);
                rep = eeb::run_bonus_profile(scenarios, opts);
            } else {
                apply(verify_flags, opts);
                rep = eeb::run_psor_verify(scenarios, opts);
            }
        }
        std::cout << rep.summary;
        for (const auto& f : rep.files) std::cerr << "wrote " << f.string() << '\n';
        return rep.exit_code;
    } catch (const eeb::InvalidSpec& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return eeb::kExitInputError;
    } catch (const eeb::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return eeb::kExitVerificationFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return eeb::kExitInputError;
    }
}

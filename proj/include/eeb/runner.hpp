#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eeb/scenario.hpp"

namespace eeb {

enum ExitCode : int { kExitOk = 0, kExitVerificationFailure = 1, kExitInputError = 2 };

struct ProfileGrid {
    double lo = 0.5;
    double hi = 2.5;
    int n = 201;
};

/// Parses "lo:hi:n".
ProfileGrid parse_grid(const std::string& text);

struct RunOptions {
    std::filesystem::path out_dir = "eeb-out";
    int workers = 1;
    /// Overrides applied on top of each scenario's PSOR settings.
    std::optional<int> n_space;
    std::optional<int> n_time;
    std::optional<double> tol;
    double default_tolerance = 5e-4;
    ProfileGrid grid;
    bool write_files = true;
};

struct RunReport {
    int exit_code = kExitOk;
    std::string summary;  // GitHub-flavoured markdown
    std::vector<std::filesystem::path> files;
};

/// Analytic boundary per scenario: <id>_boundary.csv and boundary_summary.md.
RunReport run_boundary(const std::vector<Scenario>& scenarios, const RunOptions& opts);

/// f_b on the grid per scenario: <id>_bonus_profile.csv.
RunReport run_bonus_profile(const std::vector<Scenario>& scenarios, const RunOptions& opts);

/// PSOR against the catalogue per scenario: <id>_psor.csv and psor_summary.md.
/// Exit code 1 when any scenario exceeds its tolerance.
RunReport run_psor_verify(const std::vector<Scenario>& scenarios, const RunOptions& opts);

/// The three condor rows r, q, sigma, X1..X4 of the reference comparison.
std::vector<Scenario> table1_scenarios();

RunReport run_table1(const RunOptions& opts);

/// CSV text of the bonus profile, exposed for tests.
std::string bonus_profile_csv(const Scenario& scenario, const ProfileGrid& grid);

}  // namespace eeb

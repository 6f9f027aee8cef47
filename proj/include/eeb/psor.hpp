#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eeb/boundary.hpp"
#include "eeb/market.hpp"

namespace eeb {

enum class Coordinate { LogSpot, RawSpot };

/// Finite-difference and PSOR settings. Defaults: 250 time steps, 40000
/// space steps on [-1.5, 1.5] in x = ln(S / S_ref), omega = 1.4,
/// tolerance 1e-14, expiry 1e-8, Crank-Nicolson.
struct PsorConfig {
    int n_time = 250;
    int n_space = 40000;
    double lo = -1.5;
    double hi = 1.5;
    double omega = 1.4;
    double tol = 1e-14;
    double expiry = 1e-8;
    double theta = 0.5;
    Coordinate coordinate = Coordinate::LogSpot;
    /// S_ref of the log coordinate; geometric mean of the payoff breakpoints when unset.
    std::optional<double> reference;
    /// Widen [lo, hi] so every breakpoint and analytic boundary point sits at
    /// least widen_margin inside (in x for LogSpot, relative for RawSpot).
    bool auto_widen = true;
    double widen_margin = 0.3;
    int max_sweeps = 100000;
    /// Interior runs of stopping/continuation nodes shorter than this are
    /// treated as kink artifacts and merged into their neighbours.
    int min_island_nodes = 8;
    /// Threshold on the bonus indicator; 10 tol max|Omega| when unset.
    std::optional<double> detection_slack;

    void validate() const;
    bool operator==(const PsorConfig&) const = default;
};

struct Grid {
    Coordinate coordinate = Coordinate::LogSpot;
    double reference = 1.0;
    double lo = 0.0;
    double hi = 0.0;
    double h = 0.0;
    std::vector<double> x;     // computational coordinate
    std::vector<double> spot;  // S at each node
};

struct Obstacle {
    Grid grid;
    std::vector<double> omega;  // payoff at the nodes
};

/// One retained time level of the backward induction.
struct TimeLevel {
    double t = 0.0;                  // calendar time; T - t is time to expiry
    double tau = 0.0;                // time to expiry
    std::vector<double> value;       // V
    std::vector<double> excess;      // V - Omega
    std::vector<double> residual;    // (A u - rhs) of the step's LCP
    std::vector<double> multiplier;  // residual on the active set, 0 elsewhere
    std::vector<std::uint8_t> active;  // V == Omega
};

struct PsorSolution {
    Obstacle obstacle;
    double dt = 0.0;
    /// levels.front() is the level closest to expiry, levels.back() is t = 0.
    std::vector<TimeLevel> levels;
    std::vector<int> iterations;  // sweeps per time step
    double complementarity_slack = 0.0;
    double detection_slack = 0.0;
    int min_island_nodes = 8;
    BoundarySet extracted_boundary;
};

/// Payoff sampled on the mesh. Only spot-only, time-independent payoffs
/// (vanilla and strategies) are accepted; anything else is Unsupported.
Obstacle build_obstacle(const DerivativeSpec& spec, const MarketParams& params, const PsorConfig& cfg);

/// Backward induction of the theta-scheme LCP in the excess u = V - Omega >= 0,
/// Dirichlet u = 0 at both ends, projected SOR with natural ordering. Throws
/// Divergence when a step does not converge within max_sweeps.
PsorSolution psor_solve(const DerivativeSpec& spec, const MarketParams& params, const PsorConfig& cfg);

/// Boundary points at the level closest to expiry. Stopping nodes are active
/// nodes whose multiplier per unit time exceeds the detection slack; each
/// stopping/continuation transition is located by linear interpolation of the
/// signed indicator multiplier/dt - excess/tau between the two nodes.
BoundarySet extract_exercise_boundary(const PsorSolution& sol, std::size_t level = 0);

struct ComplementarityReport {
    bool ok = true;
    double tolerance = 0.0;
    double min_excess = 0.0;
    double min_residual = 0.0;
    double max_product = 0.0;
};

/// Checks u >= -tol_c, residual >= -tol_c and u * residual <= tol_c at every
/// interior node of every retained level.
ComplementarityReport check_complementarity(const PsorSolution& sol);

struct BoundaryPair {
    double theoretical = 0.0;
    double calculated = 0.0;
    double relative_error = 0.0;  // (calculated - theoretical) / theoretical
};

struct VerificationReport {
    BoundarySet analytic;
    BoundarySet numerical;
    std::vector<BoundaryPair> pairs;
    bool cardinality_mismatch = false;
    std::string message;
    int total_sweeps = 0;

    double max_abs_error() const noexcept;
    bool passes(double tolerance) const noexcept;
};

/// Pairs each analytic point with the nearest PSOR point.
VerificationReport verify_against_analytic(const DerivativeSpec& spec, const MarketParams& params,
                                           const PsorConfig& cfg);

}  // namespace eeb

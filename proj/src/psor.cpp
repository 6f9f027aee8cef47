#include "eeb/psor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eeb/error.hpp"

namespace eeb {

namespace {

// Tridiagonal coefficients of the spatial operator L at each node:
// (L u)_i = lower[i] u_{i-1} + diag[i] u_i + upper[i] u_{i+1}.
struct Stencil {
    std::vector<double> lower, diag, upper;
};

Stencil build_stencil(const Grid& g, const MarketParams& m) {
    const std::size_t n = g.x.size();
    Stencil s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    const double h2 = g.h * g.h;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double diff = 0.0, conv = 0.0;
        if (g.coordinate == Coordinate::LogSpot) {
            diff = 0.5 * m.sigma * m.sigma / h2;
            conv = (m.r - m.q - 0.5 * m.sigma * m.sigma) / (2.0 * g.h);
        } else {
            const double S = g.spot[i];
            diff = 0.5 * m.sigma * m.sigma * S * S / h2;
            conv = (m.r - m.q) * S / (2.0 * g.h);
        }
        s.lower[i] = diff - conv;
        s.diag[i] = -2.0 * diff - m.r;
        s.upper[i] = diff + conv;
    }
    return s;
}

bool spot_only(const DerivativeSpec& spec) {
    return spec.kind == Kind::VanillaCall || spec.kind == Kind::VanillaPut || spec.kind == Kind::Strategy;
}

TimeLevel make_level(double t, double tau, const std::vector<double>& omega, const std::vector<double>& u,
                     std::vector<double> residual) {
    TimeLevel level;
    level.t = t;
    level.tau = tau;
    const std::size_t n = u.size();
    level.value.resize(n);
    level.multiplier.assign(n, 0.0);
    level.active.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        level.value[i] = omega[i] + u[i];
        if (u[i] == 0.0) {
            level.active[i] = 1;
            level.multiplier[i] = std::max(residual[i], 0.0);
        }
    }
    level.excess = u;
    level.residual = std::move(residual);
    return level;
}

// Merges interior runs shorter than min_len into their surroundings.
void remove_islands(std::vector<std::uint8_t>& flags, int min_len) {
    if (min_len <= 1) return;
    for (;;) {
        bool changed = false;
        std::size_t start = 0;
        while (start < flags.size()) {
            std::size_t end = start;
            while (end < flags.size() && flags[end] == flags[start]) ++end;
            const bool interior = start > 0 && end < flags.size();
            if (interior && end - start < static_cast<std::size_t>(min_len)) {
                std::fill(flags.begin() + static_cast<std::ptrdiff_t>(start),
                          flags.begin() + static_cast<std::ptrdiff_t>(end), flags[start - 1]);
                changed = true;
                break;
            }
            start = end;
        }
        if (!changed) return;
    }
}

}  // namespace

void PsorConfig::validate() const {
    if (n_time < 1) throw InvalidSpec("n_time must be >= 1");
    if (n_space < 3) throw InvalidSpec("n_space must be >= 3");
    if (!(lo < hi)) throw InvalidSpec("domain needs lo < hi");
    if (!(omega > 0.0 && omega < 2.0)) throw InvalidSpec("omega must lie in (0, 2)");
    if (!(tol > 0.0)) throw InvalidSpec("tol must be positive");
    if (!(expiry > 0.0)) throw InvalidSpec("expiry must be positive");
    if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidSpec("theta must lie in [0, 1]");
    if (reference && !(*reference > 0.0)) throw InvalidSpec("reference spot must be positive");
    if (!(widen_margin >= 0.0)) throw InvalidSpec("widen_margin must be non-negative");
    if (max_sweeps < 1) throw InvalidSpec("max_sweeps must be >= 1");
    if (min_island_nodes < 1) throw InvalidSpec("min_island_nodes must be >= 1");
    if (detection_slack && !(*detection_slack >= 0.0)) throw InvalidSpec("detection_slack must be >= 0");
}

Obstacle build_obstacle(const DerivativeSpec& spec, const MarketParams& params, const PsorConfig& cfg) {
    cfg.validate();
    params.validate();
    spec.validate();
    if (!spot_only(spec)) {
        throw Unsupported(std::string("PSOR verification covers vanilla options and strategies only, not ") +
                          std::string(kind_name(spec.kind)));
    }
    const std::vector<double> breaks = build_payoff(spec).breakpoints;

    Grid g;
    g.coordinate = cfg.coordinate;
    if (cfg.reference) {
        g.reference = *cfg.reference;
    } else if (!breaks.empty()) {
        double log_sum = 0.0;
        for (double b : breaks) log_sum += std::log(b);
        g.reference = std::exp(log_sum / static_cast<double>(breaks.size()));
    }

    g.lo = cfg.lo;
    g.hi = cfg.hi;
    if (cfg.auto_widen) {
        std::vector<double> candidates = breaks;
        try {
            const BoundarySet analytic = catalogue_boundary(spec, params);
            for (double p : analytic.points) {
                if (std::isfinite(p) && p > 0.0) candidates.push_back(p);
            }
        } catch (const Error&) {
            // No analytic reference; the breakpoints alone set the extent.
        }
        for (double c : candidates) {
            if (g.coordinate == Coordinate::LogSpot) {
                const double xc = std::log(c / g.reference);
                g.lo = std::min(g.lo, xc - cfg.widen_margin);
                g.hi = std::max(g.hi, xc + cfg.widen_margin);
            } else {
                g.lo = std::min(g.lo, c * (1.0 - cfg.widen_margin));
                g.hi = std::max(g.hi, c * (1.0 + cfg.widen_margin));
            }
        }
    }
    if (g.coordinate == Coordinate::RawSpot && g.lo < 0.0) {
        if (!cfg.auto_widen) throw InvalidSpec("raw-spot domain must satisfy lo >= 0");
        g.lo = 0.0;
    }

    const std::size_t n = static_cast<std::size_t>(cfg.n_space) + 1;
    g.h = (g.hi - g.lo) / cfg.n_space;
    g.x.resize(n);
    g.spot.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.x[i] = i + 1 == n ? g.hi : g.lo + static_cast<double>(i) * g.h;
        g.spot[i] = g.coordinate == Coordinate::LogSpot ? g.reference * std::exp(g.x[i]) : g.x[i];
    }

    Obstacle ob;
    ob.omega.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ob.omega[i] = payoff_eval(spec, params, spec.expiry, State{g.spot[i]});
    }
    ob.grid = std::move(g);
    return ob;
}

PsorSolution psor_solve(const DerivativeSpec& spec, const MarketParams& params, const PsorConfig& cfg) {
    PsorSolution sol;
    sol.obstacle = build_obstacle(spec, params, cfg);
    const Grid& g = sol.obstacle.grid;
    const std::vector<double>& omega = sol.obstacle.omega;
    const std::size_t n = g.x.size();
    const Stencil L = build_stencil(g, params);

    const double dt = cfg.expiry / cfg.n_time;
    sol.dt = dt;
    double omega_max = 0.0;
    for (double v : omega) omega_max = std::max(omega_max, std::abs(v));
    sol.complementarity_slack = 10.0 * cfg.tol * std::max(1.0, omega_max);
    sol.detection_slack = cfg.detection_slack.value_or(10.0 * cfg.tol * (omega_max > 0.0 ? omega_max : 1.0));
    sol.min_island_nodes = cfg.min_island_nodes;

    // A = I - theta dt L (implicit part), B = I + (1 - theta) dt L (explicit part).
    std::vector<double> a_lo(n), a_d(n), a_up(n), l_omega(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        a_lo[i] = -cfg.theta * dt * L.lower[i];
        a_d[i] = 1.0 - cfg.theta * dt * L.diag[i];
        a_up[i] = -cfg.theta * dt * L.upper[i];
        l_omega[i] = L.lower[i] * omega[i - 1] + L.diag[i] * omega[i] + L.upper[i] * omega[i + 1];
    }

    std::vector<double> u(n, 0.0), rhs(n, 0.0), residual(n, 0.0);
    const double explicit_w = (1.0 - cfg.theta) * dt;
    sol.iterations.reserve(static_cast<std::size_t>(cfg.n_time));

    for (int step = 1; step <= cfg.n_time; ++step) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double lu = L.lower[i] * u[i - 1] + L.diag[i] * u[i] + L.upper[i] * u[i + 1];
            rhs[i] = u[i] + explicit_w * lu + dt * l_omega[i];
        }

        int sweeps = 0;
        double change = std::numeric_limits<double>::infinity();
        while (change >= cfg.tol) {
            if (sweeps == cfg.max_sweeps) {
                std::ostringstream msg;
                msg << "PSOR did not converge in " << cfg.max_sweeps << " sweeps at time step " << step
                    << " (last max update " << change << ")";
                throw Divergence(msg.str(), step, change);
            }
            change = 0.0;
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double gs = (rhs[i] - a_lo[i] * u[i - 1] - a_up[i] * u[i + 1]) / a_d[i];
                const double next = std::max(0.0, u[i] + cfg.omega * (gs - u[i]));
                change = std::max(change, std::abs(next - u[i]));
                u[i] = next;
            }
            ++sweeps;
        }
        sol.iterations.push_back(sweeps);

        if (step == 1 || step == cfg.n_time) {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                residual[i] = a_lo[i] * u[i - 1] + a_d[i] * u[i] + a_up[i] * u[i + 1] - rhs[i];
            }
            const double tau = dt * step;
            sol.levels.push_back(make_level(cfg.expiry - tau, tau, omega, u, residual));
        }
    }

    sol.extracted_boundary = extract_exercise_boundary(sol);
    return sol;
}

BoundarySet extract_exercise_boundary(const PsorSolution& sol, std::size_t level_index) {
    if (level_index >= sol.levels.size()) throw OutOfRange("no such retained time level");
    const TimeLevel& level = sol.levels[level_index];
    const Grid& g = sol.obstacle.grid;
    const std::size_t n = g.x.size();
    if (n < 3) return BoundarySet::none("grid has no interior nodes");

    // Approximates f_b: multiplier per unit time on the stopping set,
    // minus excess per unit time to expiry on the continuation set.
    std::vector<double> indicator(n, 0.0);
    std::vector<std::uint8_t> stop(n - 2, 0);
    bool any_active = false;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        indicator[i] = level.multiplier[i] / sol.dt - level.excess[i] / level.tau - sol.detection_slack;
        stop[i - 1] = indicator[i] > 0.0;
        any_active = any_active || stop[i - 1];
    }
    if (!any_active) return BoundarySet::none("no active set: no exercise region on the grid");
    remove_islands(stop, sol.min_island_nodes);
    if (std::all_of(stop.begin(), stop.end(), [](std::uint8_t s) { return s != 0; })) {
        return BoundarySet::none("stopping region covers the whole grid");
    }

    std::vector<double> points;
    for (std::size_t k = 0; k + 1 < stop.size(); ++k) {
        if (stop[k] == stop[k + 1]) continue;
        const std::size_t i = k + 1;
        const double gi = indicator[i], gj = indicator[i + 1];
        double frac = 0.5;
        if ((gi > 0.0) != (gj > 0.0) && gi != gj) frac = std::clamp(gi / (gi - gj), 0.0, 1.0);
        const double x = g.x[i] + frac * (g.x[i + 1] - g.x[i]);
        points.push_back(g.coordinate == Coordinate::LogSpot ? g.reference * std::exp(x) : x);
    }
    std::sort(points.begin(), points.end());
    return BoundarySet::spot(std::move(points));
}

ComplementarityReport check_complementarity(const PsorSolution& sol) {
    ComplementarityReport rep;
    rep.tolerance = sol.complementarity_slack;
    rep.min_excess = std::numeric_limits<double>::infinity();
    rep.min_residual = std::numeric_limits<double>::infinity();
    for (const TimeLevel& level : sol.levels) {
        const std::size_t n = level.excess.size();
        for (std::size_t i = 1; i + 1 < n; ++i) {
            rep.min_excess = std::min(rep.min_excess, level.excess[i]);
            rep.min_residual = std::min(rep.min_residual, level.residual[i]);
            rep.max_product = std::max(rep.max_product, level.excess[i] * level.residual[i]);
        }
    }
    rep.ok = rep.min_excess >= -rep.tolerance && rep.min_residual >= -rep.tolerance &&
             rep.max_product <= rep.tolerance;
    return rep;
}

double VerificationReport::max_abs_error() const noexcept {
    double worst = 0.0;
    for (const BoundaryPair& p : pairs) worst = std::max(worst, std::abs(p.relative_error));
    return worst;
}

bool VerificationReport::passes(double tolerance) const noexcept {
    if (analytic.empty() && numerical.empty()) return true;
    return !cardinality_mismatch && max_abs_error() <= tolerance;
}

VerificationReport verify_against_analytic(const DerivativeSpec& spec, const MarketParams& params,
                                           const PsorConfig& cfg) {
    VerificationReport rep;
    rep.analytic = catalogue_boundary(spec, params);
    const PsorSolution sol = psor_solve(spec, params, cfg);
    rep.numerical = sol.extracted_boundary;
    for (int it : sol.iterations) rep.total_sweeps += it;

    if (rep.analytic.empty() && rep.numerical.empty()) {
        rep.message = "consistent: no exercise region";
        return rep;
    }
    if (rep.analytic.empty() || rep.numerical.empty()) {
        rep.cardinality_mismatch = true;
        rep.message = rep.analytic.empty() ? "analytic set is empty (" + rep.analytic.diagnostic + ")"
                                           : "no boundary found numerically (" + rep.numerical.diagnostic + ")";
        return rep;
    }
    for (double a : rep.analytic.points) {
        const auto nearest = std::min_element(rep.numerical.points.begin(), rep.numerical.points.end(),
                                              [a](double l, double r) { return std::abs(l - a) < std::abs(r - a); });
        rep.pairs.push_back({a, *nearest, (*nearest - a) / a});
    }
    if (rep.analytic.points.size() != rep.numerical.points.size()) {
        rep.cardinality_mismatch = true;
        std::ostringstream msg;
        msg << "cardinality mismatch: " << rep.analytic.points.size() << " analytic vs "
            << rep.numerical.points.size() << " numerical points";
        rep.message = msg.str();
    }
    return rep;
}

}  // namespace eeb

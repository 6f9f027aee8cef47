#pragma once

#include <string>
#include <vector>

#include "eeb/bonus.hpp"
#include "eeb/market.hpp"
#include "eeb/roots.hpp"

namespace eeb {

enum class BoundaryKind { SpotPoints, PathRatio, Empty };

/// Limit of the early-exercise boundary at expiry: the boundary of the set
/// where f_b(T, .) > 0. Spot-only derivatives give spot levels; path-dependent
/// ones give critical ratios S/A (S/m, S/M).
struct BoundarySet {
    BoundaryKind kind = BoundaryKind::Empty;
    std::vector<double> points;  // ascending
    std::string diagnostic;      // why the set is empty, when it is

    bool empty() const noexcept { return kind == BoundaryKind::Empty; }

    static BoundarySet none(std::string why) { return {BoundaryKind::Empty, {}, std::move(why)}; }
    static BoundarySet spot(std::vector<double> points) {
        return {BoundaryKind::SpotPoints, std::move(points), {}};
    }
    static BoundarySet ratio(double value) { return {BoundaryKind::PathRatio, {value}, {}}; }
};

/// Boundary of {f_b > 0} in the topology of (0, inf), computed piece by piece.
/// Affine pieces are solved in closed form; other pieces must be monotone
/// (AnalysisError otherwise) and are root-isolated by bracketing. Roots within
/// a relative 1e-12 of a breakpoint are identified with it.
BoundarySet extract_boundary(const BonusFunction& fb);

// ---------------------------------------------------------------------------
// Closed-form catalogue.

/// Call max[X, rX/q], put min[X, rX/q]. A call with q = 0 has no exercise
/// region (f_b = -rX above X) and returns Empty.
BoundarySet vanilla_boundary(const MarketParams& params, OptionType type, double strike);

enum class CondorCase {
    SinglePoint = 1,  // -X4+X3+X2-X1 > 0 and r(X3+X2-X1) >= q X4
    ThreePoints = 2,  // -X4+X3+X2-X1 > 0 and r(X3+X2-X1) <  q X4
    TwoPoints = 3,    // -X4+X3+X2-X1 <= 0
};

CondorCase condor_case(const MarketParams& params, double x1, double x2, double x3, double x4);

/// Requires r > 0: with r = 0 the bonus vanishes on (X2, X3) and the
/// case formulas no longer describe the positive set.
BoundarySet condor_boundary(const MarketParams& params, double x1, double x2, double x3, double x4);

/// Residual r - q y - w E_p(y) (w = lambda / (1 - e^{-lambda T}), 1/T when
/// lambda = 0). Geometric averaging is p = 0, where it reads r - q y - ln(y)/T.
RootProblem average_ratio_problem(const MarketParams& params, const AveragingSpec& avg, double expiry);

/// Positive root of average_ratio_problem (unique for q >= 0, T > 0).
double average_ratio_root(const MarketParams& params, const AveragingSpec& avg, double expiry);

/// Critical ratio S/A: max[1, root] for calls, min[1, root] for puts.
/// Arithmetic: root (r + 1/T) / (q + 1/T). Min/max (lookback): root r/q.
/// Geometric and weighted averages solve the transcendental equation.
BoundarySet asian_ratio_boundary(const MarketParams& params, const AveragingSpec& avg,
                                 OptionType type, double expiry);

/// Always {X}: the bonus is 0 on one side of the strike and +inf on the other.
BoundarySet shout_boundary(const MarketParams& params, double strike, OptionType type);

/// Call max[X, rX/(q + mu_c)], put min[X, rX/(q + mu_c)]. Throws
/// DegenerateDrift when q + mu_c <= 0.
BoundarySet british_boundary(const MarketParams& params, double mu_c, double strike, OptionType type);

/// Dispatches to the dedicated closed form for the spec's family. General
/// strategies (not condors) fall back to extract_boundary(bonus_symbolic(...)).
BoundarySet catalogue_boundary(const DerivativeSpec& spec, const MarketParams& params);

}  // namespace eeb

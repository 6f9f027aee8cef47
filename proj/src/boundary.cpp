#include "eeb/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "eeb/error.hpp"

namespace eeb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSnap = 1e-12;

bool near(double a, double b) noexcept { return std::abs(a - b) <= kSnap * std::max(std::abs(b), 1e-300); }

// max[lo, num/den] with rounding-level ties resolved to lo. den == 0 reads num/den as +inf.
double max_ratio(double lo, double num, double den) noexcept {
    if (den == 0.0) return num > 0.0 ? kInf : lo;
    if (num <= den * lo * (1.0 + 4.0 * kEps)) return lo;
    return num / den;
}

// min[hi, num/den], same conventions.
double min_ratio(double hi, double num, double den) noexcept {
    if (den == 0.0) return num > 0.0 ? hi : 0.0;
    if (num >= den * hi * (1.0 - 4.0 * kEps)) return hi;
    return num / den;
}

// Interior root of a monotone piece on (a, b), if any.
std::optional<double> interior_root(const BonusPiece& piece, double a, double b) {
    if (piece.plus_infinity) return std::nullopt;
    const AnalyticPiece& e = piece.expr;

    double root = 0.0;
    if (e.is_affine()) {
        if (e.c1 == 0.0) return std::nullopt;
        root = -e.c0 / e.c1;
    } else {
        const auto dir = e.monotone_direction();
        if (!dir) {
            throw AnalysisError("bonus piece is not monotone; cannot isolate its roots");
        }
        // Geometric probes inside (a, b) until the sign flips.
        const double lo_end = a > 0.0 ? a : std::min(1.0, b) * std::ldexp(1.0, -60);
        const double hi_end = std::isfinite(b) ? b : std::max(1.0, a) * std::ldexp(1.0, 60);
        double prev_x = lo_end, prev_f = e(lo_end);
        std::optional<std::pair<double, double>> bracket;
        for (int k = 1; k <= 240 && !bracket; ++k) {
            const double x = std::min(hi_end, lo_end * std::ldexp(1.0, k));
            const double f = e(x);
            if ((prev_f < 0.0 && f >= 0.0) || (prev_f > 0.0 && f <= 0.0)) bracket = {prev_x, x};
            prev_x = x;
            prev_f = f;
            if (x >= hi_end) break;
        }
        if (!bracket) return std::nullopt;
        RootProblem problem;
        problem.residual = [&e](double x) { return e(x); };
        problem.derivative = [&e](double x) { return e.derivative(x); };
        problem.lo = bracket->first;
        problem.hi = bracket->second;
        root = solve_transcendental(problem).root;
    }
    if (!(root > a && root < b)) return std::nullopt;
    if (near(root, a) || (std::isfinite(b) && near(root, b))) return std::nullopt;
    return root;
}

}  // namespace

BoundarySet extract_boundary(const BonusFunction& fb) {
    if (fb.pieces.size() != fb.breakpoints.size() + 1 || fb.kink_values.size() != fb.breakpoints.size()) {
        throw AnalysisError("malformed bonus function");
    }

    struct Candidate {
        double x;
        double value;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < fb.pieces.size(); ++i) {
        const double a = i == 0 ? 0.0 : fb.breakpoints[i - 1];
        const double b = i < fb.breakpoints.size() ? fb.breakpoints[i] : kInf;
        if (i > 0) candidates.push_back({a, fb.kink_values[i - 1]});
        if (auto root = interior_root(fb.pieces[i], a, b)) candidates.push_back({*root, 0.0});
    }

    auto positive_between = [&](double lo, double hi) {
        const double mid = std::isfinite(hi) ? 0.5 * (lo + hi) : std::max(2.0 * lo, lo + 1.0);
        return fb(mid) > 0.0;
    };

    std::vector<double> points;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const double x = candidates[k].x;
        const double left_end = k == 0 ? 0.0 : candidates[k - 1].x;
        const double right_end = k + 1 < candidates.size() ? candidates[k + 1].x : kInf;
        const bool left = positive_between(left_end, x);
        const bool right = positive_between(x, right_end);
        const bool here = candidates[k].value > 0.0;
        // x is in the closure of {f_b > 0} and of its complement.
        if ((left || right || here) && (!left || !right || !here)) points.push_back(x);
    }

    if (!points.empty()) {
        BoundarySet out;
        out.kind = fb.variable == StateVariable::Ratio ? BoundaryKind::PathRatio : BoundaryKind::SpotPoints;
        out.points = std::move(points);
        return out;
    }
    const double probe = candidates.empty() ? 1.0 : 0.5 * candidates.front().x;
    if (fb(probe) > 0.0) return BoundarySet::none("f_b > 0 on the whole domain: no boundary");
    return BoundarySet::none("f_b <= 0 everywhere: no exercise region");
}

BoundarySet vanilla_boundary(const MarketParams& params, OptionType type, double strike) {
    params.validate();
    if (!(strike > 0.0)) throw InvalidSpec("strike must be positive");
    const double r = params.r, q = params.q;
    if (type == OptionType::Call) {
        if (r == 0.0 && q == 0.0) return BoundarySet::none("r = q = 0: f_b vanishes identically, no exercise region");
        if (q == 0.0) return BoundarySet::none("q = 0: f_b = -rX < 0 above X, no exercise region");
        return BoundarySet::spot({max_ratio(strike, r * strike, q)});
    }
    if (r == 0.0) return BoundarySet::none("r = 0: f_b = -qS <= 0 below X, no exercise region");
    return BoundarySet::spot({min_ratio(strike, r * strike, q)});
}

CondorCase condor_case(const MarketParams& params, double x1, double x2, double x3, double x4) {
    (void)make_condor(x1, x2, x3, x4);
    const double tail = (x3 + x2) - (x1 + x4);
    if (tail <= 0.0) return CondorCase::TwoPoints;
    const double inner = params.r * (x3 + x2 - x1);
    return inner >= params.q * x4 * (1.0 - 4.0 * kEps) ? CondorCase::SinglePoint : CondorCase::ThreePoints;
}

BoundarySet condor_boundary(const MarketParams& params, double x1, double x2, double x3, double x4) {
    params.validate();
    if (params.r == 0.0) {
        throw InvalidSpec("condor closed form requires r > 0 (f_b vanishes on (X2, X3) when r = 0)");
    }
    const double r = params.r, q = params.q;
    const double first = std::min(max_ratio(x1, r * x1, q), x2);
    const double second = max_ratio(x3, r * (x3 + x2 - x1), q);
    switch (condor_case(params, x1, x2, x3, x4)) {
        case CondorCase::SinglePoint: return BoundarySet::spot({first});
        case CondorCase::ThreePoints: return BoundarySet::spot({first, second, x4});
        case CondorCase::TwoPoints: return BoundarySet::spot({first, std::min(second, x4)});
    }
    return {};
}

RootProblem average_ratio_problem(const MarketParams& params, const AveragingSpec& avg, double expiry) {
    params.validate();
    avg.validate();
    if (!(expiry > 0.0)) throw InvalidSpec("expiry must be positive");
    if (avg.is_extremum()) throw InvalidSpec("min/max averages have the closed-form ratio r/q");
    const double r = params.r, q = params.q, p = avg.p;
    const double w = average_weight(avg, expiry);
    RootProblem problem;
    problem.residual = [=](double y) { return r - q * y - w * power_log(y, p); };
    problem.derivative = [=](double y) { return -q - w * std::pow(y, p - 1.0); };
    return problem;
}

double average_ratio_root(const MarketParams& params, const AveragingSpec& avg, double expiry) {
    RootProblem problem = average_ratio_problem(params, avg, expiry);
    const Bracket bracket = bracket_decreasing(problem.residual);
    if (bracket.lo == bracket.hi) return bracket.lo;
    problem.lo = bracket.lo;
    problem.hi = bracket.hi;
    return solve_transcendental(problem).root;
}

BoundarySet asian_ratio_boundary(const MarketParams& params, const AveragingSpec& avg,
                                 OptionType type, double expiry) {
    params.validate();
    avg.validate();
    if (!(expiry > 0.0)) throw InvalidSpec("expiry must be positive");
    const bool call = type == OptionType::Call;
    const double r = params.r, q = params.q;

    if (avg.is_extremum()) {
        // Lookback: the running extremum has no drift, ratio r/q.
        if (call) {
            if (r == 0.0 && q == 0.0) return BoundarySet::none("r = q = 0: f_b vanishes identically");
            if (q == 0.0) return BoundarySet::none("q = 0: f_b = -rm < 0 above m, no exercise region");
            return BoundarySet::ratio(max_ratio(1.0, r, q));
        }
        if (r == 0.0) return BoundarySet::none("r = 0: f_b = -qS <= 0 below M, no exercise region");
        return BoundarySet::ratio(min_ratio(1.0, r, q));
    }
    if (avg.is_arithmetic()) {
        const double num = r + 1.0 / expiry, den = q + 1.0 / expiry;
        return BoundarySet::ratio(call ? max_ratio(1.0, num, den) : min_ratio(1.0, num, den));
    }
    const double root = average_ratio_root(params, avg, expiry);
    return BoundarySet::ratio(call ? std::max(1.0, root) : std::min(1.0, root));
}

BoundarySet shout_boundary(const MarketParams& params, double strike, OptionType type) {
    params.validate();
    if (!(strike > 0.0)) throw InvalidSpec("strike must be positive");
    (void)type;
    return BoundarySet::spot({strike});
}

BoundarySet british_boundary(const MarketParams& params, double mu_c, double strike, OptionType type) {
    params.validate();
    if (!(strike > 0.0)) throw InvalidSpec("strike must be positive");
    const double drift = params.q + mu_c;
    if (!(drift > 0.0)) {
        std::ostringstream msg;
        msg << "q + mu_c = " << drift << " <= 0: f_b keeps one sign on the in-the-money side, "
            << "the closed form max/min[X, rX/(q + mu_c)] does not apply";
        throw DegenerateDrift(msg.str());
    }
    const double r = params.r;
    if (type == OptionType::Call) return BoundarySet::spot({max_ratio(strike, r * strike, drift)});
    if (r == 0.0) return BoundarySet::none("r = 0: f_b <= 0 below X, no exercise region");
    return BoundarySet::spot({min_ratio(strike, r * strike, drift)});
}

BoundarySet catalogue_boundary(const DerivativeSpec& spec, const MarketParams& params) {
    spec.validate();
    const OptionType type = spec.option_type();
    switch (spec.kind) {
        case Kind::VanillaCall:
        case Kind::VanillaPut: return vanilla_boundary(params, type, spec.strike);
        case Kind::Strategy:
            if (is_condor(spec)) {
                const auto& l = spec.legs;
                return condor_boundary(params, l[0].strike, l[1].strike, l[2].strike, l[3].strike);
            }
            return extract_boundary(bonus_symbolic(spec, params));
        case Kind::AsianCall:
        case Kind::AsianPut: return asian_ratio_boundary(params, spec.avg, type, spec.expiry);
        case Kind::LookbackCall:
        case Kind::LookbackPut:
            return asian_ratio_boundary(params, type == OptionType::Call ? AveragingSpec::minimum()
                                                                         : AveragingSpec::maximum(),
                                        type, spec.expiry);
        case Kind::ShoutCall:
        case Kind::ShoutPut: return shout_boundary(params, spec.strike, type);
        case Kind::BritishCall:
        case Kind::BritishPut: return british_boundary(params, spec.mu_c, spec.strike, type);
    }
    throw NotImplemented("no catalogue entry for this kind");
}

}  // namespace eeb

#include "eeb/bonus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eeb/error.hpp"
#include "eeb/pricing.hpp"

namespace eeb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExpiryJet linear_jet(const LinearSegment& seg) {
    ExpiryJet jet;
    jet.value = AnalyticPiece::affine(seg.intercept, seg.slope);
    jet.d_spot = seg.slope;
    return jet;
}

// Limits of the named closed forms as t -> T away from the strike.
ExpiryJet named_jet(ClosedForm form, double strike, double mu_c, bool above_strike) {
    ExpiryJet jet;
    switch (form) {
        case ClosedForm::ShoutCall:
            if (above_strike) {
                // S - X + C_eu(t, S; S): the at-the-money reset value decays like
                // sqrt(T - t), so its time derivative diverges to -inf.
                jet.value = AnalyticPiece::affine(-strike, 1.0);
                jet.d_spot = 1.0;
                jet.d_time_minus_infinity = true;
            }
            break;
        case ClosedForm::ShoutPut:
            if (!above_strike) {
                jet.value = AnalyticPiece::affine(strike, -1.0);
                jet.d_spot = -1.0;
                jet.d_time_minus_infinity = true;
            }
            break;
        case ClosedForm::BritishCall:
            if (above_strike) {
                // e^{mu_c (T-t)} S - X + o(1)
                jet.value = AnalyticPiece::affine(-strike, 1.0);
                jet.d_spot = 1.0;
                jet.d_time = AnalyticPiece::affine(0.0, -mu_c);
            }
            break;
        case ClosedForm::BritishPut:
            if (!above_strike) {
                jet.value = AnalyticPiece::affine(strike, -1.0);
                jet.d_spot = -1.0;
                jet.d_time = AnalyticPiece::affine(0.0, mu_c);
            }
            break;
    }
    return jet;
}

}  // namespace

double BonusPiece::operator()(double x) const noexcept { return plus_infinity ? kInf : expr(x); }

std::size_t BonusFunction::piece_index(double x) const noexcept {
    return static_cast<std::size_t>(
        std::upper_bound(breakpoints.begin(), breakpoints.end(), x) - breakpoints.begin());
}

double BonusFunction::operator()(double x) const {
    if (!(x > 0.0)) throw OutOfRange("bonus function is defined on x > 0");
    const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
    if (it != breakpoints.end() && *it == x) {
        return kink_values[static_cast<std::size_t>(it - breakpoints.begin())];
    }
    return pieces[piece_index(x)](x);
}

double BonusFunction::left_limit(std::size_t kink) const { return pieces.at(kink)(breakpoints.at(kink)); }

double BonusFunction::right_limit(std::size_t kink) const {
    return pieces.at(kink + 1)(breakpoints.at(kink));
}

double kink_average(double left, double right) noexcept {
    if (left == kInf || right == kInf) return kInf;
    return 0.5 * (left + right);
}

double average_weight(const AveragingSpec& avg, double t) {
    if (!(t > 0.0)) throw SingularTime("average drift is singular at t = " + std::to_string(t));
    if (avg.lambda == 0.0) return 1.0 / t;
    return avg.lambda / -std::expm1(-avg.lambda * t);
}

double average_drift(const AveragingSpec& avg, double t, double spot, double path) {
    if (!(t > 0.0)) throw SingularTime("average drift is singular at t = " + std::to_string(t));
    if (!(spot > 0.0) || !(path > 0.0)) throw OutOfRange("spot and path statistic must be positive");
    if (avg.is_extremum()) return 0.0;
    if (avg.is_arithmetic()) return (spot - path) / t;
    if (avg.is_geometric()) return -(1.0 / t) * path * std::log(path / spot);
    return path * average_weight(avg, t) * power_log(spot / path, avg.p);
}

AnalyticPiece average_drift_piece(const AveragingSpec& avg, double t) {
    if (!(t > 0.0)) throw SingularTime("average drift is singular at t = " + std::to_string(t));
    if (avg.is_extremum()) return {};
    const double w = average_weight(avg, t);
    if (avg.p == 1.0) return AnalyticPiece::affine(-w, w);
    if (avg.p == 0.0) return AnalyticPiece::logarithm(w);
    return AnalyticPiece::box_cox(w, avg.p);
}

ExpiryExpansion expiry_expansion(const DerivativeSpec& spec) {
    spec.validate();
    ExpiryExpansion out;
    if (spec.path_dependent()) {
        // Omega = (S - A)^+ or (A - S)^+, kinked at x = S/A = 1.
        out.variable = StateVariable::Ratio;
        out.breakpoints = {1.0};
        ExpiryJet flat;
        ExpiryJet itm;
        const bool call = spec.option_type() == OptionType::Call;
        itm.value = call ? AnalyticPiece::affine(-1.0, 1.0) : AnalyticPiece::affine(1.0, -1.0);
        itm.d_spot = call ? 1.0 : -1.0;
        itm.d_path = call ? -1.0 : 1.0;
        out.jets = call ? std::vector{flat, itm} : std::vector{itm, flat};
        return out;
    }

    const PiecewisePayoff payoff = build_payoff(spec);
    out.breakpoints = payoff.breakpoints;
    out.jets.reserve(payoff.segments.size());
    for (std::size_t i = 0; i < payoff.segments.size(); ++i) {
        const PayoffSegment& seg = payoff.segments[i];
        if (const auto* lin = std::get_if<LinearSegment>(&seg)) {
            out.jets.push_back(linear_jet(*lin));
        } else {
            // Named pieces only appear in single-strike payoffs: segment 1 is above X.
            out.jets.push_back(named_jet(std::get<NamedSegment>(seg).form, spec.strike, spec.mu_c, i > 0));
        }
    }
    return out;
}

BonusPiece apply_bonus_operator(const ExpiryJet& jet, const MarketParams& params,
                                const AnalyticPiece& path_drift) {
    BonusPiece out;
    if (jet.d_time_minus_infinity) {
        out.plus_infinity = true;
        return out;
    }
    // f_d = d/dt(Omega/N) + mu_S d/dS(Omega/N) + mu_A d/dA(Omega/N) + 1/2 sigma^2 S^2 d2/dS2(Omega/N)
    // and f_b = -N f_d with N = e^{rt}, so the -r Omega of d/dt(Omega/N) flips to +r Omega.
    AnalyticPiece fb = params.r * jet.value;
    fb = fb - jet.d_time;
    fb = fb - times_x(AnalyticPiece::constant((params.r - params.q) * jet.d_spot));
    if (jet.d_path != 0.0) fb = fb - jet.d_path * path_drift;
    if (jet.d_spot2 != 0.0) {
        fb = fb - AnalyticPiece{0.0, 0.0, 0.5 * params.sigma * params.sigma * jet.d_spot2};
    }
    out.expr = fb;
    return out;
}

BonusFunction bonus_symbolic(const DerivativeSpec& spec, const MarketParams& params) {
    params.validate();
    const ExpiryExpansion expansion = expiry_expansion(spec);

    AnalyticPiece path_drift;
    if (spec.path_dependent()) path_drift = average_drift_piece(spec.avg, spec.expiry);

    BonusFunction fb;
    fb.variable = expansion.variable;
    fb.breakpoints = expansion.breakpoints;
    fb.pieces.reserve(expansion.jets.size());
    for (const ExpiryJet& jet : expansion.jets) {
        fb.pieces.push_back(apply_bonus_operator(jet, params, path_drift));
    }
    fb.kink_values.reserve(fb.breakpoints.size());
    for (std::size_t k = 0; k < fb.breakpoints.size(); ++k) {
        fb.kink_values.push_back(kink_average(fb.left_limit(k), fb.right_limit(k)));
    }
    return fb;
}

bool in_kink_band(const DerivativeSpec& spec, const MarketParams& params, double spot,
                  const OracleOptions& options) {
    if (options.dt_ladder.empty()) throw InvalidSpec("oracle needs a non-empty dt ladder");
    const double dt_max = *std::max_element(options.dt_ladder.begin(), options.dt_ladder.end());
    const double band = options.band_sigmas * params.sigma * std::sqrt(dt_max);
    for (double b : build_payoff(spec).breakpoints) {
        if (std::abs(std::log(spot / b)) < band) return true;
    }
    return false;
}

double bonus_numeric_oracle(const DerivativeSpec& spec, const MarketParams& params, double spot,
                            const OracleOptions& options) {
    params.validate();
    if (!spec.has_european_closed_form()) {
        throw Unsupported("numeric bonus oracle needs a closed-form European price; " +
                          std::string(kind_name(spec.kind)) + " has none");
    }
    if (options.dt_ladder.size() < 2) throw InvalidSpec("oracle needs at least two dt values");
    if (in_kink_band(spec, params, spot, options)) {
        throw OutOfRange("spot " + std::to_string(spot) +
                         " lies in a kink-exclusion band; one-sided limits differ there");
    }

    const double T = spec.expiry;
    const State state{spot};
    auto gap = [&](double t) {
        return european_price(spec, params, t, spot) - payoff_eval(spec, params, t, state);
    };
    // Central difference of V_eu - Omega centred at T - dt with half-width dt/4.
    auto slope_at = [&](double dt) {
        if (!(dt > 0.0) || dt >= T) throw InvalidSpec("dt ladder entries must lie in (0, T)");
        const double h = 0.25 * dt;
        const double t = T - dt;
        return (gap(t + h) - gap(t - h)) / (2.0 * h);
    };

    std::vector<double> ladder = options.dt_ladder;
    std::sort(ladder.begin(), ladder.end());
    const double small = ladder[0], next = ladder[1];
    const double g_small = slope_at(small), g_next = slope_at(next);
    // One Richardson step: linear extrapolation of the two finest slopes to dt = 0.
    return (next * g_small - small * g_next) / (next - small);
}

}  // namespace eeb

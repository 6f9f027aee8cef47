#include "eeb/market.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>

#include "eeb/error.hpp"
#include "eeb/pricing.hpp"

namespace eeb {

namespace {

constexpr std::array kKinds{
    Kind::VanillaCall, Kind::VanillaPut,   Kind::Strategy,  Kind::AsianCall,
    Kind::AsianPut,    Kind::LookbackCall, Kind::LookbackPut, Kind::ShoutCall,
    Kind::ShoutPut,    Kind::BritishCall,  Kind::BritishPut,
};

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidSpec(std::string(what) + " must be positive and finite, got " +
                          std::to_string(value));
    }
}

}  // namespace

void MarketParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidSpec("sigma must be positive, got " + std::to_string(sigma));
    }
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw InvalidSpec("r must be non-negative, got " + std::to_string(r));
    }
    if (!(q >= 0.0) || !std::isfinite(q)) {
        throw InvalidSpec("q must be non-negative, got " + std::to_string(q));
    }
}

void AveragingSpec::validate() const {
    if (std::isnan(p)) throw InvalidSpec("averaging power p is NaN");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidSpec("averaging weight lambda must be >= 0, got " + std::to_string(lambda));
    }
}

std::string_view kind_name(Kind kind) noexcept {
    switch (kind) {
        case Kind::VanillaCall: return "vanilla_call";
        case Kind::VanillaPut: return "vanilla_put";
        case Kind::Strategy: return "strategy";
        case Kind::AsianCall: return "asian_call";
        case Kind::AsianPut: return "asian_put";
        case Kind::LookbackCall: return "lookback_call";
        case Kind::LookbackPut: return "lookback_put";
        case Kind::ShoutCall: return "shout_call";
        case Kind::ShoutPut: return "shout_put";
        case Kind::BritishCall: return "british_call";
        case Kind::BritishPut: return "british_put";
    }
    return "unknown";
}

std::optional<Kind> parse_kind(std::string_view name) noexcept {
    for (Kind k : kKinds) {
        if (kind_name(k) == name) return k;
    }
    return std::nullopt;
}

std::span<const Kind> all_kinds() noexcept { return kKinds; }

bool DerivativeSpec::path_dependent() const noexcept {
    switch (kind) {
        case Kind::AsianCall:
        case Kind::AsianPut:
        case Kind::LookbackCall:
        case Kind::LookbackPut: return true;
        default: return false;
    }
}

bool DerivativeSpec::has_european_closed_form() const noexcept {
    switch (kind) {
        case Kind::VanillaCall:
        case Kind::VanillaPut:
        case Kind::Strategy:
        case Kind::BritishCall:
        case Kind::BritishPut: return true;
        default: return false;
    }
}

OptionType DerivativeSpec::option_type() const noexcept {
    switch (kind) {
        case Kind::VanillaPut:
        case Kind::AsianPut:
        case Kind::LookbackPut:
        case Kind::ShoutPut:
        case Kind::BritishPut: return OptionType::Put;
        default: return OptionType::Call;
    }
}

void DerivativeSpec::validate() const {
    require_positive(expiry, "expiry T");
    switch (kind) {
        case Kind::Strategy: {
            if (legs.empty()) throw InvalidSpec("strategy needs at least one leg");
            for (std::size_t i = 0; i < legs.size(); ++i) {
                require_positive(legs[i].strike, "leg strike");
                if (!std::isfinite(legs[i].weight)) throw InvalidSpec("leg weight must be finite");
                if (i > 0 && legs[i].strike < legs[i - 1].strike) {
                    throw InvalidSpec("strategy legs must be sorted by strike");
                }
            }
            break;
        }
        case Kind::AsianCall:
        case Kind::AsianPut: avg.validate(); break;
        case Kind::LookbackCall:
        case Kind::LookbackPut: break;
        case Kind::BritishCall:
        case Kind::BritishPut:
            if (!std::isfinite(mu_c)) throw InvalidSpec("contract drift mu_c must be finite");
            require_positive(strike, "strike X");
            break;
        default: require_positive(strike, "strike X"); break;
    }
}

DerivativeSpec make_vanilla(OptionType type, double strike, double expiry) {
    DerivativeSpec s;
    s.kind = type == OptionType::Call ? Kind::VanillaCall : Kind::VanillaPut;
    s.strike = strike;
    s.expiry = expiry;
    s.validate();
    return s;
}

DerivativeSpec make_strategy(std::vector<Leg> legs, double expiry) {
    DerivativeSpec s;
    s.kind = Kind::Strategy;
    s.legs = std::move(legs);
    s.expiry = expiry;
    s.validate();
    return s;
}

DerivativeSpec make_condor(double x1, double x2, double x3, double x4, double expiry) {
    if (!(x1 > 0.0 && x1 < x2 && x2 <= x3 && x3 < x4) || !std::isfinite(x4)) {
        throw InvalidSpec("condor strikes must satisfy 0 < X1 < X2 <= X3 < X4");
    }
    return make_strategy({{1.0, x1}, {-1.0, x2}, {-1.0, x3}, {1.0, x4}}, expiry);
}

DerivativeSpec make_asian(OptionType type, AveragingSpec avg, double expiry) {
    DerivativeSpec s;
    s.kind = type == OptionType::Call ? Kind::AsianCall : Kind::AsianPut;
    s.avg = avg;
    s.expiry = expiry;
    s.validate();
    return s;
}

DerivativeSpec make_lookback(OptionType type, double expiry) {
    DerivativeSpec s;
    s.kind = type == OptionType::Call ? Kind::LookbackCall : Kind::LookbackPut;
    s.avg = type == OptionType::Call ? AveragingSpec::minimum() : AveragingSpec::maximum();
    s.expiry = expiry;
    s.validate();
    return s;
}

DerivativeSpec make_shout(OptionType type, double strike, double expiry) {
    DerivativeSpec s;
    s.kind = type == OptionType::Call ? Kind::ShoutCall : Kind::ShoutPut;
    s.strike = strike;
    s.expiry = expiry;
    s.validate();
    return s;
}

DerivativeSpec make_british(OptionType type, double mu_c, double strike, double expiry) {
    DerivativeSpec s;
    s.kind = type == OptionType::Call ? Kind::BritishCall : Kind::BritishPut;
    s.mu_c = mu_c;
    s.strike = strike;
    s.expiry = expiry;
    s.validate();
    return s;
}

bool is_condor(const DerivativeSpec& spec) noexcept {
    if (spec.kind != Kind::Strategy || spec.legs.size() != 4) return false;
    const auto& l = spec.legs;
    return l[0].weight == 1.0 && l[1].weight == -1.0 && l[2].weight == -1.0 &&
           l[3].weight == 1.0 && l[0].strike < l[1].strike && l[1].strike <= l[2].strike &&
           l[2].strike < l[3].strike;
}

std::size_t PiecewisePayoff::segment_index(double spot) const noexcept {
    // Breakpoints belong to the right-hand segment.
    return static_cast<std::size_t>(
        std::upper_bound(breakpoints.begin(), breakpoints.end(), spot) - breakpoints.begin());
}

PiecewisePayoff build_payoff(const DerivativeSpec& spec) {
    spec.validate();
    PiecewisePayoff out;
    const double x = spec.strike;
    switch (spec.kind) {
        case Kind::VanillaCall:
            out.breakpoints = {x};
            out.segments = {LinearSegment{0.0, 0.0}, LinearSegment{1.0, -x}};
            break;
        case Kind::VanillaPut:
            out.breakpoints = {x};
            out.segments = {LinearSegment{-1.0, x}, LinearSegment{0.0, 0.0}};
            break;
        case Kind::Strategy: {
            // Legs with equal strikes share one breakpoint (butterfly X2 == X3).
            std::map<double, double> weight_at;
            for (const Leg& leg : spec.legs) weight_at[leg.strike] += leg.weight;
            double slope = 0.0, intercept = 0.0;
            out.segments.push_back(LinearSegment{0.0, 0.0});
            for (const auto& [strike, weight] : weight_at) {
                out.breakpoints.push_back(strike);
                slope += weight;
                intercept -= weight * strike;
                out.segments.push_back(LinearSegment{slope, intercept});
            }
            break;
        }
        case Kind::ShoutCall:
            out.breakpoints = {x};
            out.segments = {LinearSegment{0.0, 0.0}, NamedSegment{ClosedForm::ShoutCall}};
            out.time_dependent = true;
            break;
        case Kind::ShoutPut:
            out.breakpoints = {x};
            out.segments = {NamedSegment{ClosedForm::ShoutPut}, LinearSegment{0.0, 0.0}};
            out.time_dependent = true;
            break;
        case Kind::BritishCall:
            // One smooth formula for t < T; the breakpoint marks its expiry kink.
            out.breakpoints = {x};
            out.segments = {NamedSegment{ClosedForm::BritishCall},
                            NamedSegment{ClosedForm::BritishCall}};
            out.time_dependent = true;
            break;
        case Kind::BritishPut:
            out.breakpoints = {x};
            out.segments = {NamedSegment{ClosedForm::BritishPut},
                            NamedSegment{ClosedForm::BritishPut}};
            out.time_dependent = true;
            break;
        default:
            throw Unsupported("no spot-only payoff for path-dependent kind " +
                              std::string(kind_name(spec.kind)));
    }
    return out;
}

namespace {

double named_value(ClosedForm form, const DerivativeSpec& spec, const MarketParams& params,
                   double t, double spot) {
    const double x = spec.strike;
    const bool at_expiry = t >= spec.expiry;
    switch (form) {
        case ClosedForm::ShoutCall: {
            if (spot <= x) return 0.0;
            const double reset = at_expiry ? 0.0 : bs_call(params, t, spot, spot, spec.expiry).price;
            return spot - x + reset;
        }
        case ClosedForm::ShoutPut: {
            if (spot >= x) return 0.0;
            const double reset = at_expiry ? 0.0 : bs_put(params, t, spot, spot, spec.expiry).price;
            return x - spot + reset;
        }
        case ClosedForm::BritishCall:
            return british_payoff(params, spec.mu_c, t, spot, x, spec.expiry, OptionType::Call);
        case ClosedForm::BritishPut:
            return british_payoff(params, spec.mu_c, t, spot, x, spec.expiry, OptionType::Put);
    }
    return 0.0;
}

}  // namespace

double payoff_eval(const DerivativeSpec& spec, const MarketParams& params, double t,
                   const State& state) {
    if (t > spec.expiry) {
        throw OutOfRange("payoff requested at t = " + std::to_string(t) + " beyond expiry " +
                         std::to_string(spec.expiry));
    }
    if (!(state.spot > 0.0)) throw OutOfRange("spot must be positive");

    if (spec.path_dependent()) {
        if (!(state.path > 0.0)) throw OutOfRange("path statistic must be positive");
        const bool call = spec.option_type() == OptionType::Call;
        return call ? std::max(state.spot - state.path, 0.0)
                    : std::max(state.path - state.spot, 0.0);
    }

    if (spec.kind == Kind::Strategy) {
        double total = 0.0;
        for (const Leg& leg : spec.legs) total += leg.weight * std::max(state.spot - leg.strike, 0.0);
        return total;
    }
    const PiecewisePayoff payoff = build_payoff(spec);
    const PayoffSegment& seg = payoff.segments[payoff.segment_index(state.spot)];
    if (const auto* lin = std::get_if<LinearSegment>(&seg)) return (*lin)(state.spot);
    return named_value(std::get<NamedSegment>(seg).form, spec, params, t, state.spot);
}

}  // namespace eeb

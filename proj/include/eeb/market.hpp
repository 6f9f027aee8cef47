#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace eeb {

/// Risk-neutral market: continuous rate r, dividend yield q, volatility sigma.
/// The spot follows dS = (r - q) S dt + sigma S dW.
struct MarketParams {
    double r = 0.0;
    double q = 0.0;
    double sigma = 0.2;

    void validate() const;
    double spot_drift(double spot) const noexcept { return (r - q) * spot; }

    friend bool operator==(const MarketParams&, const MarketParams&) = default;
};

enum class OptionType { Call, Put };

/// Exponentially weighted power average
///   A_t^p = lambda / (1 - e^{-lambda t}) * int_0^t e^{-lambda (t-u)} S_u^p du.
/// p = 0 is the geometric limit, p = -inf / +inf the running minimum / maximum,
/// lambda = 0 the unweighted limit 1/t * int_0^t.
struct AveragingSpec {
    double p = 1.0;
    double lambda = 0.0;

    static AveragingSpec arithmetic() { return {1.0, 0.0}; }
    static AveragingSpec geometric() { return {0.0, 0.0}; }
    static AveragingSpec minimum() { return {-std::numeric_limits<double>::infinity(), 0.0}; }
    static AveragingSpec maximum() { return {std::numeric_limits<double>::infinity(), 0.0}; }
    static AveragingSpec weighted(double p, double lambda) { return {p, lambda}; }

    bool is_extremum() const noexcept { return std::isinf(p); }
    bool is_arithmetic() const noexcept { return p == 1.0 && lambda == 0.0; }
    bool is_geometric() const noexcept { return p == 0.0 && lambda == 0.0; }

    void validate() const;

    friend bool operator==(const AveragingSpec&, const AveragingSpec&) = default;
};

/// One call leg of a strategy: weight * (S - strike)^+.
struct Leg {
    double weight = 1.0;
    double strike = 1.0;

    friend bool operator==(const Leg&, const Leg&) = default;
};

enum class Kind {
    VanillaCall,
    VanillaPut,
    Strategy,
    AsianCall,
    AsianPut,
    LookbackCall,
    LookbackPut,
    ShoutCall,
    ShoutPut,
    BritishCall,
    BritishPut,
};

std::string_view kind_name(Kind kind) noexcept;
std::optional<Kind> parse_kind(std::string_view name) noexcept;
std::span<const Kind> all_kinds() noexcept;

struct DerivativeSpec {
    Kind kind = Kind::VanillaCall;
    double strike = 1.0;    // unused by Strategy, Asian and lookback kinds
    double expiry = 1.0;
    std::vector<Leg> legs;  // Strategy only, sorted by strike
    AveragingSpec avg;      // Asian only
    double mu_c = 0.0;      // British only

    void validate() const;

    bool path_dependent() const noexcept;
    /// True for the kinds with a closed-form European counterpart in pricing.hpp.
    bool has_european_closed_form() const noexcept;
    OptionType option_type() const noexcept;

    friend bool operator==(const DerivativeSpec&, const DerivativeSpec&) = default;
};

DerivativeSpec make_vanilla(OptionType type, double strike, double expiry = 1.0);
DerivativeSpec make_strategy(std::vector<Leg> legs, double expiry = 1.0);
/// Long X1 and X4 calls, short X2 and X3 calls. Requires X1 < X2 <= X3 < X4;
/// X2 == X3 is the butterfly.
DerivativeSpec make_condor(double x1, double x2, double x3, double x4, double expiry = 1.0);
DerivativeSpec make_asian(OptionType type, AveragingSpec avg, double expiry = 1.0);
DerivativeSpec make_lookback(OptionType type, double expiry = 1.0);
DerivativeSpec make_shout(OptionType type, double strike, double expiry = 1.0);
DerivativeSpec make_british(OptionType type, double mu_c, double strike, double expiry = 1.0);

/// True when the legs are (+1, -1, -1, +1) with X1 < X2 <= X3 < X4.
bool is_condor(const DerivativeSpec& spec) noexcept;

/// Spot plus, for path-dependent kinds, the running average / minimum / maximum.
struct State {
    double spot = 1.0;
    double path = std::numeric_limits<double>::quiet_NaN();
};

// ---------------------------------------------------------------------------
// Piecewise payoff representation for spot-only derivatives.

struct LinearSegment {
    double slope = 0.0;
    double intercept = 0.0;

    double operator()(double spot) const noexcept { return intercept + slope * spot; }
    friend bool operator==(const LinearSegment&, const LinearSegment&) = default;
};

/// Closed-form segments whose value depends on time to expiry. Evaluated on demand.
enum class ClosedForm { ShoutCall, ShoutPut, BritishCall, BritishPut };

struct NamedSegment {
    ClosedForm form;
    friend bool operator==(const NamedSegment&, const NamedSegment&) = default;
};

using PayoffSegment = std::variant<LinearSegment, NamedSegment>;

/// Omega(t, S) on (0, inf) split at strictly increasing breakpoints.
/// segments[i] covers (breakpoints[i-1], breakpoints[i]).
struct PiecewisePayoff {
    std::vector<double> breakpoints;
    std::vector<PayoffSegment> segments;
    bool time_dependent = false;

    std::size_t segment_index(double spot) const noexcept;
};

PiecewisePayoff build_payoff(const DerivativeSpec& spec);

/// Omega(t, state). Shout and British payoffs embed European closed forms and
/// therefore need the market.
double payoff_eval(const DerivativeSpec& spec, const MarketParams& params, double t,
                   const State& state);

}  // namespace eeb

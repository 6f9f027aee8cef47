#include "eeb/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eeb/error.hpp"

namespace eeb {

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

namespace {

double time_to_expiry(double t, double expiry) {
    const double tau = expiry - t;
    if (!(tau > 0.0)) {
        throw OutOfRange("European price requested at t = " + std::to_string(t) +
                         " >= T = " + std::to_string(expiry) + "; use the payoff");
    }
    return tau;
}

void check_state(double spot, double strike) {
    if (!(spot > 0.0)) throw OutOfRange("spot must be positive");
    if (!(strike > 0.0)) throw OutOfRange("strike must be positive");
}

}  // namespace

BsQuote bs_call(const MarketParams& params, double t, double spot, double strike, double expiry) {
    check_state(spot, strike);
    const double tau = time_to_expiry(t, expiry);
    const double vol = params.sigma * std::sqrt(tau);
    BsQuote out;
    out.d1 = (std::log(spot / strike) + (params.r - params.q + 0.5 * params.sigma * params.sigma) * tau) / vol;
    out.d2 = out.d1 - vol;
    out.price = std::exp(-params.q * tau) * spot * normal_cdf(out.d1) -
                std::exp(-params.r * tau) * strike * normal_cdf(out.d2);
    out.price = std::max(out.price, 0.0);
    return out;
}

BsQuote bs_put(const MarketParams& params, double t, double spot, double strike, double expiry) {
    check_state(spot, strike);
    const double tau = time_to_expiry(t, expiry);
    const double vol = params.sigma * std::sqrt(tau);
    BsQuote out;
    out.d1 = (std::log(spot / strike) + (params.r - params.q + 0.5 * params.sigma * params.sigma) * tau) / vol;
    out.d2 = out.d1 - vol;
    out.price = std::exp(-params.r * tau) * strike * normal_cdf(-out.d2) -
                std::exp(-params.q * tau) * spot * normal_cdf(-out.d1);
    out.price = std::max(out.price, 0.0);
    return out;
}

BsQuote bs_price(OptionType type, const MarketParams& params, double t, double spot,
                 double strike, double expiry) {
    return type == OptionType::Call ? bs_call(params, t, spot, strike, expiry)
                                    : bs_put(params, t, spot, strike, expiry);
}

double strategy_price(const MarketParams& params, double t, double spot,
                      std::span<const Leg> legs, double expiry) {
    if (legs.empty()) throw InvalidSpec("strategy needs at least one leg");
    double total = 0.0;
    for (const Leg& leg : legs) {
        if (leg.weight == 0.0) continue;
        total += leg.weight * bs_call(params, t, spot, leg.strike, expiry).price;
    }
    return total;
}

double british_payoff(const MarketParams& params, double mu_c, double t, double spot,
                      double strike, double expiry, OptionType type) {
    check_state(spot, strike);
    if (t > expiry) throw OutOfRange("British payoff requested beyond expiry");
    const bool call = type == OptionType::Call;
    if (t == expiry) return call ? std::max(spot - strike, 0.0) : std::max(strike - spot, 0.0);

    const double tau = expiry - t;
    const double vol = params.sigma * std::sqrt(tau);
    const double d = (std::log(spot / strike) + (mu_c + 0.5 * params.sigma * params.sigma) * tau) / vol;
    const double grown = std::exp(mu_c * tau) * spot;
    if (call) return grown * normal_cdf(d) - strike * normal_cdf(d - vol);
    return strike * normal_cdf(-d + vol) - grown * normal_cdf(-d);
}

double european_price(const DerivativeSpec& spec, const MarketParams& params, double t,
                      double spot) {
    switch (spec.kind) {
        case Kind::VanillaCall:
        case Kind::BritishCall: return bs_call(params, t, spot, spec.strike, spec.expiry).price;
        case Kind::VanillaPut:
        case Kind::BritishPut: return bs_put(params, t, spot, spec.strike, spec.expiry).price;
        case Kind::Strategy: return strategy_price(params, t, spot, spec.legs, spec.expiry);
        default:
            throw Unsupported("no closed-form European price for " +
                              std::string(kind_name(spec.kind)));
    }
}

}  // namespace eeb

#pragma once

#include <span>

#include "eeb/market.hpp"

namespace eeb {

/// Black-Scholes-Merton quote. d2 = d1 - sigma * sqrt(T - t).
struct BsQuote {
    double price = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Standard normal CDF, 0.5 * erfc(-x / sqrt 2).
double normal_cdf(double x) noexcept;
double normal_pdf(double x) noexcept;

// All European prices refuse t >= T; use payoff_eval at expiry.

BsQuote bs_call(const MarketParams& params, double t, double spot, double strike, double expiry);
BsQuote bs_put(const MarketParams& params, double t, double spot, double strike, double expiry);
BsQuote bs_price(OptionType type, const MarketParams& params, double t, double spot,
                 double strike, double expiry);

/// Weighted sum of European calls over the legs.
double strategy_price(const MarketParams& params, double t, double spot,
                      std::span<const Leg> legs, double expiry);

/// British payoff with contract drift mu_c (undiscounted, drift mu_c):
///   call: e^{mu_c tau} S Phi(d) - X Phi(d - sigma sqrt tau)
///   put:  X Phi(-d + sigma sqrt tau) - e^{mu_c tau} S Phi(-d)
/// with d = (ln(S/X) + (mu_c + sigma^2/2) tau) / (sigma sqrt tau). At t = T the
/// vanilla payoff is returned.
double british_payoff(const MarketParams& params, double mu_c, double t, double spot,
                      double strike, double expiry, OptionType type);

/// European price of any derivative with a closed form (vanilla, strategy, and
/// for British kinds the vanilla European with the same terminal payoff).
double european_price(const DerivativeSpec& spec, const MarketParams& params, double t,
                      double spot);

}  // namespace eeb

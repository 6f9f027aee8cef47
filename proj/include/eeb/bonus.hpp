#pragma once

#include <span>
#include <vector>

#include "eeb/analytic_piece.hpp"
#include "eeb/market.hpp"

namespace eeb {

/// What the bonus function is a function of. Path-dependent payoffs are
/// homogeneous of degree one in (S, A), so their bonus is tabulated in the
/// ratio x = S/A (or S/m, S/M) at A = 1: f_b(T, S, A) = A * f(S/A).
enum class StateVariable { Spot, Ratio };

/// One piece of f_b(T, .). Shout payoffs produce +inf; the flag keeps that
/// value out of the analytic algebra.
struct BonusPiece {
    AnalyticPiece expr;
    bool plus_infinity = false;

    double operator()(double x) const noexcept;
};

/// f_b(T, .) on (0, inf). pieces[i] covers (breakpoints[i-1], breakpoints[i]);
/// kink_values[i] is the value assigned at breakpoints[i].
struct BonusFunction {
    StateVariable variable = StateVariable::Spot;
    std::vector<double> breakpoints;
    std::vector<BonusPiece> pieces;
    std::vector<double> kink_values;

    std::size_t piece_index(double x) const noexcept;
    /// Kink value on an exact breakpoint, the covering piece elsewhere.
    double operator()(double x) const;
    double left_limit(std::size_t kink) const;
    double right_limit(std::size_t kink) const;
};

/// 1/2 (left + right); +inf absorbs any finite partner.
double kink_average(double left, double right) noexcept;

// ---------------------------------------------------------------------------
// Path statistics

/// lambda / (1 - e^{-lambda t}), tending to 1/t as lambda -> 0.
double average_weight(const AveragingSpec& avg, double t);

/// Drift mu_A of the running statistic A:
///   geometric  -(1/t) A ln(A/S)
///   arithmetic (1/t) (S - A)
///   min / max  0
///   weighted   A lambda / (p (1 - e^{-lambda t})) ((S/A)^p - 1)
/// Throws SingularTime for t <= 0.
double average_drift(const AveragingSpec& avg, double t, double spot, double path);

/// mu_A at A = 1 as a piece in x = S/A.
AnalyticPiece average_drift_piece(const AveragingSpec& avg, double t);

// ---------------------------------------------------------------------------
// Symbolic route

/// Local expansion of a payoff segment as t -> T: the inputs of the pricing
/// generator. Derivatives are constants on every catalogue segment except the
/// time derivative, which may be an affine piece or -inf (shout reset value).
struct ExpiryJet {
    AnalyticPiece value;
    double d_spot = 0.0;
    double d_path = 0.0;
    double d_spot2 = 0.0;
    AnalyticPiece d_time;
    bool d_time_minus_infinity = false;
};

struct ExpiryExpansion {
    StateVariable variable = StateVariable::Spot;
    std::vector<double> breakpoints;
    std::vector<ExpiryJet> jets;
};

ExpiryExpansion expiry_expansion(const DerivativeSpec& spec);

/// f_b = -N f_d with numeraire N = e^{rt}:
///   f_b = r Omega - dOmega/dt - mu_S dOmega/dS - mu_A dOmega/dA - 1/2 sigma^2 S^2 d2Omega/dS2
BonusPiece apply_bonus_operator(const ExpiryJet& jet, const MarketParams& params,
                                const AnalyticPiece& path_drift);

/// f_b(T, .) from the payoff's expiry expansion, with kink values set to the
/// mean of the one-sided limits.
BonusFunction bonus_symbolic(const DerivativeSpec& spec, const MarketParams& params);

// ---------------------------------------------------------------------------
// Numeric route: f_b(T, S) = lim_{t -> T} d/dt (V_eu(t, S) - Omega(t, S))

struct OracleOptions {
    std::vector<double> dt_ladder{1e-4, 5e-5, 2.5e-5};
    /// States closer than band_sigmas * sigma * sqrt(max dt) (in log-spot) to
    /// a payoff kink are refused.
    double band_sigmas = 5.0;
};

bool in_kink_band(const DerivativeSpec& spec, const MarketParams& params, double spot,
                  const OracleOptions& options = {});

double bonus_numeric_oracle(const DerivativeSpec& spec, const MarketParams& params, double spot,
                            const OracleOptions& options = {});

}  // namespace eeb

#pragma once

#include <optional>

namespace eeb {

/// Box-Cox power log E_p(x) = (x^p - 1) / p, with E_0(x) = ln x. Accurate for
/// tiny |p| (evaluated through expm1).
double power_log(double x, double p) noexcept;

/// Closed-form expression in one positive state variable x:
///
///   c0 + c1 x + c2 x^2 + c_log ln x + c_pow E_p(x)
///
/// Closed under addition and scaling as long as the E_p terms share p. This is
/// enough to represent every bonus-function piece in the catalogue: affine for
/// vanilla and strategies, plus ln x (geometric) or E_p (weighted) for averages.
struct AnalyticPiece {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c_log = 0.0;
    double c_pow = 0.0;
    double power = 1.0;

    static AnalyticPiece constant(double c) { return {c}; }
    static AnalyticPiece affine(double c0, double c1) { return {c0, c1}; }
    static AnalyticPiece logarithm(double coef) { return {0.0, 0.0, 0.0, coef}; }
    static AnalyticPiece box_cox(double coef, double p) { return {0.0, 0.0, 0.0, 0.0, coef, p}; }

    double operator()(double x) const noexcept;
    double derivative(double x) const noexcept;

    bool is_affine() const noexcept { return c2 == 0.0 && c_log == 0.0 && c_pow == 0.0; }
    bool is_zero() const noexcept { return c0 == 0.0 && c1 == 0.0 && is_affine(); }

    /// +1 / -1 when every term is monotone in the same direction on x > 0,
    /// 0 for constants, nullopt when the terms disagree.
    std::optional<int> monotone_direction() const noexcept;

    AnalyticPiece& operator+=(const AnalyticPiece& other);
    AnalyticPiece& operator*=(double s) noexcept;

    friend AnalyticPiece operator+(AnalyticPiece a, const AnalyticPiece& b) { return a += b; }
    friend AnalyticPiece operator-(AnalyticPiece a, const AnalyticPiece& b) { return a += b * -1.0; }
    friend AnalyticPiece operator*(AnalyticPiece a, double s) noexcept { return a *= s; }
    friend AnalyticPiece operator*(double s, AnalyticPiece a) noexcept { return a *= s; }

    friend bool operator==(const AnalyticPiece&, const AnalyticPiece&) = default;
};

/// x * piece for an affine piece (the spot-drift term (r - q) x * dOmega/dS).
AnalyticPiece times_x(const AnalyticPiece& piece);

}  // namespace eeb

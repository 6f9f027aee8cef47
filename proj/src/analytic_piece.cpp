#include "eeb/analytic_piece.hpp"

#include <cmath>

#include "eeb/error.hpp"

namespace eeb {

double power_log(double x, double p) noexcept {
    const double lx = std::log(x);
    if (p == 0.0) return lx;
    return std::expm1(p * lx) / p;
}

double AnalyticPiece::operator()(double x) const noexcept {
    double v = c0 + c1 * x;
    if (c2 != 0.0) v += c2 * x * x;
    if (c_log != 0.0) v += c_log * std::log(x);
    if (c_pow != 0.0) v += c_pow * power_log(x, power);
    return v;
}

double AnalyticPiece::derivative(double x) const noexcept {
    double d = c1;
    if (c2 != 0.0) d += 2.0 * c2 * x;
    if (c_log != 0.0) d += c_log / x;
    if (c_pow != 0.0) d += c_pow * std::pow(x, power - 1.0);
    return d;
}

std::optional<int> AnalyticPiece::monotone_direction() const noexcept {
    // On x > 0 each of x, x^2, ln x, E_p(x) is strictly increasing, so the
    // piece is monotone whenever the non-zero coefficients share a sign.
    int dir = 0;
    for (double c : {c1, c2, c_log, c_pow}) {
        if (c == 0.0) continue;
        const int s = c > 0.0 ? 1 : -1;
        if (dir == 0) dir = s;
        else if (dir != s) return std::nullopt;
    }
    return dir;
}

AnalyticPiece& AnalyticPiece::operator+=(const AnalyticPiece& other) {
    if (c_pow != 0.0 && other.c_pow != 0.0 && power != other.power) {
        throw AnalysisError("cannot add power-log terms with different exponents");
    }
    if (c_pow == 0.0) power = other.power;
    c0 += other.c0;
    c1 += other.c1;
    c2 += other.c2;
    c_log += other.c_log;
    c_pow += other.c_pow;
    return *this;
}

AnalyticPiece& AnalyticPiece::operator*=(double s) noexcept {
    c0 *= s;
    c1 *= s;
    c2 *= s;
    c_log *= s;
    c_pow *= s;
    return *this;
}

AnalyticPiece times_x(const AnalyticPiece& piece) {
    if (piece.c2 != 0.0 || piece.c_log != 0.0 || piece.c_pow != 0.0) {
        throw AnalysisError("times_x is defined for affine pieces only");
    }
    return {0.0, piece.c0, piece.c1};
}

}  // namespace eeb

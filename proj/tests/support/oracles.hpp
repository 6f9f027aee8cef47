#pragma once

// Reference computations written independently of the library: series, quadrature,
// bisection and exact fractions. Only the standard library is used here.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

// erf by its Maclaurin series in long double; fine for |x| <= 5.
inline long double erf_series(long double x) {
    long double term = x, sum = x;
    for (int n = 1; n < 400; ++n) {
        term *= -x * x / n;
        const long double add = term / (2 * n + 1);
        sum += add;
        if (std::fabs(add) < 1e-24L * std::fabs(sum)) break;
    }
    return 2.0L / std::sqrt(3.14159265358979323846264338327950288L) * sum;
}

inline long double normal_cdf(long double x) { return 0.5L * (1.0L + erf_series(x / std::sqrt(2.0L))); }

// E[e^{-r tau} (S_T - X)^+] by composite Simpson over the standard normal
// variable, integrating only where the payoff is smooth (S_T > X).
inline long double call_quadrature(long double r, long double q, long double sigma, long double tau,
                                   long double spot, long double strike) {
    const long double vol = sigma * std::sqrt(tau);
    const long double drift = (r - q - 0.5L * sigma * sigma) * tau;
    const long double z_lo = std::max(-14.0L, (std::log(strike / spot) - drift) / vol);
    const long double z_hi = 14.0L;
    if (z_lo >= z_hi) return 0.0L;
    const int n = 20000;
    const long double h = (z_hi - z_lo) / n;
    auto f = [&](long double z) {
        const long double st = spot * std::exp(drift + vol * z);
        return (st - strike) * std::exp(-0.5L * z * z);
    };
    long double sum = f(z_lo) + f(z_hi);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0L : 2.0L) * f(z_lo + i * h);
    const long double integral = sum * h / 3.0L / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
    return std::exp(-r * tau) * integral;
}

// Put through the same quadrature on the complementary region.
inline long double put_quadrature(long double r, long double q, long double sigma, long double tau,
                                  long double spot, long double strike) {
    const long double vol = sigma * std::sqrt(tau);
    const long double drift = (r - q - 0.5L * sigma * sigma) * tau;
    const long double z_lo = -14.0L;
    const long double z_hi = std::min(14.0L, (std::log(strike / spot) - drift) / vol);
    if (z_lo >= z_hi) return 0.0L;
    const int n = 20000;
    const long double h = (z_hi - z_lo) / n;
    auto f = [&](long double z) {
        const long double st = spot * std::exp(drift + vol * z);
        return (strike - st) * std::exp(-0.5L * z * z);
    };
    long double sum = f(z_lo) + f(z_hi);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0L : 2.0L) * f(z_lo + i * h);
    const long double integral = sum * h / 3.0L / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
    return std::exp(-r * tau) * integral;
}

// Root of a decreasing function by plain bisection on [lo, hi].
template <class F>
long double bisect(F f, long double lo, long double hi, int iterations = 200) {
    for (int i = 0; i < iterations; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (f(mid) > 0) lo = mid;
        else hi = mid;
    }
    return 0.5L * (lo + hi);
}

// r - q G - ln(G) / T = 0.
inline long double geometric_root(long double r, long double q, long double T) {
    auto f = [&](long double g) { return r - q * g - std::log(g) / T; };
    long double lo = 1.0L, hi = 1.0L;
    while (f(lo) < 0) lo *= 0.5L;
    while (f(hi) > 0) hi *= 2.0L;
    return bisect(f, lo, hi);
}

// r - q Y - lambda / (p (1 - e^{-lambda T})) (Y^p - 1) = 0, with the weight
// written as a series in lambda T when that product is tiny.
inline long double weight(long double lambda, long double T) {
    const long double x = lambda * T;
    if (x < 1e-6L) return (1.0L + x / 2.0L + x * x / 12.0L) / T;
    return lambda / (1.0L - std::exp(-x));
}

inline long double weighted_root(long double r, long double q, long double T, long double p, long double lambda) {
    const long double w = weight(lambda, T);
    auto f = [&](long double y) { return r - q * y - w * (std::pow(y, p) - 1.0L) / p; };
    long double lo = 1.0L, hi = 1.0L;
    while (f(lo) < 0) lo *= 0.5L;
    while (f(hi) > 0) hi *= 2.0L;
    return bisect(f, lo, hi);
}

// Exact fractions for the condor case formulas.
struct Frac {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Frac(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) { normalize(); }
    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    friend Frac operator+(Frac a, Frac b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Frac operator-(Frac a, Frac b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend Frac operator*(Frac a, Frac b) { return {a.num * b.num, a.den * b.den}; }
    friend Frac operator/(Frac a, Frac b) { return {a.num * b.den, a.den * b.num}; }
    friend bool operator<(Frac a, Frac b) { return a.num * b.den < b.num * a.den; }
    friend bool operator==(Frac a, Frac b) { return a.num == b.num && a.den == b.den; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline Frac fmax(Frac a, Frac b) { return a < b ? b : a; }
inline Frac fmin(Frac a, Frac b) { return a < b ? a : b; }

// Case formulas in exact arithmetic (q > 0, r > 0).
inline std::vector<Frac> condor_exact(Frac r, Frac q, Frac x1, Frac x2, Frac x3, Frac x4) {
    const Frac tail = x3 + x2 - x1 - x4;
    const Frac first = fmin(fmax(x1, r / q * x1), x2);
    const Frac second = fmax(x3, r / q * (x3 + x2 - x1));
    if (Frac(0) < tail) {
        if (!(r * (x3 + x2 - x1) < q * x4)) return {first};
        return {first, second, x4};
    }
    return {first, fmin(second, x4)};
}

// Expiry bonus of the condor, one branch per row of its closed-form table.
inline double condor_bonus(double r, double q, double x1, double x2, double x3, double x4, double s) {
    if (s < x1) return 0.0;
    if (s == x1) return x1 / 2 * (q - r);
    if (s < x2) return q * s - r * x1;
    if (s == x2 && x2 != x3) return x2 / 2 * (q + r) - r * x1;
    if (s < x3 || (s == x2 && x2 == x3)) return r * (x2 - x1);
    if (s == x3) return x3 / 2 * (r - q) + r * (x2 - x1);
    if (s < x4) return r * (x3 + x2 - x1) - q * s;
    if (s == x4) return r * (x3 + x2 - x1) - x4 / 2 * (q + r);
    return r * (-x4 + x3 + x2 - x1);
}

inline double vanilla_call_bonus(double r, double q, double x, double s) {
    if (s < x) return 0.0;
    if (s == x) return x / 2 * (q - r);
    return q * s - r * x;
}

inline double vanilla_put_bonus(double r, double q, double x, double s) {
    if (s < x) return r * x - q * s;
    if (s == x) return x / 2 * (r - q);
    return 0.0;
}

// Away from the strike only; the kink value follows the averaging convention.
inline double british_call_bonus(double r, double q, double mu_c, double x, double s) {
    return s < x ? 0.0 : (q + mu_c) * s - r * x;
}

inline double british_put_bonus(double r, double q, double mu_c, double x, double s) {
    return s > x ? 0.0 : r * x - (q + mu_c) * s;
}

struct Draw {
    std::mt19937_64 gen;
    explicit Draw(std::uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    bool chance(double p) { return std::bernoulli_distribution(p)(gen); }
};

}  // namespace oracle

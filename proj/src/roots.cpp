#include "eeb/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "eeb/error.hpp"

namespace eeb {

RootResult solve_transcendental(const RootProblem& problem) {
    if (!problem.residual) throw SolverError("root problem has no residual");
    double lo = problem.lo, hi = problem.hi;
    if (!(lo <= hi)) throw SolverError("root bracket is reversed");

    double f_lo = problem.residual(lo);
    double f_hi = problem.residual(hi);
    if (f_lo == 0.0) return {lo, 0.0, 0};
    if (f_hi == 0.0) return {hi, 0.0, 0};
    if (!(f_lo * f_hi < 0.0)) {
        std::ostringstream msg;
        msg << "root not bracketed: residual(" << lo << ") = " << f_lo << ", residual(" << hi
            << ") = " << f_hi;
        throw SolverError(msg.str());
    }
    // Orient so that residual(neg) < 0 < residual(pos).
    double neg = lo, pos = hi;
    if (f_lo > 0.0) std::swap(neg, pos);

    const double target = problem.tolerance * problem.scale;
    double x = 0.5 * (lo + hi);
    double step_before_last = std::abs(hi - lo);
    double last_step = step_before_last;

    for (int it = 1; it <= problem.max_iterations; ++it) {
        const double f = problem.residual(x);
        if (std::abs(f) <= target) return {x, f, it};
        if (f < 0.0) neg = x;
        else pos = x;

        const double a = std::min(neg, pos), b = std::max(neg, pos);
        if (std::nextafter(a, b) >= b) {
            // Bracket is two adjacent doubles; nothing left to refine.
            const double fa = problem.residual(a), fb = problem.residual(b);
            return std::abs(fa) <= std::abs(fb) ? RootResult{a, fa, it} : RootResult{b, fb, it};
        }

        bool newton_ok = false;
        double next = 0.0;
        if (problem.derivative) {
            const double df = problem.derivative(x);
            if (df != 0.0 && std::isfinite(df)) {
                next = x - f / df;
                newton_ok = next > a && next < b && std::abs(2.0 * f) <= std::abs(step_before_last * df);
            }
        }
        step_before_last = last_step;
        if (newton_ok) {
            last_step = std::abs(next - x);
            x = next;
        } else {
            last_step = 0.5 * (b - a);
            x = a + last_step;
        }
    }
    std::ostringstream msg;
    msg << "no convergence after " << problem.max_iterations << " iterations near x = " << x;
    throw SolverError(msg.str());
}

Bracket bracket_decreasing(const std::function<double(double)>& residual, int max_doublings) {
    const double f1 = residual(1.0);
    if (f1 == 0.0) return {1.0, 1.0};
    std::ostringstream seen;
    seen << "residual(1) = " << f1;
    if (f1 > 0.0) {
        double x = 1.0;
        for (int k = 0; k < max_doublings; ++k) {
            const double f = residual(2.0 * x);
            if (f <= 0.0) return {x, 2.0 * x};
            x *= 2.0;
            if (k == max_doublings - 1) seen << ", residual(" << x << ") = " << f;
        }
    } else {
        double x = 1.0;
        for (int k = 0; k < max_doublings; ++k) {
            const double f = residual(0.5 * x);
            if (f >= 0.0) return {0.5 * x, x};
            x *= 0.5;
            if (k == max_doublings - 1) seen << ", residual(" << x << ") = " << f;
        }
    }
    throw SolverError("no sign change while bracketing: " + seen.str());
}

}  // namespace eeb

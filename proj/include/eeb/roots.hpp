#pragma once

#include <functional>
#include <string>

namespace eeb {

/// Scalar root problem on a bracket with residual(lo) * residual(hi) < 0.
struct RootProblem {
    std::function<double(double)> residual;
    /// Optional; enables the Newton steps of the safeguarded iteration.
    std::function<double(double)> derivative;
    double lo = 0.0;
    double hi = 1.0;
    double tolerance = 1e-13;
    /// Residual magnitude against which the tolerance is measured.
    double scale = 1.0;
    int max_iterations = 200;
};

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Bisection-safeguarded Newton: a Newton step is taken only when it lands
/// inside the current bracket and halves the residual faster than bisection
/// would shrink the bracket. Stops when |residual| <= tolerance * scale or the
/// bracket collapses to adjacent doubles.
RootResult solve_transcendental(const RootProblem& problem);

/// Bracket for a residual that is decreasing on (0, inf): starts at 1 and
/// doubles (or halves) up to max_doublings times until the sign changes.
/// Throws SolverError with the residuals seen when no sign change is found.
/// A residual exactly zero at 1 yields the degenerate bracket [1, 1].
struct Bracket {
    double lo;
    double hi;
};
Bracket bracket_decreasing(const std::function<double(double)>& residual, int max_doublings = 60);

}  // namespace eeb

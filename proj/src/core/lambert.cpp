#include "core/lambert.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace gfd {
namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e

// Branch-point expansion in p = sqrt(2 (e t + 1)):
//   W(t) = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540 + 769 p^5/17280 - ...
// Used both as the series evaluation near the branch point (where Halley's
// correction divides by a vanishing derivative) and as the initial guess for
// negative arguments further out.
double branch_series(double p) {
    const double c2 = -1.0 / 3.0;
    const double c3 = 11.0 / 72.0;
    const double c4 = -43.0 / 540.0;
    const double c5 = 769.0 / 17280.0;
    return -1.0 + p * (1.0 + p * (c2 + p * (c3 + p * (c4 + p * c5))));
}

double residual(double w, double t) { return w * std::exp(w) - t; }

}  // namespace

double lambert_w(double t, const SolverSettings& settings) {
    if (std::isnan(t)) throw domain_error("lambert_w: t is NaN");
    if (t == 0.0) return 0.0;
    if (t < -kInvE) {
        if (t < -kInvE - settings.abs_tol)
            throw domain_error("lambert_w: t = " + std::to_string(t) + " below -1/e");
        return -1.0;  // branch point, reached through the permitted slack
    }
    if (t == -kInvE) return -1.0;

    // Immediately above the branch point the square-root expansion is already
    // more accurate than double round-off; Halley would lose digits there.
    if (t < -kInvE + 1e-6) {
        const double p2 = std::max(0.0, 2.0 * (std::exp(1.0) * t + 1.0));
        return branch_series(std::sqrt(p2));
    }

    double w;
    if (t >= 0.0) {
        w = std::log1p(t);
        if (w > 3.0) w = std::log(t) - std::log(std::log(t));  // large-t asymptote
    } else {
        w = branch_series(std::sqrt(2.0 * (std::exp(1.0) * t + 1.0)));
    }

    const double tol = std::max(settings.abs_tol, settings.rel_tol * std::fabs(t));
    for (std::size_t i = 0; i < settings.max_iterations; ++i) {
        const double ew = std::exp(w);
        const double f = w * ew - t;
        if (std::fabs(f) <= tol) return w;
        // Halley step for f(w) = w e^w - t, grouped around the Newton ratio
        // f/f1 so that no intermediate product can overflow even when f and
        // the derivatives are near the top of the double range.
        const double f1 = ew * (1.0 + w);
        const double newton = f / f1;
        const double curv = (2.0 + w) / (1.0 + w);  // f2 / f1
        double step = newton / (1.0 - 0.5 * newton * curv);
        double next = w - step;
        if (next < -1.0) next = -1.0 + 0.5 * (w + 1.0);  // stay on the branch
        w = next;
    }
    if (std::fabs(residual(w, t)) <= 8.0 * tol) return w;  // stalled at round-off
    throw no_convergence_error("lambert_w: no convergence at t = " + std::to_string(t));
}

double lambert_w_prime(double t, const SolverSettings& settings) {
    if (std::isnan(t)) throw domain_error("lambert_w_prime: t is NaN");
    if (t <= -kInvE)
        throw domain_error("lambert_w_prime: t = " + std::to_string(t) +
                           " at or below the branch point");
    const double w = lambert_w(t, settings);
    return 1.0 / (t + std::exp(w));
}

}  // namespace gfd

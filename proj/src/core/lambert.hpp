// lambert.hpp: principal branch of the Lambert W function on [-1/e, inf).
#pragma once

#include <cstddef>

namespace gfd {

struct SolverSettings {
    double abs_tol = 1e-13;
    double rel_tol = 1e-13;
    std::size_t max_iterations = 50;
};

// Solves w * e^w = t for the principal branch (w >= -1).
// Guarantees |w e^w - t| <= max(abs_tol, rel_tol * |t|); returns exactly -1 at
// the branch point and exactly 0 at t = 0. Accepts t down to -1/e minus an
// abs_tol slack (clamped to the branch point); below that throws domain_error.
double lambert_w(double t, const SolverSettings& settings = {});

// Derivative W'(t) = W / (t (1 + W)) = 1 / (t + e^W), t strictly above -1/e.
double lambert_w_prime(double t, const SolverSettings& settings = {});

}  // namespace gfd

// checks.hpp: map-agnostic verification operations shared by the test suite
// and the command-line drivers: pointwise distortion-inclusion residuals,
// finite-difference derivative validation, interface-gap measurement,
// blow-up witnesses, and modulus-of-continuity sampling.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/families.hpp"

namespace gfd {

// Deterministic low-discrepancy sequence on [0,1)^2: the additive recurrence
// u_k = frac(1/2 + k/a), v_k = frac(1/2 + k/a^2) for the plastic number a
// (real root of a^3 = a + 1), the two-dimensional analogue of golden-ratio
// sampling.  Stateless by index, so partitioned consumers reproduce any
// subsequence exactly.
struct R2Sequence {
    static std::pair<double, double> at(std::uint64_t k);
};

// One pointwise evaluation of the distortion inclusion
//     |Df|^n <= K * J_f + W * Sigma,
// with weight W = 1 (plain form) or W = |f - y0|^n (deviation-weighted form).
// The left side uses the operator norm; the Frobenius value is carried along
// for reporting, since coordinate estimates often bound that norm instead.
struct InclusionReport {
    double lhs = 0.0;       // |Df|^n, operator norm
    double lhs_frob = 0.0;  // |Df|^n, Frobenius norm
    double rhs = 0.0;       // K * J_f + W * Sigma
    double residual = 0.0;  // lhs - rhs; <= 0 means the inclusion holds here
    PolarPoint point;
};

// The constructions all live at n = 2; the exponent is a parameter so fixture
// maps can exercise other n in tests.
InclusionReport inclusion_residual(const MapFamily& map, const PolarPoint& pt,
                                   const std::optional<Vec2>& y0 = std::nullopt, double n = 2.0);

// Worst case of residual / (1 + lhs) over a low-discrepancy scan of every
// region of the map, visited in declaration order with a single global sample
// index, so the result is deterministic.
struct InclusionScan {
    std::uint64_t samples = 0;
    double worst_scaled = 0.0;  // max of residual / (1 + lhs)
    InclusionReport worst;
};

InclusionScan inclusion_scan(const MapFamily& map, std::uint64_t samples, double margin = 1e-3,
                             const std::optional<Vec2>& y0 = std::nullopt, double n = 2.0);

// Second-order central-difference estimate of the polar-frame derivative with
// radial half-width `step` and angular half-width `arc` radians; arc = 0
// (the default) matches the arc length to the radial step (arc = step / r).
// The two directions can need very different steps: a thin band bounds the
// radial stencil hard while leaving room for a wide angular one.  All four
// stencil points must classify into pt's region; a stencil that reaches an
// interface throws interface_error.
Mat2 fd_jacobian(const MapFamily& map, const PolarPoint& pt, double step, double arc = 0.0);

// Gap |f(plus side) - f(minus side)| across the named interface curve at
// parameter t, Richardson-extrapolated from the relative offsets offset,
// offset/2, and offset/4 down to offset -> 0.  Near zero for a continuous
// map; throws domain_error for an unknown interface name or an offset
// outside (0, 1].
double interface_gap(const MapFamily& map, const std::string& interface_id, double t,
                     double offset);

// Certified blow-up threshold radius for |f| >= height together with the
// smallest |f| observed over a log-spaced polar sample of the disk below it.
struct BlowupWitness {
    double radius = 0.0;     // every point with |x| <= radius has |f| >= height
    double min_abs_f = 0.0;  // smallest |f| over the evaluated samples
    int samples = 0;         // points evaluated (interface-band hits are skipped)
};

BlowupWitness blowup_witness(const MapFamily& map, double height);

// Modulus of continuity at the origin: omega(r) estimates
// max |f(x) - f(0)| over the ball |x| <= r by a dense polar grid, with one
// grid doubling to bound the sampling error.  The refined grid contains the
// coarse one, so refine_gap >= 0.  Requires a map continuous at 0.
struct ModulusSample {
    double r = 0.0;
    double omega = 0.0;       // refined-grid estimate
    double refine_gap = 0.0;  // refined minus coarse estimate
};

std::vector<ModulusSample> modulus_samples(const MapFamily& map, const std::vector<double>& radii);

}  // namespace gfd

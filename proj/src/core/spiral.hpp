// spiral.hpp: double-spiral map family on the region between r = g(theta)
// and its next winding, glued through Lambert's W across the mid-spiral.
#pragma once

#include <vector>

#include "core/families.hpp"

namespace gfd {

enum class SpiralRegime { BoundedSigma, Lp };

struct SpiralParams {
    SpiralRegime regime = SpiralRegime::BoundedSigma;
    double p = 2.0;       // profile exponent (Lp regime)
    double theta0 = 0.0;  // starting winding angle, >= 2*pi
    double r0 = 0.0;      // upper end of the profile's domain

    static SpiralParams bounded_sigma();
    static SpiralParams lp(double p);

    // Spiral curves, defined for any theta > e (callers pass theta >= theta0
    // or the shifted theta + 2*pi).
    double g(double theta) const;
    double dg(double theta) const;
    double h(double theta) const;   // midway curve (g(theta) + g(theta+2pi))/2
    double dh(double theta) const;

    // Increasing radial profile phi and its closed-form derivative.
    double dphi(double r) const;
};

class SpiralMap final : public MapFamily {
  public:
    explicit SpiralMap(SpiralParams params);

    const SpiralParams& params() const { return params_; }

    std::string name() const override;
    // pt.theta is the unwrapped winding angle (>= theta0), not a principal
    // angle; use unwrap() to get it from a cartesian point.
    Vec2 eval_f(const PolarPoint& pt) const override;
    FieldSample sample(const PolarPoint& pt) const override;
    Region classify(const PolarPoint& pt) const override;
    std::vector<Region> regions() const override;
    PolarPoint point_in_region(Region reg, double u, double v, double margin) const override;
    FdScales fd_scales(const PolarPoint& pt) const override;
    std::vector<InterfaceCurve> interfaces() const override;
    bool discontinuous_at_origin() const override { return true; }
    double blowup_radius(double height) const override;
    double outer_radius() const override;
    PolarPoint chart_point(double radius, double angle) const override;

    // Profile value; closed form for the bounded-sigma regime, cubic-Hermite
    // cache over log(1/r) for the Lp regime.
    double phi(double r) const;

    // Inverse of the outer spiral curve: the angle t with g(t) = r, through
    // the identity t = x / W(x) at x = 1/r.
    double g_inverse(double r) const;

    // Winding coordinates (r, unwrapped theta) of a cartesian point of the
    // spiral domain; throws domain_error outside it.
    PolarPoint unwrap(const Vec2& z) const;

  private:
    struct PhiCache {
        double L_lo = 0.0, L_hi = 0.0, step = 0.0;
        std::vector<double> value;  // phi at L_lo + i*step
        std::vector<double> slope;  // d phi / dL there (negative)
    };

    double band_width(double theta) const;  // g(theta) - g(theta + 2pi)

    SpiralParams params_;
    PhiCache cache_;  // built once for the Lp regime, immutable afterwards
};

}  // namespace gfd

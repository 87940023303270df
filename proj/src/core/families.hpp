// families.hpp: common interface for the parameterized map constructions.
//
// Every family evaluates a planar map f together with its polar-frame
// derivative matrix (columns d/dr and r^{-1} d/dtheta), the Jacobian, the
// operator norm, and the pointwise pair (K, Sigma) that places the map in the
// distortion inclusion |Df|^2 <= K * J_f + Sigma on each region.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core/errors.hpp"
#include "core/geometry.hpp"

namespace gfd {

enum class Region {
    CuspA1,
    CuspA2,
    CuspB1,
    CuspB2,
    SpiralA,
    SpiralB,
    Disk,  // radially symmetric maps have a single smooth region
};

inline const char* region_name(Region r) {
    switch (r) {
        case Region::CuspA1: return "A1";
        case Region::CuspA2: return "A2";
        case Region::CuspB1: return "B1";
        case Region::CuspB2: return "B2";
        case Region::SpiralA: return "A";
        case Region::SpiralB: return "B";
        case Region::Disk: return "disk";
    }
    return "?";
}

struct FieldSample {
    Vec2 f;
    Mat2 df;              // polar frame
    double jacobian = 0.0;
    double op_norm_sq = 0.0;
    double distortion = 0.0;      // K
    double inhomogeneity = 0.0;   // Sigma
    Region region = Region::Disk;
};

// A region interface curve, parameterized by t. offset_point(t, s) returns a
// point at transverse offset |s| * local_scale(t) on the s > 0 (plus) or
// s < 0 (minus) side; s is a relative offset in (0, 1].
struct InterfaceCurve {
    std::string name;
    double t_lo = 0.0;
    double t_hi = 0.0;
    bool log_in_t = false;  // sample t log-uniformly when true
    std::function<PolarPoint(double t, double s)> offset_point;
};

// Safe half-widths for finite-difference stencils at a point: staying within
// (dr, dtheta) of the point keeps the whole stencil inside the same region.
struct FdScales {
    double dr = 0.0;
    double dtheta = 0.0;
};

class MapFamily {
public:
    virtual ~MapFamily() = default;

    virtual std::string name() const = 0;
    virtual Vec2 eval_f(const PolarPoint& pt) const = 0;
    virtual FieldSample sample(const PolarPoint& pt) const = 0;
    virtual Region classify(const PolarPoint& pt) const = 0;

    virtual std::vector<Region> regions() const = 0;
    // Maps (u, v) in [0,1)^2 to an interior point of the region; margin in
    // (0, 0.5) keeps the point away from the region boundary by that fraction
    // of the local transverse span.
    virtual PolarPoint point_in_region(Region reg, double u, double v, double margin) const = 0;
    virtual FdScales fd_scales(const PolarPoint& pt) const = 0;

    virtual std::vector<InterfaceCurve> interfaces() const = 0;

    virtual bool discontinuous_at_origin() const = 0;
    // Radius below which |f| >= height; throws unsupported_error for maps
    // continuous at the origin.
    virtual double blowup_radius(double height) const {
        (void)height;
        throw unsupported_error(name() + ": no blow-up witness, map is continuous at 0");
    }
    virtual double outer_radius() const = 0;

    // Limit of f at the origin, for maps continuous there; the modulus of
    // continuity is measured against this value.  The limit cannot be read
    // off numerically (a map can approach it as slowly as a power of
    // 1/log(1/r)), so continuous families state it explicitly.
    virtual Vec2 origin_value() const {
        throw unsupported_error(name() + ": f(0) undefined, map is discontinuous at 0");
    }

    // Chart coordinates of the point at the given radius and principal angle
    // (atan2 range); families whose chart unwinds the angle override this so
    // radius-based sampling works uniformly.
    virtual PolarPoint chart_point(double radius, double angle) const {
        return {radius, angle};
    }
};

using FamilyPtr = std::shared_ptr<const MapFamily>;

}  // namespace gfd

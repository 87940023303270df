// radial_maps.hpp: radially symmetric map families on a punctured disk --
// the triple-log map, the power-log continuity family, and the identity
// fixture used to validate derivative plumbing.
#pragma once

#include <vector>

#include "core/families.hpp"

namespace gfd {

// f(x) = (log log log(e^e / |x|), 0) on the unit disk.  The derivative has
// rank one, so the Jacobian vanishes identically and the inclusion closes
// through the inhomogeneity alone; |f| still blows up at the origin.
class TripleLogMap final : public MapFamily {
  public:
    std::string name() const override { return "triple-log"; }
    Vec2 eval_f(const PolarPoint& pt) const override;
    FieldSample sample(const PolarPoint& pt) const override;
    Region classify(const PolarPoint& pt) const override;
    std::vector<Region> regions() const override { return {Region::Disk}; }
    PolarPoint point_in_region(Region reg, double u, double v, double margin) const override;
    FdScales fd_scales(const PolarPoint& pt) const override;
    std::vector<InterfaceCurve> interfaces() const override { return {}; }
    bool discontinuous_at_origin() const override { return true; }
    double blowup_radius(double height) const override;
    double outer_radius() const override { return 1.0; }

    // First component as a function of the radius alone.
    double value(double r) const;
    double slope(double r) const;
};

// f(x) = (log^{-alpha}(1/|x|), 0) on the disk of radius 1/e.  Continuous at
// the origin (f -> 0), with modulus of continuity exactly log^{-alpha}(1/r);
// the rank-one derivative again makes the Jacobian vanish.
class PowerLogMap final : public MapFamily {
  public:
    explicit PowerLogMap(double alpha);

    double alpha() const { return alpha_; }

    std::string name() const override { return "power-log"; }
    Vec2 eval_f(const PolarPoint& pt) const override;
    FieldSample sample(const PolarPoint& pt) const override;
    Region classify(const PolarPoint& pt) const override;
    std::vector<Region> regions() const override { return {Region::Disk}; }
    PolarPoint point_in_region(Region reg, double u, double v, double margin) const override;
    FdScales fd_scales(const PolarPoint& pt) const override;
    std::vector<InterfaceCurve> interfaces() const override { return {}; }
    bool discontinuous_at_origin() const override { return false; }
    double outer_radius() const override;
    Vec2 origin_value() const override { return {0.0, 0.0}; }

    double value(double r) const;
    double slope(double r) const;

  private:
    double alpha_;
};

// Cartesian identity map on the unit disk.  In the polar frame its derivative
// is the rotation matrix R(theta), which reduces to the identity at theta = 0;
// jacobian 1, distortion 1, inhomogeneity 0 -- the simplest inclusion member.
class IdentityMap final : public MapFamily {
  public:
    std::string name() const override { return "identity"; }
    Vec2 eval_f(const PolarPoint& pt) const override;
    FieldSample sample(const PolarPoint& pt) const override;
    Region classify(const PolarPoint& pt) const override;
    std::vector<Region> regions() const override { return {Region::Disk}; }
    PolarPoint point_in_region(Region reg, double u, double v, double margin) const override;
    FdScales fd_scales(const PolarPoint& pt) const override;
    std::vector<InterfaceCurve> interfaces() const override { return {}; }
    bool discontinuous_at_origin() const override { return false; }
    double outer_radius() const override { return 1.0; }
    Vec2 origin_value() const override { return {0.0, 0.0}; }
};

}  // namespace gfd

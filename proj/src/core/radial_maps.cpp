#include "core/radial_maps.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace gfd {
namespace {

constexpr double kE = 2.718281828459045235360287471352662498;
constexpr double kPi = 3.141592653589793238462643383279502884;

// Shared scaffolding for the radially symmetric families: a single smooth
// region covering 0 < r < outer, every angle admissible.
Region classify_disk(const char* who, const PolarPoint& pt, double outer) {
    if (!(pt.r > 0.0)) throw domain_error(std::string(who) + ": radius must be positive");
    if (!(pt.r < outer)) throw domain_error(std::string(who) + ": radius outside the disk");
    if (!std::isfinite(pt.theta)) throw domain_error(std::string(who) + ": angle not finite");
    return Region::Disk;
}

PolarPoint disk_point(const char* who, Region reg, double u, double v, double margin,
                      double outer) {
    if (reg != Region::Disk) throw domain_error(std::string(who) + ": unknown region requested");
    // u places the radius log-uniformly across twenty decades below the rim;
    // v picks the angle.  The margin shrinks both spans symmetrically.
    const double uu = margin + u * (1.0 - 2.0 * margin);
    const double r = outer * std::pow(1e-20, uu);
    const double theta = -kPi + (margin + v * (1.0 - 2.0 * margin)) * 2.0 * kPi;
    return {r, theta};
}

FdScales disk_scales(const char* who, const PolarPoint& pt, double outer) {
    classify_disk(who, pt, outer);
    // The radial fields vary on the scale of r itself; the angle direction is
    // flat, so its scale only needs to stay bounded.
    return {0.04 * std::min(pt.r, outer - pt.r), 0.5};
}

// Rank-one radial sample: f = (value, 0), polar-frame derivative
// [[slope, 0], [0, 0]], Jacobian 0, unit distortion, Sigma = |Df|^2.
FieldSample radial_sample(double value, double slope) {
    FieldSample out;
    out.f = {value, 0.0};
    out.df = {slope, 0.0, 0.0, 0.0};
    out.jacobian = 0.0;
    out.op_norm_sq = slope * slope;
    out.distortion = 1.0;
    out.inhomogeneity = out.op_norm_sq;
    out.region = Region::Disk;
    return out;
}

}  // namespace

// ---------------------------------------------------------------- triple-log

double TripleLogMap::value(double r) const {
    // log(e^e / r) = e + log(1/r), kept in that form so no large quotient is
    // ever materialized for tiny r.
    return std::log(std::log(kE + std::log(1.0 / r)));
}

double TripleLogMap::slope(double r) const {
    const double a = kE + std::log(1.0 / r);
    return -1.0 / (r * a * std::log(a));
}

Vec2 TripleLogMap::eval_f(const PolarPoint& pt) const {
    classify(pt);
    return {value(pt.r), 0.0};
}

FieldSample TripleLogMap::sample(const PolarPoint& pt) const {
    classify(pt);
    return radial_sample(value(pt.r), slope(pt.r));
}

Region TripleLogMap::classify(const PolarPoint& pt) const {
    return classify_disk("triple-log", pt, outer_radius());
}

PolarPoint TripleLogMap::point_in_region(Region reg, double u, double v, double margin) const {
    return disk_point("triple-log", reg, u, v, margin, outer_radius());
}

FdScales TripleLogMap::fd_scales(const PolarPoint& pt) const {
    return disk_scales("triple-log", pt, outer_radius());
}

double TripleLogMap::blowup_radius(double height) const {
    if (!(height > 0.0)) throw domain_error("triple-log: blow-up height must be positive");
    // Invert log log log(e^e / r) = height.  The result underflows once
    // exp(exp(height)) passes the exponent range of doubles.
    const double inner = std::exp(std::exp(height));
    if (!(inner < 700.0))
        throw domain_error("triple-log: blow-up height below representable radii");
    return std::exp(kE - inner);
}

// ----------------------------------------------------------------- power-log

PowerLogMap::PowerLogMap(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0)) throw domain_error("power-log: alpha must be positive");
}

double PowerLogMap::outer_radius() const {
    // Stop at radius 1/e so log(1/r) >= 1 and the value stays bounded by 1.
    return 1.0 / kE;
}

double PowerLogMap::value(double r) const { return std::pow(std::log(1.0 / r), -alpha_); }

double PowerLogMap::slope(double r) const {
    const double big_l = std::log(1.0 / r);
    return alpha_ * std::pow(big_l, -alpha_ - 1.0) / r;
}

Vec2 PowerLogMap::eval_f(const PolarPoint& pt) const {
    classify(pt);
    return {value(pt.r), 0.0};
}

FieldSample PowerLogMap::sample(const PolarPoint& pt) const {
    classify(pt);
    return radial_sample(value(pt.r), slope(pt.r));
}

Region PowerLogMap::classify(const PolarPoint& pt) const {
    return classify_disk("power-log", pt, outer_radius());
}

PolarPoint PowerLogMap::point_in_region(Region reg, double u, double v, double margin) const {
    return disk_point("power-log", reg, u, v, margin, outer_radius());
}

FdScales PowerLogMap::fd_scales(const PolarPoint& pt) const {
    return disk_scales("power-log", pt, outer_radius());
}

// ------------------------------------------------------------------ identity

Vec2 IdentityMap::eval_f(const PolarPoint& pt) const {
    classify(pt);
    return {pt.r * std::cos(pt.theta), pt.r * std::sin(pt.theta)};
}

FieldSample IdentityMap::sample(const PolarPoint& pt) const {
    classify(pt);
    const double c = std::cos(pt.theta), s = std::sin(pt.theta);
    FieldSample out;
    out.f = {pt.r * c, pt.r * s};
    out.df = {c, -s, s, c};  // rotation: the polar frame turns with theta
    out.jacobian = 1.0;
    out.op_norm_sq = 1.0;
    out.distortion = 1.0;
    out.inhomogeneity = 0.0;
    out.region = Region::Disk;
    return out;
}

Region IdentityMap::classify(const PolarPoint& pt) const {
    return classify_disk("identity", pt, outer_radius());
}

PolarPoint IdentityMap::point_in_region(Region reg, double u, double v, double margin) const {
    if (reg != Region::Disk) throw domain_error("identity: unknown region requested");
    // Plain linear radius here: the identity has no singularity to chase.
    const double uu = margin + u * (1.0 - 2.0 * margin);
    const double theta = -kPi + (margin + v * (1.0 - 2.0 * margin)) * 2.0 * kPi;
    return {uu * outer_radius(), theta};
}

FdScales IdentityMap::fd_scales(const PolarPoint& pt) const {
    classify(pt);
    // Unlike the flat-in-theta radial families, the identity's components
    // genuinely oscillate with theta, so the angular scale must be small
    // enough for stencil truncation error to clear the derivative checks.
    return {0.04 * std::min(pt.r, outer_radius() - pt.r), 0.1};
}

}  // namespace gfd

// spiral.cpp: spiral curves, winding classification, map fields, and the
// Lambert-W glue between the two regions.
#include "core/spiral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/gauss.hpp"
#include "core/lambert.hpp"

namespace gfd {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

// Classification refuses points closer (in r) to an interface than this
// fraction of the local band width g(theta) - g(theta + 2pi).
constexpr double kInterfaceRelTol = 1e-10;

// Deepest log(1/r) covered by the profile cache; radii below exp(-708) sit at
// the edge of the normal double range and are refused.
constexpr double kDeepestL = 708.0;

constexpr double kMaxWinding = 1e300;

// Integral of exp(-beta*l) * l^gamma over l in [L, inf); the profile value
// phi(r) equals this with L = log(1/r).  For beta = 0 the antiderivative is
// closed-form; otherwise integrate in w = log(beta*l), where the integrand
// exp((gamma+1)w - e^w) is entire and Gauss panels converge fast.
double profile_tail(double beta, double gamma, double L) {
    if (beta == 0.0) return std::pow(L, gamma + 1.0) / (-(gamma + 1.0));
    const double a = beta * L;
    const double w0 = std::log(a);
    const double w1 = std::log(a + 60.0);
    const GaussRule& rule = gauss_legendre(32);
    const int segments = 6;
    double total = 0.0;
    for (int s = 0; s < segments; ++s) {
        const double lo = w0 + (w1 - w0) * s / segments;
        const double hi = w0 + (w1 - w0) * (s + 1) / segments;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double w = mid + half * rule.x[i];
            acc += rule.w[i] * std::exp((gamma + 1.0) * w - std::exp(w));
        }
        total += half * acc;
    }
    return std::pow(beta, -gamma - 1.0) * total;
}

}  // namespace

SpiralParams SpiralParams::bounded_sigma() {
    SpiralParams out;
    out.regime = SpiralRegime::BoundedSigma;
    out.theta0 = kTwoPi;
    out.r0 = 1.0;
    return out;
}

SpiralParams SpiralParams::lp(double p) {
    if (!(p >= 1.0 && p <= 2.0)) throw domain_error("spiral lp: p must be in [1, 2]");
    SpiralParams out;
    out.regime = SpiralRegime::Lp;
    out.p = p;
    out.theta0 = 2.0 * kTwoPi;
    out.r0 = 1.0 / (out.theta0 * std::log(out.theta0));  // g(theta0)
    return out;
}

double SpiralParams::g(double theta) const {
    if (!(theta >= theta0))
        throw domain_error("spiral: angle " + std::to_string(theta) +
                           " below the starting winding " + std::to_string(theta0));
    return 1.0 / (theta * std::log(theta));
}

double SpiralParams::dg(double theta) const {
    if (!(theta >= theta0)) throw domain_error("spiral: angle below the starting winding");
    const double lg = std::log(theta);
    const double denom = theta * lg;
    return -(1.0 + lg) / (denom * denom);
}

double SpiralParams::h(double theta) const { return 0.5 * (g(theta) + g(theta + kTwoPi)); }

double SpiralParams::dh(double theta) const { return 0.5 * (dg(theta) + dg(theta + kTwoPi)); }

double SpiralParams::dphi(double r) const {
    if (!(r > 0.0 && r <= r0)) throw domain_error("spiral: profile argument outside (0, r0]");
    if (regime == SpiralRegime::BoundedSigma) return 1.0;
    const double L = std::log(1.0 / r);
    return std::pow(r, 2.0 / p - 2.0) * std::pow(L, 1.0 / p - 1.75);
}

SpiralMap::SpiralMap(SpiralParams params) : params_(params) {
    if (!(params_.theta0 >= kTwoPi) || !(params_.r0 > 0.0))
        throw domain_error("spiral: params not built through a factory");
    if (params_.regime == SpiralRegime::Lp) {
        const double beta = 2.0 / params_.p - 1.0;
        const double gamma = 1.0 / params_.p - 1.75;
        // Node count sized so the interpolant's derivative tracks the closed-form
        // profile slope to ~1e-8 relative even at the shallow end, where the
        // cells are coarsest compared with the profile's curvature.
        const int n = 40000;
        cache_.L_lo = std::log(1.0 / params_.r0);
        cache_.L_hi = kDeepestL;
        cache_.step = (cache_.L_hi - cache_.L_lo) / (n - 1);
        cache_.value.resize(n);
        cache_.slope.resize(n);
        for (int i = 0; i < n; ++i) {
            const double L = cache_.L_lo + i * cache_.step;
            cache_.value[i] = profile_tail(beta, gamma, L);
            cache_.slope[i] = -std::exp(-beta * L) * std::pow(L, gamma);
        }
    }
}

std::string SpiralMap::name() const {
    return params_.regime == SpiralRegime::BoundedSigma ? "spiral-bounded-sigma" : "spiral-lp";
}

double SpiralMap::phi(double r) const {
    if (!(r > 0.0 && r <= params_.r0))
        throw domain_error("spiral: profile argument outside (0, r0]");
    if (params_.regime == SpiralRegime::BoundedSigma) return r;
    const double L = std::log(1.0 / r);
    if (L > cache_.L_hi) throw domain_error("spiral: radius below the supported profile range");
    const double x = std::max(0.0, (L - cache_.L_lo) / cache_.step);
    const std::size_t i = std::min(cache_.value.size() - 2, static_cast<std::size_t>(x));
    const double t = x - static_cast<double>(i);
    const double y0 = cache_.value[i], y1 = cache_.value[i + 1];
    const double d0 = cache_.slope[i] * cache_.step, d1 = cache_.slope[i + 1] * cache_.step;
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 +
           (3.0 * t2 - 2.0 * t3) * y1 + (t3 - t2) * d1;
}

double SpiralMap::band_width(double theta) const {
    return params_.g(theta) - params_.g(theta + kTwoPi);
}

Region SpiralMap::classify(const PolarPoint& pt) const {
    if (!(pt.theta >= params_.theta0))
        throw domain_error("spiral: winding angle below theta0");
    if (!(pt.theta <= kMaxWinding)) throw domain_error("spiral: winding angle too large");
    if (!(pt.r > 0.0)) throw domain_error("spiral: radius must be positive");
    const double outer = params_.g(pt.theta);
    const double inner = params_.g(pt.theta + kTwoPi);
    const double tol = kInterfaceRelTol * (outer - inner);
    if (std::fabs(pt.r - outer) < tol || std::fabs(pt.r - inner) < tol)
        throw interface_error("spiral: point lies on a winding edge");
    if (!(pt.r > inner && pt.r < outer))
        throw domain_error("spiral: radius outside the winding band; use unwrap first");
    const double mid = params_.h(pt.theta);
    if (std::fabs(pt.r - mid) < tol)
        throw interface_error("spiral: point lies on the mid-spiral interface");
    return pt.r > mid ? Region::SpiralB : Region::SpiralA;
}

Vec2 SpiralMap::eval_f(const PolarPoint& pt) const {
    const Region reg = classify(pt);
    const double ph = phi(pt.r);
    if (reg == Region::SpiralB) return {ph, -std::log(std::log(pt.theta))};
    const double u = 1.0 / (2.0 * pt.r - params_.g(pt.theta + kTwoPi));
    return {ph, -std::log(lambert_w(u))};
}

FieldSample SpiralMap::sample(const PolarPoint& pt) const {
    const Region reg = classify(pt);
    FieldSample out;
    out.region = reg;
    out.f = eval_f(pt);
    const double dphi = params_.dphi(pt.r);
    if (reg == Region::SpiralB) {
        const double outer = params_.g(pt.theta);
        out.df = {dphi, 0.0, 0.0, -outer / pt.r};
        out.jacobian = -dphi * outer / pt.r;
        out.op_norm_sq = out.df.op_norm_sq();
        out.distortion = std::max(dphi, 1.0);
        out.inhomogeneity = 6.0 + 3.0 * dphi * dphi;
        return out;
    }
    const double tau = pt.theta + kTwoPi;
    const double lt = std::log(tau);
    const double u = 1.0 / (2.0 * pt.r - params_.g(tau));
    const double w = lambert_w(u);
    const double c = 2.0 * u / (1.0 + w);
    // (1+log tau) u / (r (1+W) tau^2 log^2 tau), grouped so intermediates stay
    // near u/(tau log tau) <= 1 even at extreme windings.
    const double d = (u / (tau * lt)) * (1.0 + lt) / (pt.r * tau * lt * (1.0 + w));
    out.df = {dphi, 0.0, c, d};
    out.jacobian = dphi * d;
    out.op_norm_sq = out.df.op_norm_sq();
    if (!(out.jacobian > 0.0))
        throw degenerate_error("spiral: nonpositive Jacobian in the inner region");
    out.distortion = std::max(1.0, out.op_norm_sq / out.jacobian);
    out.inhomogeneity = 0.0;
    return out;
}

std::vector<Region> SpiralMap::regions() const { return {Region::SpiralA, Region::SpiralB}; }

PolarPoint SpiralMap::point_in_region(Region reg, double u, double v, double margin) const {
    if (reg != Region::SpiralA && reg != Region::SpiralB)
        throw domain_error("spiral: unknown region requested");
    // u places the winding log-uniformly across 8 decades; v places the radius
    // inside the half-band with the requested relative margin.
    const double uu = margin + u * (1.0 - 2.0 * margin);
    const double theta = params_.theta0 * std::pow(1e8, uu);
    const double outer = params_.g(theta);
    const double inner = params_.g(theta + kTwoPi);
    const double mid = params_.h(theta);
    const double w = margin + v * (1.0 - 2.0 * margin);
    const double r =
        (reg == Region::SpiralA) ? inner + w * (mid - inner) : mid + w * (outer - mid);
    return {r, theta};
}

FdScales SpiralMap::fd_scales(const PolarPoint& pt) const {
    const Region reg = classify(pt);
    const double outer = params_.g(pt.theta);
    const double inner = params_.g(pt.theta + kTwoPi);
    const double mid = params_.h(pt.theta);
    const double clear_r = (reg == Region::SpiralA) ? std::min(pt.r - inner, mid - pt.r)
                                                    : std::min(pt.r - mid, outer - pt.r);
    // Moving in theta slides all three curves at most |g'(theta)|; keep the
    // radial clearance dominant over that drift, and stay above theta0.
    const double slope = std::fabs(params_.dg(pt.theta));
    const double dtheta =
        std::min(0.25 * clear_r / slope, 0.45 * (pt.theta - params_.theta0));
    return {0.5 * clear_r, dtheta};
}

std::vector<InterfaceCurve> SpiralMap::interfaces() const {
    std::vector<InterfaceCurve> out;
    const SpiralParams prm = params_;
    {
        InterfaceCurve c;
        c.name = "r=h(theta)";
        c.t_lo = prm.theta0 * 1.0001;
        c.t_hi = prm.theta0 * 1e6;
        c.log_in_t = true;
        c.offset_point = [prm](double theta, double s) {
            const double outer = prm.g(theta);
            const double inner = prm.g(theta + kTwoPi);
            const double mid = prm.h(theta);
            const double mag = std::fabs(s);
            if (s >= 0.0) return PolarPoint{mid + mag * 0.25 * (outer - mid), theta};
            return PolarPoint{mid - mag * 0.25 * (mid - inner), theta};
        };
        out.push_back(std::move(c));
    }
    {
        // The inner edge of winding theta meets the outer half of winding
        // theta + 2pi; the minus side therefore lives one winding deeper.
        InterfaceCurve c;
        c.name = "r=g(theta+2pi)";
        c.t_lo = prm.theta0 * 1.0001;
        c.t_hi = prm.theta0 * 1e6;
        c.log_in_t = true;
        c.offset_point = [prm](double theta, double s) {
            const double tau = theta + kTwoPi;
            const double edge = prm.g(tau);
            const double mag = std::fabs(s);
            if (s >= 0.0) {
                const double mid = prm.h(theta);
                return PolarPoint{edge + mag * 0.25 * (mid - edge), theta};
            }
            const double mid_next = prm.h(tau);
            return PolarPoint{edge - mag * 0.25 * (edge - mid_next), tau};
        };
        out.push_back(std::move(c));
    }
    return out;
}

double SpiralMap::blowup_radius(double height) const {
    if (!(height > 0.0)) throw domain_error("spiral: blow-up height must be positive");
    // |Im f| >= log log theta everywhere in the band of winding theta, and a
    // point at radius r has winding >= g^{-1}(r) - 2pi.
    const double theta_min = std::max(std::exp(std::exp(height)), params_.theta0);
    if (!(theta_min < kMaxWinding))
        throw domain_error("spiral: blow-up height beyond representable windings");
    return params_.g(theta_min + kTwoPi);
}

double SpiralMap::outer_radius() const { return params_.g(params_.theta0); }

double SpiralMap::g_inverse(double r) const {
    if (!(r > 0.0)) throw domain_error("spiral: g_inverse needs a positive radius");
    const double x = 1.0 / r;
    return x / lambert_w(x);
}

PolarPoint SpiralMap::chart_point(double radius, double angle) const {
    return unwrap({radius * std::cos(angle), radius * std::sin(angle)});
}

PolarPoint SpiralMap::unwrap(const Vec2& z) const {
    const double r = z.norm();
    if (!(r > 0.0)) throw domain_error("spiral: cannot unwrap the origin");
    const double rep = std::atan2(z.y, z.x);
    double m = std::fmod(rep - params_.theta0, kTwoPi);
    if (m <= 0.0) m += kTwoPi;
    const double base = params_.theta0 + m;  // in (theta0, theta0 + 2pi]
    if (!(r < params_.g(base)))
        throw domain_error("spiral: point lies outside the spiral domain");
    // Closed-form winding guess through g^{-1}, then certify against the
    // curves directly; fp error in g^{-1} can land one winding off.
    const double theta_star = g_inverse(r);
    if (!(theta_star <= kMaxWinding))
        throw domain_error("spiral: point winds beyond the representable range");
    double k = std::ceil((theta_star - base) / kTwoPi) - 1.0;
    if (k < 0.0) k = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
        const double theta = base + kTwoPi * k;
        const double outer = params_.g(theta);
        const double inner = params_.g(theta + kTwoPi);
        // Around theta ~ 1e16 the relative band width 2 pi / theta drops
        // under the double-precision spacing and consecutive curves coincide
        // bitwise; no representable radius can then be certified.
        if (!(inner < outer))
            throw domain_error("spiral: winding band is below double resolution at this radius");
        const bool below_outer = r < outer;
        const bool above_inner = inner <= r;
        if (below_outer && above_inner) return {r, theta};
        if (!below_outer) {
            if (k == 0.0) break;
            k -= 1.0;
        } else {
            k += 1.0;
        }
    }
    throw domain_error("spiral: could not certify a winding for the point");
}

}  // namespace gfd

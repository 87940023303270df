#include "core/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gfd {
namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

double frac(double x) { return x - std::floor(x); }

}  // namespace

std::pair<double, double> R2Sequence::at(std::uint64_t k) {
    // 1/a and 1/a^2 for the plastic number a = 1.3247...; an irrational
    // rotation pair whose joint orbit fills the unit square evenly.
    constexpr double kAlpha1 = 0.7548776662466927;
    constexpr double kAlpha2 = 0.5698402909980532;
    const double kd = static_cast<double>(k);
    return {frac(0.5 + kd * kAlpha1), frac(0.5 + kd * kAlpha2)};
}

InclusionReport inclusion_residual(const MapFamily& map, const PolarPoint& pt,
                                   const std::optional<Vec2>& y0, double n) {
    if (!(n > 0.0)) throw domain_error("inclusion: exponent n must be positive");
    const FieldSample s = map.sample(pt);
    InclusionReport out;
    out.point = pt;
    // n = 2 is the exact squared norm; other n go through pow once.
    out.lhs = (n == 2.0) ? s.op_norm_sq : std::pow(s.op_norm_sq, 0.5 * n);
    out.lhs_frob = (n == 2.0) ? s.df.frobenius_sq() : std::pow(s.df.frobenius_sq(), 0.5 * n);
    double weight = 1.0;
    if (y0) {
        const Vec2 d = s.f - *y0;
        const double dist_sq = d.x * d.x + d.y * d.y;
        weight = (n == 2.0) ? dist_sq : std::pow(dist_sq, 0.5 * n);
    }
    out.rhs = s.distortion * s.jacobian + weight * s.inhomogeneity;
    out.residual = out.lhs - out.rhs;
    return out;
}

InclusionScan inclusion_scan(const MapFamily& map, std::uint64_t samples, double margin,
                             const std::optional<Vec2>& y0, double n) {
    const std::vector<Region> regs = map.regions();
    if (regs.empty()) throw degenerate_error("inclusion scan: map declares no regions");
    InclusionScan out;
    out.worst_scaled = -std::numeric_limits<double>::infinity();
    const std::uint64_t nreg = regs.size();
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < nreg; ++i) {
        const std::uint64_t count = samples / nreg + (i < samples % nreg ? 1 : 0);
        for (std::uint64_t j = 0; j < count; ++j, ++k) {
            const auto [u, v] = R2Sequence::at(k);
            const PolarPoint pt = map.point_in_region(regs[i], u, v, margin);
            const InclusionReport rep = inclusion_residual(map, pt, y0, n);
            const double scaled = rep.residual / (1.0 + rep.lhs);
            if (scaled > out.worst_scaled) {
                out.worst_scaled = scaled;
                out.worst = rep;
            }
            ++out.samples;
        }
    }
    return out;
}

Mat2 fd_jacobian(const MapFamily& map, const PolarPoint& pt, double step, double arc) {
    if (!(step > 0.0)) throw domain_error("fd: step must be positive");
    if (!(step < pt.r)) throw domain_error("fd: step must be smaller than the radius");
    if (!(arc >= 0.0)) throw domain_error("fd: angular arc must be non-negative");
    const Region home = map.classify(pt);
    const double hr = step;
    const double ht = arc > 0.0 ? arc : step / pt.r;  // default: equal arc length
    const PolarPoint stencil[4] = {{pt.r + hr, pt.theta},
                                   {pt.r - hr, pt.theta},
                                   {pt.r, pt.theta + ht},
                                   {pt.r, pt.theta - ht}};
    for (const PolarPoint& q : stencil) {
        if (map.classify(q) != home)
            throw interface_error("fd: stencil crosses a region interface");
    }
    const Vec2 fr_p = map.eval_f(stencil[0]);
    const Vec2 fr_m = map.eval_f(stencil[1]);
    const Vec2 ft_p = map.eval_f(stencil[2]);
    const Vec2 ft_m = map.eval_f(stencil[3]);
    const double wr = 0.5 / hr;
    const double wt = 0.5 / (ht * pt.r);
    return {(fr_p.x - fr_m.x) * wr, (ft_p.x - ft_m.x) * wt,
            (fr_p.y - fr_m.y) * wr, (ft_p.y - ft_m.y) * wt};
}

double interface_gap(const MapFamily& map, const std::string& interface_id, double t,
                     double offset) {
    if (!(offset > 0.0 && offset <= 1.0))
        throw domain_error("interface gap: relative offset must lie in (0, 1]");
    const std::vector<InterfaceCurve> curves = map.interfaces();
    const InterfaceCurve* curve = nullptr;
    for (const InterfaceCurve& c : curves) {
        if (c.name == interface_id) {
            curve = &c;
            break;
        }
    }
    if (curve == nullptr)
        throw domain_error("interface gap: unknown interface \"" + interface_id + "\"");
    if (!(t >= curve->t_lo && t <= curve->t_hi))
        throw domain_error("interface gap: curve parameter outside the declared range");
    const auto gap_at = [&](double s) {
        const Vec2 plus = map.eval_f(curve->offset_point(t, +s));
        const Vec2 minus = map.eval_f(curve->offset_point(t, -s));
        return (plus - minus).norm();
    };
    // The one-sided fields are smooth up to the curve, so the measured gap is
    // a polynomial in the offset plus the true boundary mismatch.  Two levels
    // of Richardson elimination remove the linear and quadratic terms, which
    // matter where a region is strongly curved transversally (the fat end of
    // the spiral band); an O(offset^3) remainder is left.
    const double g1 = gap_at(offset);
    const double g2 = gap_at(0.5 * offset);
    const double g4 = gap_at(0.25 * offset);
    const double first = 2.0 * g2 - g1;
    const double second = 2.0 * g4 - g2;
    return second + (second - first) / 3.0;
}

BlowupWitness blowup_witness(const MapFamily& map, double height) {
    BlowupWitness out;
    out.radius = map.blowup_radius(height);
    out.min_abs_f = std::numeric_limits<double>::infinity();
    constexpr int kRadii = 12;
    constexpr int kAngles = 8;
    // Log-spaced shells spanning three decades strictly below the threshold;
    // the pullback factor keeps the shallowest shell clear of the threshold
    // circle itself, where |f| = height exactly.
    for (int i = 0; i < kRadii; ++i) {
        const double depth = 3.0 * static_cast<double>(i) / (kRadii - 1);
        const double radius = 0.999 * out.radius * std::pow(10.0, -depth);
        for (int j = 0; j < kAngles; ++j) {
            const double angle = -kPi + (static_cast<double>(j) + 0.5) * kTwoPi / kAngles;
            try {
                const Vec2 f = map.eval_f(map.chart_point(radius, angle));
                out.min_abs_f = std::min(out.min_abs_f, f.norm());
                ++out.samples;
            } catch (const interface_error&) {
                // A sample inside an interface guard band carries no blow-up
                // information; skip it and keep the shell.
            }
        }
    }
    if (out.samples == 0)
        throw degenerate_error("blow-up witness: every sample landed on an interface band");
    return out;
}

std::vector<ModulusSample> modulus_samples(const MapFamily& map,
                                           const std::vector<double>& radii) {
    if (map.discontinuous_at_origin())
        throw unsupported_error(map.name() +
                                ": modulus of continuity at 0 needs a map continuous there");
    const Vec2 f0 = map.origin_value();
    const double outer = map.outer_radius();
    const auto estimate = [&](double r, int na, int nr) {
        double sup = 0.0;
        for (int i = 1; i <= nr; ++i) {
            const double rho = r * static_cast<double>(i) / nr;
            for (int j = 0; j < na; ++j) {
                const double angle = static_cast<double>(j) * kTwoPi / na;
                const Vec2 f = map.eval_f(map.chart_point(rho, angle));
                sup = std::max(sup, (f - f0).norm());
            }
        }
        return sup;
    };
    std::vector<ModulusSample> out;
    out.reserve(radii.size());
    for (const double r : radii) {
        if (!(r > 0.0 && r < outer))
            throw domain_error("modulus: ball radius must lie inside the domain");
        ModulusSample ms;
        ms.r = r;
        // The doubled grid contains every coarse node (radii i/64 = 2i/128,
        // angles j/256 = 2j/512), so the refined sup can only grow.
        const double coarse = estimate(r, 256, 64);
        const double refined = estimate(r, 512, 128);
        ms.omega = refined;
        ms.refine_gap = refined - coarse;
        out.push_back(ms);
    }
    return out;
}

}  // namespace gfd

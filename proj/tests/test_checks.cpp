#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "core/checks.hpp"
#include "core/cusp.hpp"
#include "core/errors.hpp"
#include "core/presets.hpp"
#include "core/radial_maps.hpp"
#include "core/spiral.hpp"
#include "oracles.hpp"

using namespace gfd;

namespace {

double frob_rel_error(const Mat2& got, const Mat2& want) {
    const Mat2 diff = got - want;
    return std::sqrt(diff.frobenius_sq() / want.frobenius_sq());
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (static_cast<double>(n) * sxy - sx * sy) / (static_cast<double>(n) * sxx - sx * sx);
}

}  // namespace

TEST_CASE("low-discrepancy sequence fills the unit square evenly") {
    // Index 0 sits at the center; the next terms step by the two rotations.
    auto [u0, v0] = R2Sequence::at(0);
    CHECK(u0 == 0.5);
    CHECK(v0 == 0.5);
    auto [u1, v1] = R2Sequence::at(1);
    CHECK(u1 == doctest::Approx(0.2548776662466927).epsilon(1e-15));
    CHECK(v1 == doctest::Approx(0.0698402909980532).epsilon(1e-15));

    // Every term stays in [0,1)^2, the marginals average to 1/2, and an 8x8
    // box count stays near the uniform share -- the property the region scans
    // rely on.
    const int n = 4096;
    int boxes[8][8] = {};
    double mean_u = 0.0, mean_v = 0.0;
    for (int k = 0; k < n; ++k) {
        auto [u, v] = R2Sequence::at(static_cast<std::uint64_t>(k));
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        mean_u += u;
        mean_v += v;
        ++boxes[static_cast<int>(u * 8.0)][static_cast<int>(v * 8.0)];
    }
    CHECK(std::fabs(mean_u / n - 0.5) < 0.01);
    CHECK(std::fabs(mean_v / n - 0.5) < 0.01);
    for (const auto& row : boxes)
        for (const int count : row) {
            CHECK(count > 32);   // uniform share is 64
            CHECK(count < 96);
        }

    // Stateless indexing: recomputing any k reproduces the same pair.
    auto [ua, va] = R2Sequence::at(12345);
    auto [ub, vb] = R2Sequence::at(12345);
    CHECK(ua == ub);
    CHECK(va == vb);
}

TEST_CASE("pointwise inclusion reports: equality families and the weighted variant") {
    const CuspMap map(CuspParams::lp_duality());

    for (const Region reg : map.regions()) {
        const PolarPoint pt = map.point_in_region(reg, 0.37, 0.61, 0.05);
        const FieldSample s = map.sample(pt);
        const InclusionReport rep = inclusion_residual(map, pt);

        // The cusp construction realizes the inclusion with equality in every
        // sector, so the residual is pure rounding noise.
        CHECK(std::fabs(rep.residual) <= 1e-12 * (1.0 + rep.lhs));
        CHECK(rep.lhs == s.op_norm_sq);
        CHECK(rep.lhs_frob >= rep.lhs);  // Frobenius dominates the operator norm
        CHECK(rep.residual == rep.lhs - rep.rhs);

        // Centering the deviation weight at f(pt) zeroes the weighted term,
        // which shifts the residual up by exactly the inhomogeneity.
        const InclusionReport centered = inclusion_residual(map, pt, s.f);
        CHECK(centered.rhs == doctest::Approx(s.distortion * s.jacobian).epsilon(1e-14));
        CHECK(centered.residual ==
              doctest::Approx(rep.residual + s.inhomogeneity).epsilon(1e-12));

        // A unit-free offset of (0.3, -0.4) weighs the inhomogeneity by 1/4.
        const Vec2 shifted = {s.f.x + 0.3, s.f.y - 0.4};
        const InclusionReport weighted = inclusion_residual(map, pt, shifted);
        CHECK(weighted.rhs ==
              doctest::Approx(s.distortion * s.jacobian + 0.25 * s.inhomogeneity).epsilon(1e-14));
    }

    // Rank-one radial maps carry their whole norm in the inhomogeneity; the
    // identity carries it in the Jacobian.  Both give bitwise-zero residuals.
    const TripleLogMap tl;
    const PolarPoint deep = tl.point_in_region(Region::Disk, 0.7, 0.3, 0.05);
    CHECK(inclusion_residual(tl, deep).residual == 0.0);

    const IdentityMap id;
    for (const double n : {1.0, 2.0, 3.0, 4.0}) {
        const InclusionReport rep = inclusion_residual(id, {0.5, 1.0}, std::nullopt, n);
        CHECK(rep.lhs == 1.0);
        CHECK(rep.residual == 0.0);
    }
    CHECK_THROWS_AS(inclusion_residual(id, {0.5, 1.0}, std::nullopt, 0.0), domain_error);
    CHECK_THROWS_AS(inclusion_residual(id, {0.5, 1.0}, std::nullopt, -2.0), domain_error);
}

TEST_CASE("inclusion scans hold the distortion inequality on every preset") {
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        const FamilyPtr map = make_preset(name);
        const InclusionScan scan = inclusion_scan(*map, 10000);
        CHECK(scan.samples == 10000);
        CHECK(scan.worst_scaled <= 1e-9);
        CHECK(scan.worst.residual == scan.worst.lhs - scan.worst.rhs);

        // The cusp sectors achieve equality, so their worst case is rounding
        // noise on both sides of zero; the radial maps are bitwise exact.
        if (name.rfind("cusp", 0) == 0) CHECK(std::fabs(scan.worst_scaled) <= 1e-12);
        if (name == "triple-log" || name == "power-log") CHECK(scan.worst_scaled == 0.0);

        // Fixed visiting order makes the scan reproducible bit for bit.
        const InclusionScan again = inclusion_scan(*map, 10000);
        CHECK(again.worst_scaled == scan.worst_scaled);
        CHECK(again.worst.point.r == scan.worst.point.r);
        CHECK(again.worst.point.theta == scan.worst.point.theta);
    }
}

TEST_CASE("finite-difference derivative agrees with the closed forms") {
    const CuspMap cusp(CuspParams::lp_duality());

    // Sector A1, step 1e-7 of the radius: second-order stencil against the
    // closed-form matrix, then once more at half step with extrapolation.
    const PolarPoint pt = cusp.point_in_region(Region::CuspA1, 0.3, 0.7, 0.2);
    const Mat2 want = cusp.sample(pt).df;
    const double step = 1e-7 * pt.r;
    const Mat2 coarse = fd_jacobian(cusp, pt, step);
    const Mat2 fine = fd_jacobian(cusp, pt, 0.5 * step);
    CHECK(frob_rel_error(coarse, want) <= 1e-6);
    const Mat2 extrap = {(4.0 * fine.a - coarse.a) / 3.0, (4.0 * fine.b - coarse.b) / 3.0,
                         (4.0 * fine.c - coarse.c) / 3.0, (4.0 * fine.d - coarse.d) / 3.0};
    CHECK(frob_rel_error(extrap, want) <= 1e-6);

    // Spiral points, with the scalar step tied to the safe stencil widths.
    const SpiralMap spiral(SpiralParams::bounded_sigma());
    for (const Region reg : {Region::SpiralA, Region::SpiralB}) {
        const PolarPoint sp = spiral.point_in_region(reg, 0.05, 0.5, 0.25);
        const FdScales sc = spiral.fd_scales(sp);
        const double sstep = 0.25 * std::min(sc.dr, sc.dtheta * sp.r);
        CHECK(frob_rel_error(fd_jacobian(spiral, sp, sstep), spiral.sample(sp).df) <= 1e-5);
    }

    // The triple-log map is rank one: the angular column vanishes identically,
    // so the finite-difference Jacobian determinant is exactly zero.
    const TripleLogMap tl;
    for (double u : {0.1, 0.5, 0.9}) {
        const PolarPoint dp = tl.point_in_region(Region::Disk, u, 0.3, 0.1);
        const Mat2 fd = fd_jacobian(tl, dp, 1e-7 * dp.r);
        CHECK(fd.b == 0.0);
        CHECK(fd.d == 0.0);
        CHECK(fd.det() == 0.0);
        CHECK(std::fabs(fd.det()) <= 1e-8);
        CHECK(fd.a == doctest::Approx(tl.slope(dp.r)).epsilon(1e-6));
    }

    // Identity fixture at theta = 0: the polar-frame derivative is the
    // identity matrix up to the angular truncation of order (step/r)^2 and
    // the radial rounding of order ulp(r) / step.
    const IdentityMap id;
    const Mat2 fd_id = fd_jacobian(id, {0.5, 0.0}, 1e-7 * 0.5);
    CHECK(fd_id.a == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fd_id.d == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::fabs(fd_id.b) <= 1e-15);
    CHECK(fd_id.c == 0.0);

    // Step validation and interface detection.
    CHECK_THROWS_AS(fd_jacobian(id, {0.5, 0.0}, 0.0), domain_error);
    CHECK_THROWS_AS(fd_jacobian(id, {0.5, 0.0}, -1e-3), domain_error);
    CHECK_THROWS_AS(fd_jacobian(id, {0.5, 0.0}, 0.6), domain_error);
    // A point near the sector edge with an angular step wide enough to cross:
    // the stencil reaches the neighboring sector.
    {
        const double r = 1e-3;
        const double g = CuspParams::lp_duality().gamma(r);
        const PolarPoint near_edge = {r, 1.1 * g};
        CHECK(cusp.classify(near_edge) == Region::CuspA1);
        CHECK_THROWS_AS(fd_jacobian(cusp, near_edge, 0.2 * g * r), interface_error);
    }
    // A radial step that exits the domain through the outer rim.
    {
        const PolarPoint near_rim = {cusp.outer_radius() * 0.9999, 1.5};
        CHECK_THROWS_AS(fd_jacobian(cusp, near_rim, 1e-3 * near_rim.r), domain_error);
    }
}

TEST_CASE("interface gaps extrapolate to zero on every declared curve") {
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        const FamilyPtr map = make_preset(name);
        for (const InterfaceCurve& curve : map->interfaces()) {
            CAPTURE(curve.name);
            for (int j = 0; j <= 8; ++j) {
                const double w = static_cast<double>(j) / 8.0;
                const double t = curve.log_in_t
                                     ? curve.t_lo * std::pow(curve.t_hi / curve.t_lo, w)
                                     : curve.t_lo + w * (curve.t_hi - curve.t_lo);
                CAPTURE(t);
                CHECK(std::fabs(interface_gap(*map, curve.name, t, 0.01)) <= 1e-8);
            }
        }
    }

    const CuspMap cusp(CuspParams::lp_duality());
    const double t_ok = cusp.outer_radius() * 1e-3;
    CHECK_THROWS_AS(interface_gap(cusp, "no-such-curve", t_ok, 0.5), domain_error);
    CHECK_THROWS_AS(interface_gap(cusp, "theta=+gamma", t_ok, 0.0), domain_error);
    CHECK_THROWS_AS(interface_gap(cusp, "theta=+gamma", t_ok, -0.5), domain_error);
    CHECK_THROWS_AS(interface_gap(cusp, "theta=+gamma", t_ok, 1.5), domain_error);
    CHECK_THROWS_AS(interface_gap(cusp, "theta=+gamma", cusp.outer_radius() * 2.0, 0.5),
                    domain_error);
}

TEST_CASE("blow-up witnesses certify the divergence at the origin") {
    const CuspMap cusp(CuspParams::lp_duality());
    const BlowupWitness c2 = blowup_witness(cusp, 2.0);
    CHECK(c2.radius == doctest::Approx(6.17978989331094e-4).epsilon(1e-12));
    CHECK(c2.samples == 96);
    CHECK(c2.min_abs_f >= 2.0);
    const BlowupWitness c1 = blowup_witness(cusp, 1.0);
    const BlowupWitness c4 = blowup_witness(cusp, 4.0);
    CHECK(c1.min_abs_f >= 1.0);
    CHECK(c4.min_abs_f >= 4.0);
    CHECK(c1.radius >= c2.radius);  // antitone in the height
    CHECK(c2.radius >= c4.radius);

    // The shrinking-sector variant caps the witness at its own outer radius.
    const CuspMap ls(CuspParams::sigma_ls());
    const BlowupWitness l1 = blowup_witness(ls, 1.0);
    CHECK(l1.radius == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
    CHECK(l1.min_abs_f >= 1.0);

    // Spiral: the imaginary part grows along the windings; the witness needs
    // the chart unwinding to place cartesian sample points.
    const SpiralMap spiral(SpiralParams::bounded_sigma());
    const BlowupWitness s2 = blowup_witness(spiral, 2.0);
    CHECK(s2.radius == doctest::Approx(8.32672043447348e-5).epsilon(1e-12));
    CHECK(s2.samples == 96);
    CHECK(s2.min_abs_f >= 2.0);
    // Height 4 needs windings near 5e23, where the relative band width
    // 2 pi / theta sits far below the double-precision spacing: the closed
    // form still orders the radii, but no point below the threshold is
    // representable, so sampling reports the resolution limit.
    CHECK(spiral.blowup_radius(4.0) < s2.radius);
    CHECK_THROWS_AS(blowup_witness(spiral, 4.0), domain_error);
    const BlowupWitness s3 = blowup_witness(spiral, 3.0);
    CHECK(s3.radius < s2.radius);
    CHECK(s3.min_abs_f >= 3.0);

    // Triple-log blows up so slowly that height 2 underflows the radius.
    const TripleLogMap tl;
    const BlowupWitness t1 = blowup_witness(tl, 1.0);
    CHECK(t1.radius == doctest::Approx(3.97303443855662e-6).epsilon(1e-9));
    CHECK(t1.min_abs_f >= 1.0);
    CHECK_THROWS_AS(blowup_witness(tl, 2.0), domain_error);

    CHECK_THROWS_AS(blowup_witness(PowerLogMap(1.0), 1.0), unsupported_error);
    CHECK_THROWS_AS(blowup_witness(cusp, 0.0), domain_error);
    CHECK_THROWS_AS(blowup_witness(cusp, -1.0), domain_error);
}

TEST_CASE("modulus of continuity matches the closed forms at the origin") {
    // alpha = 2 at r = e^-10: the sup sits on the sphere, value 1/100.
    {
        const PowerLogMap two(2.0);
        const auto samples = modulus_samples(two, {std::exp(-10.0)});
        REQUIRE(samples.size() == 1);
        CHECK(samples[0].omega == doctest::Approx(0.01).epsilon(1e-13));
        CHECK(samples[0].refine_gap == 0.0);  // both grids include the sphere
    }

    // alpha = 1: omega(r) = 1 / log(1/r) along a shrinking radii list.
    {
        const PowerLogMap one(1.0);
        const std::vector<double> radii = {std::exp(-5.0), std::exp(-10.0), std::exp(-20.0),
                                           std::exp(-40.0)};
        const auto samples = modulus_samples(one, radii);
        REQUIRE(samples.size() == radii.size());
        for (std::size_t i = 0; i < radii.size(); ++i) {
            CHECK(samples[i].r == radii[i]);
            CHECK(samples[i].omega ==
                  doctest::Approx(1.0 / std::log(1.0 / radii[i])).epsilon(1e-13));
            CHECK(samples[i].refine_gap >= 0.0);
        }
        for (std::size_t i = 1; i < samples.size(); ++i)
            CHECK(samples[i].omega < samples[i - 1].omega);  // nested balls
    }

    // The identity has omega(r) = r exactly.
    {
        const IdentityMap id;
        const auto samples = modulus_samples(id, {0.3, 0.6});
        CHECK(samples[0].omega == doctest::Approx(0.3).epsilon(1e-13));
        CHECK(samples[1].omega == doctest::Approx(0.6).epsilon(1e-13));
        CHECK(samples[0].omega <= samples[1].omega);
    }

    // Fitting log omega against log log(1/r) recovers each decay exponent to
    // far better than the 5% the acceptance gate asks for.
    for (const double alpha : {0.5, 1.0, 2.0}) {
        CAPTURE(alpha);
        const PowerLogMap map(alpha);
        std::vector<double> radii, log_l, log_omega;
        for (const double L : {5.0, 10.0, 20.0, 40.0}) radii.push_back(std::exp(-L));
        const auto samples = modulus_samples(map, radii);
        for (const ModulusSample& ms : samples) {
            log_l.push_back(std::log(std::log(1.0 / ms.r)));
            log_omega.push_back(std::log(ms.omega));
        }
        const double alpha_hat = -fit_slope(log_l, log_omega);
        CHECK(std::fabs(alpha_hat - alpha) <= 0.05 * alpha);
        CHECK(std::fabs(alpha_hat - alpha) <= 1e-10);  // sphere samples are exact
    }

    // Domain validation and the continuity precondition.
    const PowerLogMap one(1.0);
    CHECK_THROWS_AS(modulus_samples(one, {0.5}), domain_error);  // outside the disk
    CHECK_THROWS_AS(modulus_samples(one, {0.0}), domain_error);
    CHECK_THROWS_AS(modulus_samples(one, {-0.1}), domain_error);
    CHECK_THROWS_AS(modulus_samples(TripleLogMap(), {1e-3}), unsupported_error);
    CHECK_THROWS_AS(modulus_samples(CuspMap(CuspParams::lp_duality()), {1e-3}),
                    unsupported_error);
}

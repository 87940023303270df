#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/cusp.hpp"
#include "core/errors.hpp"
#include "oracles.hpp"

using namespace gfd;
namespace to = testing_oracles;

namespace {
const double kPi = 3.141592653589793238462643383279502884;

std::vector<CuspMap> all_regimes() {
    std::vector<CuspMap> maps;
    maps.emplace_back(CuspParams::lp_duality(2.0, 0.5));
    maps.emplace_back(CuspParams::sigma_ls(2.0));
    maps.emplace_back(CuspParams::exp_k(1.5));
    return maps;
}
}  // namespace

TEST_CASE("cusp factories and parameter validation") {
    CHECK(CuspParams::lp_duality(2.0, 0.5).r0 == doctest::Approx(std::exp(-std::exp(1.0))));
    CHECK(CuspParams::sigma_ls(2.0).r0 == doctest::Approx(std::exp(-4.0)));
    CHECK(CuspParams::exp_k(1.5).nu == doctest::Approx(1.75));  // (mu + 2) / 2
    CHECK_THROWS_AS(CuspParams::lp_duality(2.0, 1.0), domain_error);
    CHECK_THROWS_AS(CuspParams::lp_duality(0.5, 0.5), domain_error);
    CHECK_THROWS_AS(CuspParams::sigma_ls(1.0), domain_error);
    CHECK_THROWS_AS(CuspParams::exp_k(1.5, 2.5), domain_error);
}

TEST_CASE("cusp first coordinate approaches -1 at the outer rim of the e^-e disk") {
    CuspMap map(CuspParams::lp_duality(2.0, 0.5));
    const double r = std::exp(-std::exp(1.0)) * (1.0 - 1e-10);
    const Vec2 f = map.eval_f({r, 0.5 * kPi});
    CHECK(f.x == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("cusp region-A Jacobian closed form h/(r^2 log(1/r))") {
    CuspMap map(CuspParams::lp_duality(2.0, 0.5));
    // Pure formula check at r = 1/e: h/(r^2 L) = e^-1 / e^-2 = e.
    CHECK(map.jacobian_A(std::exp(-1.0)) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    // And consistency with the sampled field at an in-domain point.
    const PolarPoint pt{1e-4, 1.0};
    const FieldSample s = map.sample(pt);
    CHECK(s.region == Region::CuspA1);
    CHECK(s.jacobian == doctest::Approx(map.jacobian_A(pt.r)).epsilon(1e-14));
    CHECK(s.jacobian == doctest::Approx(s.df.det()).epsilon(1e-12));
}

TEST_CASE("cusp classification covers the four sectors and their interfaces") {
    CuspMap map(CuspParams::lp_duality(2.0, 0.5));
    const double r = 1e-3;
    const double g = map.params().gamma(r);
    CHECK(map.classify({r, 0.0}) == Region::CuspB1);
    CHECK(map.classify({r, 0.5 * g}) == Region::CuspB1);
    CHECK(map.classify({r, 2.0 * g}) == Region::CuspA1);
    CHECK(map.classify({r, -2.0 * g}) == Region::CuspA2);
    CHECK(map.classify({r, kPi}) == Region::CuspB2);
    CHECK(map.classify({r, -kPi + 0.1 * g}) == Region::CuspB2);
    CHECK_THROWS_AS(map.classify({r, g}), interface_error);
    CHECK_THROWS_AS(map.classify({r, -(kPi - g)}), interface_error);
    CHECK_THROWS_AS(map.classify({map.params().r0 * 1.5, 0.0}), domain_error);
    CHECK_THROWS_AS(map.classify({0.0, 0.0}), domain_error);
}

TEST_CASE("cusp antipodal symmetry f(z) = f(-z)") {
    for (const CuspMap& map : all_regimes()) {
        for (double u = 0.05; u < 1.0; u += 0.07) {
            // Starting from the antipodal sectors, folding by the exact +-pi
            // shift lands on the very double the implementation evaluates at,
            // so the symmetry is bitwise there.
            for (Region reg : {Region::CuspA2, Region::CuspB2}) {
                const PolarPoint pt = map.point_in_region(reg, u, u, 1e-3);
                const double folded = (pt.theta > 0.0) ? pt.theta - kPi : pt.theta + kPi;
                const Vec2 a = map.eval_f(pt);
                const Vec2 b = map.eval_f({pt.r, folded});
                CHECK(a.x == b.x);
                CHECK(a.y == b.y);
            }
            // Folding the other way (small principal angle +- pi) rounds the
            // angle at ulp(pi); allow that times the angular sensitivity of f2.
            for (Region reg : {Region::CuspA1, Region::CuspB1}) {
                const PolarPoint pt = map.point_in_region(reg, u, u, 1e-3);
                const PolarPoint anti{pt.r, pt.theta - kPi};
                const Vec2 a = map.eval_f(pt);
                const Vec2 b = map.eval_f(anti);
                const double sens =
                    map.params().h(pt.r) * (1.0 + kPi / map.params().gamma(pt.r));
                CHECK(a.x == b.x);
                CHECK(std::fabs(a.y - b.y) <= 1e-12 * sens);
            }
        }
    }
}

TEST_CASE("cusp one-sided limits agree across the theta = +-gamma interfaces") {
    // f2 is linear in theta on each sector, so 2 f(c/2) - f(c) over offsets
    // c*gamma recovers the one-sided boundary value exactly; both sides must
    // land on the same limit.
    for (const CuspMap& map : all_regimes()) {
        for (double r : {0.3 * map.params().r0, 1e-2 * map.params().r0,
                         1e-6 * map.params().r0}) {
            const double g = map.params().gamma(r);
            const double h = map.params().h(r);
            auto limit_from = [&](double base, double dir) {
                auto at = [&](double c) { return map.eval_f({r, base + dir * c * g}).y; };
                const double c = 1e-2;
                return 2.0 * at(0.5 * c) - at(c);
            };
            // theta = +gamma: A1 above, B1 below, shared value h*gamma.
            CHECK(limit_from(g, +1.0) == doctest::Approx(h * g).epsilon(1e-9));
            CHECK(limit_from(g, -1.0) == doctest::Approx(h * g).epsilon(1e-9));
            // theta = -gamma: B1 above, A2 below, shared value h*(pi - gamma).
            CHECK(limit_from(-g, +1.0) == doctest::Approx(h * (kPi - g)).epsilon(1e-9));
            CHECK(limit_from(-g, -1.0) == doctest::Approx(h * (kPi - g)).epsilon(1e-9));
            // theta = pi - gamma: A1 below, B2 above, shared value h*(pi - gamma).
            CHECK(limit_from(kPi - g, -1.0) == doctest::Approx(h * (kPi - g)).epsilon(1e-9));
            CHECK(limit_from(kPi - g, +1.0) == doctest::Approx(h * (kPi - g)).epsilon(1e-9));
        }
    }
}

TEST_CASE("cusp closed-form derivative matrices match finite differences") {
    for (const CuspMap& map : all_regimes()) {
        for (Region reg : map.regions()) {
            for (double u : {0.15, 0.5, 0.85}) {
                const PolarPoint pt = map.point_in_region(reg, u, 0.4, 0.05);
                const FdScales sc = map.fd_scales(pt);
                // Difference in the folded coordinate: near theta = pi the raw
                // angle cannot resolve steps smaller than ulp(pi), while the
                // folded twin has the same derivative matrix by symmetry.
                PolarPoint rep = pt;
                if (reg == Region::CuspA2 || reg == Region::CuspB2)
                    rep.theta = (pt.theta > 0.0) ? pt.theta - kPi : pt.theta + kPi;
                const Mat2 fd = to::fd_polar_derivative(map, rep, 0.02 * sc.dr, 0.02 * sc.dtheta);
                const Mat2 an = map.sample(pt).df;
                const double scale = std::sqrt(an.frobenius_sq());
                CHECK(std::fabs(fd.a - an.a) <= 1e-7 * scale);
                CHECK(std::fabs(fd.b - an.b) <= 1e-7 * scale);
                CHECK(std::fabs(fd.c - an.c) <= 1e-7 * scale);
                CHECK(std::fabs(fd.d - an.d) <= 1e-7 * scale);
            }
        }
    }
}

TEST_CASE("cusp Jacobian signs and inclusion equality") {
    for (const CuspMap& map : all_regimes()) {
        for (Region reg : map.regions()) {
            for (double u : {0.1, 0.45, 0.8}) {
                const FieldSample s = map.sample(map.point_in_region(reg, u, 0.3, 1e-4));
                const bool in_A = (reg == Region::CuspA1 || reg == Region::CuspA2);
                if (in_A) {
                    CHECK(s.jacobian > 0.0);
                    CHECK(s.inhomogeneity == 0.0);
                } else {
                    CHECK(s.jacobian < 0.0);
                    CHECK(s.inhomogeneity == doctest::Approx(2.0 * s.op_norm_sq));
                }
                CHECK(s.distortion >= 1.0 - 1e-12);
                // |Df|^2 = K * J + Sigma holds with equality on every sector.
                const double resid =
                    s.op_norm_sq - (s.distortion * s.jacobian + s.inhomogeneity);
                CHECK(std::fabs(resid) <= 1e-9 * (1.0 + s.op_norm_sq));
            }
        }
    }
}

TEST_CASE("cusp gamma is increasing and stays below pi/2 on every regime") {
    for (const CuspMap& map : all_regimes()) {
        double prev = 0.0;
        for (int i = 1; i <= 60; ++i) {
            const double r = map.params().r0 * std::pow(1e-12, 1.0 - i / 60.0) * (1 - 1e-9);
            const double g = map.params().gamma(r);
            CHECK(g > prev);
            CHECK(g < 0.5 * kPi);
            prev = g;
        }
    }
}

TEST_CASE("cusp radial profile derivatives match finite differences") {
    for (const CuspMap& map : all_regimes()) {
        const CuspParams& q = map.params();
        for (double r : {0.5 * q.r0, 1e-3 * q.r0, 1e-8 * q.r0}) {
            auto h = [&](double x) { return q.h(x); };
            auto g = [&](double x) { return q.gamma(x); };
            auto hg = [&](double x) { return q.h(x) / q.gamma(x); };
            const double step = 1e-5 * r;
            CHECK(q.dh(r) == doctest::Approx(to::central_diff(h, r, step)).epsilon(1e-8));
            CHECK(q.dgamma(r) == doctest::Approx(to::central_diff(g, r, step)).epsilon(1e-8));
            CHECK(q.d_h_over_gamma(r) ==
                  doctest::Approx(to::central_diff(hg, r, step)).epsilon(1e-8));
        }
    }
}

TEST_CASE("cusp blow-up radius witnesses log log(1/r) growth") {
    CuspMap map(CuspParams::lp_duality(2.0, 0.5));
    CHECK(map.blowup_radius(2.0) == doctest::Approx(6.17978989331094e-4).epsilon(1e-12));
    for (double M : {1.0, 2.0, 4.0}) {
        const double rM = map.blowup_radius(M);
        CHECK(rM <= map.params().r0);
        for (double u : {0.9, 0.5, 0.1}) {
            const PolarPoint pt{rM * u, 0.3};
            const Vec2 f = map.eval_f(pt);
            CHECK(f.norm() >= M);
        }
    }
    // Antitone in the requested height.
    CHECK(map.blowup_radius(4.0) < map.blowup_radius(2.0));
}

TEST_CASE("cusp exp-k distortion grows like log^{nu-1}(1/r)") {
    CuspMap map(CuspParams::exp_k(1.5));  // nu = 1.75
    const double nu = map.params().nu;
    // Pointwise ratio K / L^{nu-1} stays bounded on a deep log-grid.
    for (double L : {5.0, 10.0, 20.0, 28.0}) {
        const PolarPoint pt{std::exp(-L), 0.5 * kPi};
        const double K = map.sample(pt).distortion;
        const double ratio = K / std::pow(L, nu - 1.0);
        CHECK(ratio > 0.5);
        CHECK(ratio < 2.0);
    }
    // The scaled-matrix evaluation agrees with the direct path at moderate
    // depth and extends beyond the range where r is representable.
    for (double L : {10.0, 25.0}) {
        const PolarPoint pt{std::exp(-L), 0.5 * kPi};
        const double direct = map.sample(pt).distortion;
        // theta = pi/2 sits at fraction (pi/2 - gamma) / (pi - 2 gamma) = 1/2.
        const double deep = map.distortion_at_depth(L, 0.5, true);
        CHECK(deep == doctest::Approx(direct).epsilon(1e-10));
    }
    const double K_deep = map.distortion_at_depth(1e6, 0.5, true);
    CHECK(K_deep / std::pow(1e6, nu - 1.0) == doctest::Approx(1.0).epsilon(0.05));
    // Region B distortion stays bounded at depth.
    CHECK(map.distortion_at_depth(1e6, 0.3, false) < 10.0);
}

#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "core/errors.hpp"
#include "core/lemmas.hpp"
#include "core/presets.hpp"
#include "core/radial_maps.hpp"
#include "oracles.hpp"

using namespace gfd;

namespace {

constexpr double kE = 2.718281828459045235360287471353;

// Minimal constant-map fixture: f is constant, so every derivative quantity
// vanishes and the distortion is the trivial K = 1.
class ConstantMap final : public MapFamily {
public:
    std::string name() const override { return "constant"; }
    Vec2 eval_f(const PolarPoint&) const override { return {0.3, -0.2}; }
    FieldSample sample(const PolarPoint& pt) const override {
        FieldSample s;
        s.f = eval_f(pt);
        s.distortion = 1.0;
        s.region = Region::Disk;
        return s;
    }
    Region classify(const PolarPoint&) const override { return Region::Disk; }
    std::vector<Region> regions() const override { return {Region::Disk}; }
    PolarPoint point_in_region(Region, double u, double v, double margin) const override {
        return {margin + (1.0 - 2.0 * margin) * u, (2.0 * v - 1.0) * 3.0};
    }
    FdScales fd_scales(const PolarPoint& pt) const override { return {0.25 * pt.r, 0.5}; }
    std::vector<InterfaceCurve> interfaces() const override { return {}; }
    bool discontinuous_at_origin() const override { return false; }
    Vec2 origin_value() const override { return {0.3, -0.2}; }
    double outer_radius() const override { return 1.0; }
};

}  // namespace

TEST_CASE("exponential Young constant matches its closed form") {
    // kappa = lambda = 1: A = (e/2)^2, C = 2|log(1/A)| + 4.
    const double c11 = exp_young_constant(1.0, 1.0);
    CHECK(c11 == doctest::Approx(5.227411277760218).epsilon(1e-13));

    // The underlying bound exp(t) >= A t^(2 kappa) is sharp at t = 2 kappa.
    for (double kappa : {0.5, 1.0, 2.0}) {
        const double a_const = std::pow(kE / (2.0 * kappa), 2.0 * kappa);
        const double t_star = 2.0 * kappa;
        CHECK(std::exp(t_star) ==
              doctest::Approx(a_const * std::pow(t_star, 2.0 * kappa)).epsilon(1e-12));
        for (double t : {0.1, 0.7, 1.9, 3.0, 8.0})
            CHECK(std::exp(t) >= a_const * std::pow(t, 2.0 * kappa) * (1.0 - 1e-12));
    }

    CHECK_THROWS_AS(exp_young_constant(0.0, 1.0), domain_error);
    CHECK_THROWS_AS(exp_young_constant(1.0, -2.0), domain_error);
}

TEST_CASE("exponential Young inequality survives a randomized stress suite") {
    const ExpYoungSuiteReport report = exp_young_suite(20260822ULL, 100000);
    CHECK(report.cases == 100000);
    CHECK(report.violations == 0);
    CHECK(report.min_relative_margin > 0.0);

    // A different seed draws different corners; the inequality is unconditional.
    const ExpYoungSuiteReport other = exp_young_suite(7ULL, 20000);
    CHECK(other.violations == 0);

    // Degenerate corner a = 0: the exponential term alone dominates.
    const double c = exp_young_constant(0.5, 2.0);
    CHECK(0.0 < std::exp(0.0) + c * 5.0 * std::pow(std::log(kE + 5.0), 0.5));
}

TEST_CASE("differential inequality bound is exact on the equality solution") {
    // Psi = r, Gamma = 0: the equality ODE solves to Phi = S (r/R)^(1/A) and
    // the conclusion bound collapses onto Phi itself.
    DiffIneqInstance inst;
    inst.A = 2.0;
    inst.R = 1.0;
    inst.S = 3.0;
    inst.psi = [](double r) { return r; };
    inst.dpsi = [](double) { return 1.0; };
    inst.gamma = [](double) { return 0.0; };
    inst.dgamma = [](double) { return 0.0; };
    inst.phi = [&](double r) { return inst.S * std::sqrt(r / inst.R); };
    inst.dphi = [&](double r) { return 0.5 * inst.S / std::sqrt(r * inst.R); };

    const DiffIneqReport report = check_diff_ineq(inst, 48);
    CHECK(report.hypothesis_ok);
    CHECK(std::fabs(report.worst_hypothesis_excess) <= 1e-10);
    CHECK(report.constant == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::fabs(report.worst_excess) <= 1e-9);
}

TEST_CASE("differential inequality handles trivial and violated hypotheses") {
    DiffIneqInstance inst;
    inst.A = 1.5;
    inst.R = 1.0;
    inst.S = 1.0;
    inst.psi = [](double r) { return r; };
    inst.dpsi = [](double) { return 1.0; };
    inst.gamma = [](double) { return 0.0; };
    inst.dgamma = [](double) { return 0.0; };

    SUBCASE("identically zero solution meets the bound") {
        inst.phi = [](double) { return 0.0; };
        inst.dphi = [](double) { return 0.0; };
        const DiffIneqReport report = check_diff_ineq(inst, 32);
        CHECK(report.hypothesis_ok);
        CHECK(report.worst_excess < 0.0);
    }

    SUBCASE("a too-small A breaks the hypothesis and is reported, not thrown") {
        inst.A = 0.5;
        inst.phi = [](double r) { return r; };
        inst.dphi = [](double) { return 1.0; };
        const DiffIneqReport report = check_diff_ineq(inst, 32);
        CHECK_FALSE(report.hypothesis_ok);
        CHECK(report.worst_hypothesis_excess > 0.0);
    }

    SUBCASE("decreasing Phi is rejected") {
        inst.phi = [](double r) { return 1.0 - r; };
        inst.dphi = [](double) { return -1.0; };
        CHECK_THROWS_AS(check_diff_ineq(inst, 32), domain_error);
    }

    SUBCASE("S below Gamma(R) is rejected") {
        inst.phi = [](double) { return 0.0; };
        inst.dphi = [](double) { return 0.0; };
        inst.gamma = [](double r) { return 10.0 * r; };
        inst.dgamma = [](double) { return 10.0; };
        CHECK_THROWS_AS(check_diff_ineq(inst, 32), domain_error);
    }

    SUBCASE("coarse grids are rejected") {
        inst.phi = [](double) { return 0.0; };
        inst.dphi = [](double) { return 0.0; };
        CHECK_THROWS_AS(check_diff_ineq(inst, 4), domain_error);
    }
}

TEST_CASE("randomized differential-inequality instances meet the bound") {
    for (std::uint64_t k = 1; k <= 20; ++k) {
        const DiffIneqInstance inst = make_diff_ineq_instance(1000 * k + 7);
        const DiffIneqReport report = check_diff_ineq(inst, 64);
        CAPTURE(k);
        CHECK(report.hypothesis_ok);
        CHECK(report.constant >= 1.0);
        CHECK(report.worst_excess <= 1e-8 * (1.0 + inst.S));
    }
}

TEST_CASE("triple-Jensen bound holds for a constant profile") {
    TripleJensenInstance inst;
    inst.n = 2;
    inst.lambda = 1.0;
    inst.k_profile = [](double) { return 1.0; };
    inst.domain_radius = 1.0;
    inst.R = 0.9;
    inst.r = 1e-6;

    const TripleJensenReport report = triple_jensen_check(inst);
    // C = int_0^1 e * s ds = e/2, and the admissible limit is sqrt(C e).
    CHECK(report.c_constant == doctest::Approx(0.5 * kE).epsilon(1e-10));
    CHECK(report.r0 == doctest::Approx(kE / std::sqrt(2.0)).epsilon(1e-10));
    // For K = 1 the left side is exactly log(R/r).
    CHECK(report.lhs == doctest::Approx(std::log(inst.R / inst.r)).epsilon(1e-10));
    CHECK(report.margin >= -1e-6);

    // The margin persists up to the inner-radius boundary r -> R/e^3.
    inst.r = 0.9999 * inst.R * std::exp(-3.0);
    CHECK(triple_jensen_check(inst).margin >= -1e-6);
}

TEST_CASE("triple-Jensen bound holds for a logarithmic profile") {
    TripleJensenInstance inst;
    inst.n = 2;
    inst.lambda = 1.0;
    inst.k_profile = [](double s) { return std::log(1.0 / s); };
    inst.domain_radius = 1.0;
    inst.R = 0.8;
    inst.r = 1e-5;

    const TripleJensenReport report = triple_jensen_check(inst);
    // exp(Ktilde) = 1/s on (0, 1), so C = int_0^1 ds = 1.
    CHECK(report.c_constant == doctest::Approx(1.0).epsilon(1e-9));
    // LHS = int ds / (s log(1/s)) = log log(1/r) - log log(1/R).
    const double closed =
        std::log(std::log(1.0 / inst.r)) - std::log(std::log(1.0 / inst.R));
    CHECK(report.lhs == doctest::Approx(closed).epsilon(1e-9));
    CHECK(report.margin >= -1e-6);
}

TEST_CASE("triple-Jensen preconditions are enforced") {
    TripleJensenInstance inst;
    inst.n = 2;
    inst.lambda = 1.0;
    inst.k_profile = [](double) { return 1.0; };
    inst.domain_radius = 1.0;
    inst.R = 0.9;
    inst.r = 1e-4;

    SUBCASE("inner radius must stay below R/e^3") {
        inst.r = 1.01 * inst.R * std::exp(-3.0);
        CHECK_THROWS_AS(triple_jensen_check(inst), domain_error);
    }
    SUBCASE("outer radius must stay below the admissible limit") {
        inst.domain_radius = 3.0;  // C grows, but R0 = (Ce)^(1/2) caps R first
        inst.R = 2.9;
        // For the unit-constant profile on radius 3: C = e * 9/2, R0 = sqrt(Ce).
        const double r0 = std::sqrt(0.5 * 9.0 * kE * kE);
        REQUIRE(inst.R < inst.domain_radius);
        if (inst.R >= r0) {
            CHECK_THROWS_AS(triple_jensen_check(inst), domain_error);
        } else {
            CHECK(triple_jensen_check(inst).margin >= -1e-6);
        }
    }
    SUBCASE("outer radius must stay inside the domain") {
        inst.R = 1.5;
        CHECK_THROWS_AS(triple_jensen_check(inst), domain_error);
    }
    SUBCASE("profile handle is required") {
        inst.k_profile = nullptr;
        CHECK_THROWS_AS(triple_jensen_check(inst), domain_error);
    }
    SUBCASE("lambda must be positive") {
        inst.lambda = 0.0;
        CHECK_THROWS_AS(triple_jensen_check(inst), domain_error);
    }
}

TEST_CASE("reverse Hölder ratio on degenerate and identity fixtures") {
    const std::vector<Vec2> centers{{0.4, 0.1}, {-0.3, 0.35}};
    const std::vector<double> widths{0.05, 0.04};

    ConstantMap constant;
    const ReverseHolderReport flat = reverse_holder_ratio(constant, centers, widths);
    CHECK(flat.max_ratio == 0.0);

    IdentityMap identity;
    const ReverseHolderReport id = reverse_holder_ratio(identity, centers, widths);
    // |Df| = K = 1 and Sigma = 0 make every average 1: the ratio is exactly 1.
    CHECK(id.k_sup == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.max_ratio == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(id.max_ratio <= 1.5);
}

TEST_CASE("reverse Hölder ratio is stable on a cusp annulus") {
    auto cusp = make_preset("cusp-lp-duality", {});
    std::vector<Vec2> centers;
    std::vector<double> widths;
    for (double angle : {0.3, 1.4, 2.4, -2.0}) {
        centers.push_back({0.03 * std::cos(angle), 0.03 * std::sin(angle)});
        widths.push_back(0.004);
    }
    const ReverseHolderReport base = reverse_holder_ratio(*cusp, centers, widths, 24);
    const ReverseHolderReport fine = reverse_holder_ratio(*cusp, centers, widths, 48);
    REQUIRE(base.ratios.size() == fine.ratios.size());
    for (std::size_t i = 0; i < base.ratios.size(); ++i) {
        CAPTURE(i);
        CHECK(base.ratios[i] > 0.0);
        CHECK(std::isfinite(base.ratios[i]));
        CHECK(fine.ratios[i] == doctest::Approx(base.ratios[i]).epsilon(0.10));
    }
}

TEST_CASE("reverse Hölder rejects malformed cube lists") {
    IdentityMap identity;
    SUBCASE("mismatched lengths") {
        CHECK_THROWS_AS(reverse_holder_ratio(identity, {{0.4, 0.1}}, {0.05, 0.01}),
                        domain_error);
    }
    SUBCASE("nonpositive width") {
        CHECK_THROWS_AS(reverse_holder_ratio(identity, {{0.4, 0.1}}, {0.0}), domain_error);
    }
    SUBCASE("doubled cube outside the domain") {
        CHECK_THROWS_AS(reverse_holder_ratio(identity, {{0.95, 0.0}}, {0.05}), domain_error);
    }
    SUBCASE("doubled cube containing the origin") {
        CHECK_THROWS_AS(reverse_holder_ratio(identity, {{0.05, 0.02}}, {0.05}), domain_error);
    }
    SUBCASE("order out of range") {
        CHECK_THROWS_AS(reverse_holder_ratio(identity, {{0.4, 0.1}}, {0.05}, 2), domain_error);
    }
}

TEST_CASE("log-exponent fit recovers exact and scaled data") {
    std::vector<ModulusSample> samples;
    for (int i = 0; i < 12; ++i) {
        const double r = std::exp(-5.0 - 35.0 * i / 11.0);
        samples.push_back({r, 1.0 / std::log(1.0 / r), 0.0});
    }
    const LogExponentFit fit = fit_log_exponent(samples);
    CHECK(fit.alpha_hat == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.alpha_stderr <= 1e-10);

    // Scale equivariance: multiplying omega by a constant shifts only the
    // intercept.
    std::vector<ModulusSample> scaled = samples;
    for (auto& s : scaled) s.omega *= 3.0;
    const LogExponentFit fit2 = fit_log_exponent(scaled);
    CHECK(fit2.alpha_hat == doctest::Approx(fit.alpha_hat).epsilon(1e-12));
    CHECK(fit2.intercept == doctest::Approx(fit.intercept + std::log(3.0)).epsilon(1e-10));

    // Constant omega fits a flat line.
    std::vector<ModulusSample> flat = samples;
    for (auto& s : flat) s.omega = 0.25;
    CHECK(std::fabs(fit_log_exponent(flat).alpha_hat) <= 1e-12);
}

TEST_CASE("log-exponent fit recovers the power-log construction exponent") {
    for (double alpha : {0.5, 1.0, 2.0}) {
        auto map = make_preset("power-log", {.alpha = alpha});
        std::vector<double> radii;
        for (int i = 0; i < 12; ++i) radii.push_back(std::exp(-5.0 - 35.0 * i / 11.0));
        const LogExponentFit fit = fit_log_exponent(modulus_samples(*map, radii));
        CAPTURE(alpha);
        CHECK(fit.alpha_hat >= 0.95 * alpha);
        CHECK(fit.alpha_hat <= 1.05 * alpha);
    }
}

TEST_CASE("log-exponent fit rejects unusable samples") {
    std::vector<ModulusSample> samples;
    for (int i = 0; i < 12; ++i) {
        const double r = std::exp(-5.0 - 35.0 * i / 11.0);
        samples.push_back({r, 1.0 / std::log(1.0 / r), 0.0});
    }
    SUBCASE("too few samples") {
        samples.resize(7);
        CHECK_THROWS_AS(fit_log_exponent(samples), domain_error);
    }
    SUBCASE("span below six decades") {
        std::vector<ModulusSample> narrow;
        for (int i = 0; i < 10; ++i) {
            const double r = std::exp(-5.0 - 5.0 * i / 9.0);
            narrow.push_back({r, 1.0 / std::log(1.0 / r), 0.0});
        }
        CHECK_THROWS_AS(fit_log_exponent(narrow), domain_error);
    }
    SUBCASE("radius at or above 1/e") {
        samples[0].r = 0.5;
        CHECK_THROWS_AS(fit_log_exponent(samples), domain_error);
    }
    SUBCASE("nonpositive omega") {
        samples[3].omega = 0.0;
        CHECK_THROWS_AS(fit_log_exponent(samples), domain_error);
    }
}

#include "core/cusp.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace gfd {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Classification refuses points closer (in theta) to an interface than this
// fraction of the narrower adjacent sector; an absolute cutoff would swallow
// whole sectors at depths where gamma itself shrinks below it.
constexpr double kInterfaceRelTol = 1e-10;

double check_radius(const CuspParams& p, double r) {
    if (!(r > 0.0) || !(r < p.r0))
        throw domain_error("cusp: radius " + std::to_string(r) + " outside (0, " +
                           std::to_string(p.r0) + ")");
    return std::log(1.0 / r);
}

// Wraps theta into (-pi, pi].
double normalize_angle(double theta) {
    double t = std::remainder(theta, 2.0 * kPi);
    if (t <= -kPi) t += 2.0 * kPi;
    return t;
}

}  // namespace

CuspParams CuspParams::lp_duality(double p, double eps) {
    if (!(p >= 1.0)) throw domain_error("cusp lp_duality: p must be >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw domain_error("cusp lp_duality: eps must be in (0,1)");
    CuspParams out;
    out.regime = CuspRegime::LpDuality;
    out.p = p;
    out.eps = eps;
    out.r0 = std::exp(-std::exp(1.0));
    return out;
}

CuspParams CuspParams::sigma_ls(double p) {
    // gamma(r) = r^{2/p} log(1/r) is increasing iff r < e^{-p/2}; the fixed
    // outer radius e^-4 keeps that (and gamma < 1) true for p up to 8.
    if (!(p > 1.0 && p <= 8.0)) throw domain_error("cusp sigma_ls: p must be in (1, 8]");
    CuspParams out;
    out.regime = CuspRegime::SigmaLs;
    out.p = p;
    out.r0 = std::exp(-4.0);
    return out;
}

CuspParams CuspParams::exp_k(double mu, double nu) {
    if (!(mu > 0.0)) throw domain_error("cusp exp_k: mu must be > 0");
    if (nu == 0.0) nu = 0.5 * (mu + 2.0);
    if (!(nu > 1.0 && nu < 2.0)) throw domain_error("cusp exp_k: nu must be in (1, 2)");
    CuspParams out;
    out.regime = CuspRegime::ExpK;
    out.mu = mu;
    out.nu = nu;
    out.r0 = std::exp(-std::exp(1.0));
    return out;
}

double CuspParams::h(double r) const {
    const double L = std::log(1.0 / r);
    switch (regime) {
        case CuspRegime::LpDuality:
        case CuspRegime::SigmaLs: return std::pow(r, 2.0 / p);
        case CuspRegime::ExpK: return std::pow(L, -nu);
    }
    return 0.0;
}

double CuspParams::dh(double r) const {
    const double L = std::log(1.0 / r);
    switch (regime) {
        case CuspRegime::LpDuality:
        case CuspRegime::SigmaLs: return (2.0 / p) * std::pow(r, 2.0 / p - 1.0);
        case CuspRegime::ExpK: return nu * std::pow(L, -nu - 1.0) / r;
    }
    return 0.0;
}

double CuspParams::gamma(double r) const {
    const double L = std::log(1.0 / r);
    switch (regime) {
        case CuspRegime::LpDuality: return std::pow(L, -eps);
        case CuspRegime::SigmaLs: return std::pow(r, 2.0 / p) * L;
        case CuspRegime::ExpK: return std::pow(L, 1.0 - nu);
    }
    return 0.0;
}

double CuspParams::dgamma(double r) const {
    const double L = std::log(1.0 / r);
    switch (regime) {
        case CuspRegime::LpDuality: return eps * std::pow(L, -eps - 1.0) / r;
        case CuspRegime::SigmaLs:
            return std::pow(r, 2.0 / p - 1.0) * ((2.0 / p) * L - 1.0);
        case CuspRegime::ExpK: return (nu - 1.0) * std::pow(L, -nu) / r;
    }
    return 0.0;
}

double CuspParams::d_h_over_gamma(double r) const {
    const double L = std::log(1.0 / r);
    switch (regime) {
        case CuspRegime::LpDuality:
            // h/gamma = r^{2/p} L^{eps}
            return std::pow(r, 2.0 / p - 1.0) * std::pow(L, eps - 1.0) * ((2.0 / p) * L - eps);
        case CuspRegime::SigmaLs:
        case CuspRegime::ExpK:
            // h/gamma = 1/L in both regimes
            return 1.0 / (r * L * L);
    }
    return 0.0;
}

CuspMap::CuspMap(CuspParams params) : params_(params) {
    if (!(params_.r0 > 0.0)) throw domain_error("cusp: params not built through a factory");
}

std::string CuspMap::name() const {
    switch (params_.regime) {
        case CuspRegime::LpDuality: return "cusp-lp-duality";
        case CuspRegime::SigmaLs: return "cusp-sigma-ls";
        case CuspRegime::ExpK: return "cusp-exp-k";
    }
    return "cusp";
}

Region CuspMap::classify(const PolarPoint& pt) const {
    check_radius(params_, pt.r);
    const double g = params_.gamma(pt.r);
    const double t = normalize_angle(pt.theta);
    const double a = std::fabs(t);
    const double dist = std::min(std::fabs(a - g), std::fabs(a - (kPi - g)));
    if (dist < kInterfaceRelTol * std::min(2.0 * g, kPi - 2.0 * g))
        throw interface_error("cusp: point lies on an interface curve (theta distance " +
                              std::to_string(dist) + ")");
    if (a < g) return Region::CuspB1;
    if (a > kPi - g) return Region::CuspB2;
    return t > 0.0 ? Region::CuspA1 : Region::CuspA2;
}

Vec2 CuspMap::eval_f(const PolarPoint& pt) const {
    const double L = check_radius(params_, pt.r);
    const double f1 = -std::log(L);
    const Region reg = classify(pt);
    double t = normalize_angle(pt.theta);
    // Antipodal symmetry: A2 and B2 evaluate through f(z) = f(-z).  The fold
    // is a plain +-pi shift: near +-pi the subtraction is exact (Sterbenz), so
    // no precision is lost exactly where the B sector is narrowest.
    if (reg == Region::CuspA2 || reg == Region::CuspB2) t = (t > 0.0) ? t - kPi : t + kPi;
    const double h = params_.h(pt.r);
    if (reg == Region::CuspA1 || reg == Region::CuspA2) return {f1, h * t};
    const double g = params_.gamma(pt.r);
    return {f1, 0.5 * h * (kPi + 2.0 * t - kPi * t / g)};
}

Mat2 CuspMap::df_A(double r, double theta) const {
    const double L = std::log(1.0 / r);
    return {1.0 / (r * L), 0.0, params_.dh(r) * theta, params_.h(r) / r};
}

Mat2 CuspMap::df_B(double r, double theta) const {
    const double L = std::log(1.0 / r);
    const double g = params_.gamma(r);
    const double dr_f2 =
        (0.5 * kPi + theta) * params_.dh(r) - 0.5 * kPi * theta * params_.d_h_over_gamma(r);
    const double dt_f2 = (params_.h(r) / r) * (1.0 - 0.5 * kPi / g);
    return {1.0 / (r * L), 0.0, dr_f2, dt_f2};
}

double CuspMap::jacobian_A(double r) const {
    const double L = std::log(1.0 / r);
    return params_.h(r) / (r * r * L);
}

double CuspMap::jacobian_B(double r) const {
    const double L = std::log(1.0 / r);
    const double g = params_.gamma(r);
    return params_.h(r) * (1.0 - 0.5 * kPi / g) / (r * r * L);
}

FieldSample CuspMap::sample(const PolarPoint& pt) const {
    const Region reg = classify(pt);
    FieldSample out;
    out.region = reg;
    out.f = eval_f(pt);
    double t = normalize_angle(pt.theta);
    if (reg == Region::CuspA2 || reg == Region::CuspB2) t = (t > 0.0) ? t - kPi : t + kPi;
    const bool in_A = (reg == Region::CuspA1 || reg == Region::CuspA2);
    out.df = in_A ? df_A(pt.r, t) : df_B(pt.r, t);
    out.jacobian = in_A ? jacobian_A(pt.r) : jacobian_B(pt.r);
    out.op_norm_sq = out.df.op_norm_sq();
    if (in_A) {
        out.distortion = out.op_norm_sq / out.jacobian;
        out.inhomogeneity = 0.0;
    } else {
        out.distortion = -out.op_norm_sq / out.jacobian;
        out.inhomogeneity = 2.0 * out.op_norm_sq;
    }
    return out;
}

std::vector<Region> CuspMap::regions() const {
    return {Region::CuspA1, Region::CuspA2, Region::CuspB1, Region::CuspB2};
}

PolarPoint CuspMap::point_in_region(Region reg, double u, double v, double margin) const {
    // Radius spans 12 orders below r0 (log-uniform); v places the angle inside
    // the region with the requested relative margin on both sides.
    const double r_hi = params_.r0 * (1.0 - 1e-9);
    const double r_lo = params_.r0 * 1e-12;
    const double r = r_lo * std::pow(r_hi / r_lo, u);
    const double g = params_.gamma(r);
    const double w = margin + v * (1.0 - 2.0 * margin);
    double theta = 0.0;
    switch (reg) {
        case Region::CuspB1: theta = -g + w * 2.0 * g; break;
        case Region::CuspA1: theta = g + w * (kPi - 2.0 * g); break;
        case Region::CuspA2: theta = -(g + w * (kPi - 2.0 * g)); break;
        case Region::CuspB2: theta = normalize_angle(kPi + (-g + w * 2.0 * g)); break;
        default: throw domain_error("cusp: unknown region requested");
    }
    return {r, theta};
}

FdScales CuspMap::fd_scales(const PolarPoint& pt) const {
    const Region reg = classify(pt);
    const double g = params_.gamma(pt.r);
    const double a = std::fabs(normalize_angle(pt.theta));
    double theta_dist = 0.0;
    switch (reg) {
        case Region::CuspB1: theta_dist = g - a; break;
        case Region::CuspB2: theta_dist = a - (kPi - g); break;
        default: theta_dist = std::min(a - g, kPi - g - a); break;
    }
    // Moving in r slides the interface curves by dgamma; keep the stencil's
    // angular clearance dominant over that drift.
    const double slope = std::max(std::fabs(params_.dgamma(pt.r)), 1e-300);
    const double dr = std::min({0.25 * pt.r, 0.5 * (params_.r0 - pt.r), 0.25 * theta_dist / slope});
    return {dr, 0.5 * theta_dist};
}

std::vector<InterfaceCurve> CuspMap::interfaces() const {
    // Parameterized by radius; transverse offsets in theta, scaled to a
    // quarter of the narrower adjacent sector.
    std::vector<InterfaceCurve> out;
    const CuspParams prm = params_;
    auto curve = [&](const std::string& name, double center_sign, bool around_pi) {
        InterfaceCurve c;
        c.name = name;
        c.t_lo = prm.r0 * 1e-10;
        c.t_hi = prm.r0 * (1.0 - 1e-6);
        c.log_in_t = true;
        c.offset_point = [prm, center_sign, around_pi](double r, double s) {
            const double g = prm.gamma(r);
            const double scale = 0.25 * std::min(2.0 * g, kPi - 2.0 * g);
            double base = center_sign * g;
            double offset = s * scale * center_sign;  // +s moves away from B
            double theta = base + offset;
            if (around_pi) theta = normalize_angle(kPi - theta);
            return PolarPoint{r, theta};
        };
        out.push_back(std::move(c));
    };
    curve("theta=+gamma", +1.0, false);   // B1 | A1
    curve("theta=-gamma", -1.0, false);   // B1 | A2
    curve("theta=pi-gamma", +1.0, true);  // B2 | A1
    curve("theta=gamma-pi", -1.0, true);  // B2 | A2
    return out;
}

double CuspMap::blowup_radius(double height) const {
    if (!(height > 0.0)) throw domain_error("cusp: blow-up height must be positive");
    // |f| >= |f1| = log log(1/r) >= height once r <= exp(-exp(height)).
    return std::min(std::exp(-std::exp(height)), params_.r0);
}

double CuspMap::distortion_at_depth(double L, double theta_frac, bool region_A) const {
    if (!(L > 1.0)) throw domain_error("cusp: depth parameter L must exceed 1");
    const CuspParams& q = params_;
    double hL = 0.0, r_dh = 0.0, gam = 0.0, h_over_gamma = 0.0, r_dhg = 0.0;
    switch (q.regime) {
        case CuspRegime::LpDuality:
            hL = std::exp(-2.0 * L / q.p);
            r_dh = (2.0 / q.p) * hL;
            gam = std::pow(L, -q.eps);
            h_over_gamma = hL * std::pow(L, q.eps);
            r_dhg = hL * std::pow(L, q.eps - 1.0) * ((2.0 / q.p) * L - q.eps);
            break;
        case CuspRegime::SigmaLs:
            hL = std::exp(-2.0 * L / q.p);
            r_dh = (2.0 / q.p) * hL;
            gam = hL * L;
            h_over_gamma = 1.0 / L;
            r_dhg = 1.0 / (L * L);
            break;
        case CuspRegime::ExpK:
            hL = std::pow(L, -q.nu);
            r_dh = q.nu * std::pow(L, -q.nu - 1.0);
            gam = std::pow(L, 1.0 - q.nu);
            h_over_gamma = 1.0 / L;
            r_dhg = 1.0 / (L * L);
            break;
    }
    Mat2 S;  // r * Df, entry-wise closed forms in L
    double det;
    if (region_A) {
        const double theta = gam + theta_frac * (kPi - 2.0 * gam);
        S = {1.0 / L, 0.0, r_dh * theta, hL};
        det = hL / L;
    } else {
        const double tf = 2.0 * theta_frac - 1.0;  // theta / gamma in (-1, 1)
        const double s21 = (0.5 * kPi + tf * gam) * r_dh - 0.5 * kPi * tf * gam * r_dhg;
        const double s22 = hL - 0.5 * kPi * h_over_gamma;
        S = {1.0 / L, 0.0, s21, s22};
        det = std::fabs(S.a * s22);
    }
    return S.op_norm_sq() / det;
}

}  // namespace gfd

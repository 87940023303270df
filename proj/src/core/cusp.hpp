// cusp.hpp: the cusp counterexample family on the punctured disk.
//
// The disk splits into four sectors bounded by the curves theta = +-gamma(r)
// and theta = +-(pi - gamma(r)), with f(z) = f(-z):
//   A1 (gamma < theta < pi - gamma):  f = (-log log(1/r), h(r) * theta)
//   B1 (|theta| < gamma):             f = (-log log(1/r),
//                                          h(r) * (pi + 2 theta - pi theta / gamma(r)) / 2)
// and A2 = -A1, B2 = -B1 by the antipodal symmetry. J > 0 on A, J < 0 on B;
// the inclusion |Df|^2 <= K J + Sigma holds with equality on both, with
// Sigma = 0 on A and Sigma = 2 |Df|^2 on B.
#pragma once

#include "core/families.hpp"

namespace gfd {

enum class CuspRegime {
    LpDuality,  // h = r^{2/p},        gamma = log^{-eps}(1/r),        r0 = e^-e
    SigmaLs,    // h = r^{2/p},        gamma = r^{2/p} log(1/r),       r0 = e^-4
    ExpK,       // h = log^{-nu}(1/r), gamma = log^{1-nu}(1/r),        r0 = e^-e
};

struct CuspParams {
    CuspRegime regime = CuspRegime::LpDuality;
    double p = 2.0;     // LpDuality, SigmaLs
    double eps = 0.5;   // LpDuality
    double mu = 1.5;    // ExpK (drives the Zygmund norm check)
    double nu = 1.75;   // ExpK
    double r0 = 0.0;    // outer radius, set by the factories

    static CuspParams lp_duality(double p = 2.0, double eps = 0.5);
    static CuspParams sigma_ls(double p = 2.0);
    // nu defaults to (mu + 2) / 2 when not given explicitly.
    static CuspParams exp_k(double mu = 1.5, double nu = 0.0);

    // The defining radial profiles and the derivatives the closed-form
    // derivative matrix needs. L below is log(1/r).
    double h(double r) const;
    double dh(double r) const;
    double gamma(double r) const;
    double dgamma(double r) const;
    double d_h_over_gamma(double r) const;  // d/dr of h/gamma
};

class CuspMap : public MapFamily {
public:
    explicit CuspMap(CuspParams params);

    std::string name() const override;
    Vec2 eval_f(const PolarPoint& pt) const override;
    FieldSample sample(const PolarPoint& pt) const override;
    Region classify(const PolarPoint& pt) const override;
    std::vector<Region> regions() const override;
    PolarPoint point_in_region(Region reg, double u, double v, double margin) const override;
    FdScales fd_scales(const PolarPoint& pt) const override;
    std::vector<InterfaceCurve> interfaces() const override;
    bool discontinuous_at_origin() const override { return true; }
    double blowup_radius(double height) const override;
    double outer_radius() const override { return params_.r0; }

    const CuspParams& params() const { return params_; }

    // Jacobian closed forms as pure functions of r (valid for any r in (0,1),
    // domain-guarded evaluation goes through sample()).
    double jacobian_A(double r) const;
    double jacobian_B(double r) const;

    // Distortion evaluated from the scaled matrix r * Df written directly in
    // terms of L = log(1/r); exact at depths where r itself underflows. Used
    // by the exponential-integrability classifier.
    double distortion_at_depth(double L, double theta_frac, bool region_A) const;

private:
    CuspParams params_;

    Mat2 df_A(double r, double theta) const;
    Mat2 df_B(double r, double theta) const;
};

}  // namespace gfd

#include "core/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "core/errors.hpp"
#include "core/gauss.hpp"

namespace gfd {

namespace {

constexpr double kE = 2.718281828459045235360287471353;

// Uniform draw in [0, 1) from the engine's raw 64-bit output; the mt19937_64
// sequence is pinned by the standard, so suites reproduce across platforms.
double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double log_uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo * std::pow(hi / lo, uniform01(gen));
}

// Plain recursive adaptive Simpson with an absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth = 30) {
    auto simpson = [&](double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
    };
    std::function<double(double, double, double, int)> rec =
        [&](double lo, double hi, double whole, int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double left = simpson(lo, mid);
        const double right = simpson(mid, hi);
        if (d <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, left, d - 1) + rec(mid, hi, right, d - 1);
    };
    return rec(a, b, simpson(a, b), depth);
}

// Nodes/weights of the cached Gauss-Legendre rule mapped to [lo, hi].
void gauss_nodes(int order, double lo, double hi, std::vector<double>& x,
                 std::vector<double>& w) {
    const GaussRule& rule = gauss_legendre(order);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    x.resize(rule.x.size());
    w.resize(rule.w.size());
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        x[i] = mid + half * rule.x[i];
        w[i] = half * rule.w[i];
    }
}

}  // namespace

double exp_young_constant(double kappa, double lambda) {
    if (!(kappa > 0.0) || !(lambda > 0.0))
        throw domain_error("exp-Young constant needs kappa > 0 and lambda > 0");
    const double a_const = std::pow(kE / (2.0 * kappa), 2.0 * kappa);
    const double inner = std::fabs(std::log(1.0 / (a_const * std::pow(lambda, 2.0 * kappa))));
    return std::pow(2.0 / lambda, kappa) * std::pow(inner, kappa) +
           std::pow(4.0 / lambda, kappa);
}

ExpYoungSuiteReport exp_young_suite(std::uint64_t seed, long long cases) {
    if (cases < 1) throw domain_error("exp-Young suite needs at least one case");
    std::mt19937_64 gen(seed);
    ExpYoungSuiteReport report;
    report.cases = cases;
    report.min_relative_margin = std::numeric_limits<double>::infinity();
    for (long long i = 0; i < cases; ++i) {
        ExpYoungCase c;
        c.kappa = log_uniform(gen, 0.25, 4.0);
        c.lambda = log_uniform(gen, 0.25, 4.0);
        // Log-uniform magnitudes with occasional exact zeros to hit the
        // degenerate corners of the inequality.
        c.a = (gen() % 16 == 0) ? 0.0 : log_uniform(gen, 1e-6, 1e6);
        c.b = (gen() % 16 == 0) ? 0.0 : log_uniform(gen, 1e-6, 1e6);
        c.lhs = c.a * c.b;
        const double cconst = exp_young_constant(c.kappa, c.lambda);
        c.rhs = std::exp(c.lambda * std::pow(c.a, 1.0 / c.kappa)) +
                cconst * c.b * std::pow(std::log(kE + c.b), c.kappa);
        const double margin = (c.rhs - c.lhs) / std::max(1.0, c.lhs);
        if (margin < report.min_relative_margin) {
            report.min_relative_margin = margin;
            report.tightest = c;
        }
        if (!(c.lhs < c.rhs)) ++report.violations;
    }
    return report;
}

DiffIneqReport check_diff_ineq(const DiffIneqInstance& inst, int grid) {
    if (!(inst.A > 0.0) || !(inst.R > 0.0) || !(inst.S > 0.0))
        throw domain_error("differential inequality: A, R, S must be positive");
    if (!inst.phi || !inst.dphi || !inst.psi || !inst.dpsi || !inst.gamma || !inst.dgamma)
        throw domain_error("differential inequality: all six function handles are required");
    if (grid < 8) throw domain_error("differential inequality: grid needs at least 8 points");

    const double gamma_r = inst.gamma(inst.R);
    if (inst.S < gamma_r)
        throw domain_error("differential inequality: S below Gamma(R), constant would be negative");
    const double psi_r = inst.psi(inst.R);
    if (!(psi_r > 0.0)) throw domain_error("differential inequality: Psi(R) must be positive");

    DiffIneqReport report;
    report.grid = grid;
    report.constant = (inst.S - gamma_r) / std::pow(psi_r, 1.0 / inst.A);

    // Log-spaced grid on [R * 1e-4, R]; r = 0 itself is excluded since the
    // hypothesis divides by Psi and the bound's inner integral may only be
    // improperly convergent there.
    std::vector<double> rs(grid);
    for (int i = 0; i < grid; ++i)
        rs[i] = inst.R * std::pow(1e-4, 1.0 - static_cast<double>(i) / (grid - 1));
    rs.back() = inst.R;

    report.worst_hypothesis_excess = -std::numeric_limits<double>::infinity();
    double worst_scaled = -std::numeric_limits<double>::infinity();
    for (double r : rs) {
        const double phi = inst.phi(r);
        const double dphi = inst.dphi(r);
        const double psi = inst.psi(r);
        const double dpsi = inst.dpsi(r);
        const double gam = inst.gamma(r);
        const double dgam = inst.dgamma(r);
        if (dphi < 0.0 || dgam < 0.0 || !(dpsi > 0.0) || !(psi > 0.0))
            throw domain_error("differential inequality: inputs not increasing at radius " +
                               std::to_string(r));
        const double rhs = inst.A * (psi / dpsi) * dphi + gam;
        const double excess = phi - rhs;
        report.worst_hypothesis_excess = std::max(report.worst_hypothesis_excess, excess);
        worst_scaled = std::max(worst_scaled, excess / (1.0 + std::fabs(phi) + std::fabs(rhs)));
    }
    report.hypothesis_ok = worst_scaled <= 1e-9;

    const double inv_a = 1.0 / inst.A;
    const auto integrand = [&](double s) { return inst.dgamma(s) / std::pow(inst.psi(s), inv_a); };
    report.worst_excess = -std::numeric_limits<double>::infinity();
    for (double r : rs) {
        const double inner =
            r < inst.R ? adaptive_simpson(integrand, r, inst.R, 1e-12 * (1.0 + gamma_r)) : 0.0;
        const double bound = inst.gamma(r) +
                             report.constant * std::pow(inst.psi(r), inv_a) * (1.0 + inner);
        const double excess = inst.phi(r) - bound;
        if (excess > report.worst_excess) {
            report.worst_excess = excess;
            report.worst_excess_radius = r;
        }
    }
    return report;
}

DiffIneqInstance make_diff_ineq_instance(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    DiffIneqInstance inst;
    inst.A = log_uniform(gen, 0.5, 3.0);
    const double beta = log_uniform(gen, 0.5, 2.0);
    const double c_psi = log_uniform(gen, 0.5, 2.0);
    const double x = beta / inst.A;  // homogeneous-solution exponent
    const double alpha = (0.15 + 0.7 * uniform01(gen)) * x;
    const double g = (gen() % 8 == 0) ? 0.0 : log_uniform(gen, 0.1, 1.5);
    const double slack = uniform01(gen);
    const double c0 = log_uniform(gen, 0.1, 2.0);
    inst.R = log_uniform(gen, 0.5, 2.0);

    // Particular solution of the slack ODE Phi' = (Phi - s*Gamma)*Psi'/(A*Psi)
    // for Gamma = g*r^alpha: coefficient slack*g*x/(x - alpha) > 0.
    const double c_p = g > 0.0 ? slack * g * x / (x - alpha) : 0.0;

    inst.psi = [c_psi, beta](double r) { return c_psi * std::pow(r, beta); };
    inst.dpsi = [c_psi, beta](double r) { return c_psi * beta * std::pow(r, beta - 1.0); };
    inst.gamma = [g, alpha](double r) { return g * std::pow(r, alpha); };
    inst.dgamma = [g, alpha](double r) { return g * alpha * std::pow(r, alpha - 1.0); };
    inst.phi = [c0, x, c_p, alpha](double r) {
        return c0 * std::pow(r, x) + c_p * std::pow(r, alpha);
    };
    inst.dphi = [c0, x, c_p, alpha](double r) {
        return c0 * x * std::pow(r, x - 1.0) + c_p * alpha * std::pow(r, alpha - 1.0);
    };

    // S large enough that Phi <= S and the reported constant is >= 1.
    const double phi_r = inst.phi(inst.R);
    const double floor_s = inst.gamma(inst.R) + std::pow(inst.psi(inst.R), 1.0 / inst.A);
    inst.S = std::max(phi_r, floor_s) * (1.0 + uniform01(gen));
    return inst;
}

TripleJensenReport triple_jensen_check(const TripleJensenInstance& inst) {
    if (inst.n < 2) throw domain_error("triple-Jensen: dimension must be at least 2");
    if (!(inst.lambda > 0.0)) throw domain_error("triple-Jensen: lambda must be positive");
    if (!inst.k_profile) throw domain_error("triple-Jensen: radial profile handle is required");
    if (!(inst.domain_radius > 0.0))
        throw domain_error("triple-Jensen: domain radius must be positive");

    const double floor_k = (inst.n - 2) / inst.lambda;
    const auto ktilde = [&](double s) { return std::max(inst.k_profile(s), floor_k); };

    TripleJensenReport report;
    // C = (1/omega_{n-1}) * int_ball exp(lambda*Ktilde)
    //   = int_0^rho exp(lambda*Ktilde(s)) s^(n-1) ds  for a radial profile.
    // The lower limit stays a hair above zero: log-type profiles are infinite
    // at the origin while the weighted integrand remains integrable, and the
    // truncated mass is far below the quadrature tolerance.
    const int n = inst.n;
    report.c_constant = adaptive_simpson(
        [&](double s) {
            return std::exp(inst.lambda * ktilde(s)) * std::pow(s, n - 1);
        },
        1e-12 * inst.domain_radius, inst.domain_radius, 1e-12);
    if (!std::isfinite(report.c_constant) || !(report.c_constant > 0.0))
        throw domain_error("triple-Jensen: profile is not exp-integrable on the domain");
    report.r0 = std::pow(report.c_constant * kE, 1.0 / n);

    if (!(inst.R > 0.0) || inst.R >= report.r0)
        throw domain_error("triple-Jensen: outer radius must lie below the admissible limit " +
                           std::to_string(report.r0));
    if (inst.R > inst.domain_radius)
        throw domain_error("triple-Jensen: outer radius exceeds the domain radius");
    const double r_cap = inst.R * std::exp(-3.0);
    if (!(inst.r > 0.0) || inst.r >= r_cap)
        throw domain_error("triple-Jensen: inner radius must lie in (0, R/e^3)");

    report.lhs = adaptive_simpson([&](double s) { return 1.0 / (s * ktilde(s)); }, inst.r,
                                  inst.R, 1e-12);
    const double c = report.c_constant;
    report.rhs = inst.lambda / n *
                 (std::log(std::log(c / std::pow(inst.r, n))) -
                  std::log(std::log(c * kE * kE / std::pow(inst.R, n))));
    report.margin = report.lhs - report.rhs;
    return report;
}

ReverseHolderReport reverse_holder_ratio(const MapFamily& map, const std::vector<Vec2>& centers,
                                         const std::vector<double>& half_widths, int order) {
    if (centers.empty() || centers.size() != half_widths.size())
        throw domain_error("reverse Hölder: need matching, nonempty centers and half-widths");
    if (order < 4 || order > 64) throw domain_error("reverse Hölder: order must be in [4, 64]");

    const double limit = map.outer_radius();
    ReverseHolderReport report;
    report.ratios.resize(centers.size());

    struct Averages {
        double op_n = 0.0;     // avg |Df|^2
        double op_frac = 0.0;  // avg |Df|^(4/3)
        double sigma = 0.0;    // avg Sigma
        double k_max = 0.0;
    };
    std::vector<double> xs, wx, ys, wy;
    const auto cube_averages = [&](const Vec2& c, double h) {
        gauss_nodes(order, c.x - h, c.x + h, xs, wx);
        gauss_nodes(order, c.y - h, c.y + h, ys, wy);
        Averages out;
        for (int i = 0; i < order; ++i) {
            for (int j = 0; j < order; ++j) {
                const double radius = std::hypot(xs[i], ys[j]);
                const PolarPoint pt = map.chart_point(radius, std::atan2(ys[j], xs[i]));
                const FieldSample s = map.sample(pt);
                const double w = wx[i] * wy[j];
                out.op_n += w * s.op_norm_sq;
                out.op_frac += w * std::pow(s.op_norm_sq, 2.0 / 3.0);
                out.sigma += w * s.inhomogeneity;
                out.k_max = std::max(out.k_max, s.distortion);
            }
        }
        const double area = 4.0 * h * h;
        out.op_n /= area;
        out.op_frac /= area;
        out.sigma /= area;
        return out;
    };

    std::vector<Averages> inner(centers.size()), outer(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double h = half_widths[i];
        if (!(h > 0.0)) throw domain_error("reverse Hölder: half-widths must be positive");
        const Vec2 c = centers[i];
        const double far = std::hypot(std::fabs(c.x) + 2.0 * h, std::fabs(c.y) + 2.0 * h);
        if (far > limit)
            throw domain_error("reverse Hölder: doubled cube reaches outside the domain");
        if (std::max(std::fabs(c.x), std::fabs(c.y)) <= 2.0 * h)
            throw domain_error("reverse Hölder: doubled cube contains the origin");
        inner[i] = cube_averages(c, h);
        outer[i] = cube_averages(c, 2.0 * h);
        report.k_sup = std::max(report.k_sup, outer[i].k_max);
    }

    report.max_ratio = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double lhs = std::pow(inner[i].op_n, 2.0 / 3.0);
        const double denom = std::pow(report.k_sup, 2.0 / 3.0) *
                             (outer[i].op_frac + std::pow(outer[i].sigma, 2.0 / 3.0));
        const double ratio = lhs > 0.0 ? lhs / denom : 0.0;
        report.ratios[i] = ratio;
        if (ratio >= report.max_ratio) {
            report.max_ratio = ratio;
            report.worst_cube = i;
        }
    }
    return report;
}

LogExponentFit fit_log_exponent(const std::vector<ModulusSample>& samples) {
    if (samples.size() < 8)
        throw domain_error("log-exponent fit: need at least 8 samples");
    double r_min = std::numeric_limits<double>::infinity();
    double r_max = 0.0;
    for (const auto& s : samples) {
        if (!(s.r > 0.0) || s.r >= 1.0 / kE)
            throw domain_error("log-exponent fit: radii must lie in (0, 1/e)");
        if (!(s.omega > 0.0))
            throw domain_error("log-exponent fit: omega values must be positive");
        r_min = std::min(r_min, s.r);
        r_max = std::max(r_max, s.r);
    }
    if (r_max / r_min < 1e6)
        throw domain_error("log-exponent fit: radii must span at least 6 decades");

    const std::size_t m = samples.size();
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = std::log(std::log(1.0 / samples[i].r));
        y[i] = std::log(samples[i].omega);
    }
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= static_cast<double>(m);
    ybar /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double resid = y[i] - ybar - slope * (x[i] - xbar);
        ss_res += resid * resid;
    }
    LogExponentFit fit;
    fit.alpha_hat = -slope;
    fit.alpha_stderr = std::sqrt(ss_res / (static_cast<double>(m - 2) * sxx));
    fit.intercept = ybar - slope * xbar;
    return fit;
}

}  // namespace gfd

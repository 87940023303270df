// gauss.cpp: Newton-refined Legendre nodes, cached per order.
#include "core/gauss.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "core/errors.hpp"

namespace gfd {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

GaussRule build(int n) {
    GaussRule rule;
    rule.x.assign(n, 0.0);
    rule.w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double deriv = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            deriv = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / deriv;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * deriv * deriv);
    }
    if (n == 1) {
        rule.x[0] = 0.0;
        rule.w[0] = 2.0;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 1024) throw domain_error("gauss_legendre: order must be in [1, 1024]");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build(n)).first;
    return it->second;
}

}  // namespace gfd

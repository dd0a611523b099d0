#include "crackflutter/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "crackflutter/errors.hpp"

namespace crackflutter::quadrature {

namespace {

Rule1d compute_gauss_legendre(int n) {
    Rule1d rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double pn = n == 1 ? x : p1;
            const double pnm1 = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Recompute derivative at the converged root.
        double p0 = 1.0;
        double p1 = x;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        const double pn = n == 1 ? x : p1;
        const double pnm1 = n == 1 ? 1.0 : p0;
        dp = n * (x * pn - pnm1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[i] = -x;
        rule.points[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.points[n / 2] = 0.0;
    }
    return rule;
}

}  // namespace

const Rule1d& gauss_legendre(int n) {
    if (n < 1 || n > 64) {
        throw ArgumentError("gauss_legendre: point count must be in [1, 64]");
    }
    static std::mutex mutex;
    static std::map<int, Rule1d> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, compute_gauss_legendre(n)).first;
    }
    return it->second;
}

const TriangleRule& triangle_rule_3() {
    static const TriangleRule rule{
        {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
         {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
         {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}},
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
    return rule;
}

const TriangleRule& triangle_rule_7() {
    // Radon's degree 5 rule.
    static const TriangleRule rule = [] {
        const double s15 = std::sqrt(15.0);
        const double a1 = (6.0 - s15) / 21.0;
        const double b1 = (9.0 + 2.0 * s15) / 21.0;
        const double a2 = (6.0 + s15) / 21.0;
        const double b2 = (9.0 - 2.0 * s15) / 21.0;
        const double w1 = (155.0 - s15) / 1200.0;
        const double w2 = (155.0 + s15) / 1200.0;
        TriangleRule r;
        r.barycentric = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                         {b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1},
                         {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}};
        r.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
        return r;
    }();
    return rule;
}

}  // namespace crackflutter::quadrature

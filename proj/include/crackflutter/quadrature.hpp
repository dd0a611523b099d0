#pragma once

#include <array>
#include <span>
#include <vector>

namespace crackflutter::quadrature {

struct Rule1d {
    std::vector<double> points;   // on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; rules are computed once and cached.
const Rule1d& gauss_legendre(int n);

/// Integrates f over [lo, hi] with an n-point Gauss-Legendre rule.
template <typename F>
double integrate(F&& f, double lo, double hi, int n = 20) {
    const Rule1d& rule = gauss_legendre(n);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.points[i]);
    }
    return sum * half;
}

/// Symmetric triangle rule in barycentric coordinates; weights sum to 1.
struct TriangleRule {
    std::vector<std::array<double, 3>> barycentric;
    std::vector<double> weights;
};

/// 3-point (degree 2) rule.
const TriangleRule& triangle_rule_3();
/// 7-point (degree 5) rule.
const TriangleRule& triangle_rule_7();

}  // namespace crackflutter::quadrature

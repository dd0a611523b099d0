#include <cmath>

#include <doctest.h>

#include "crackflutter/quadrature.hpp"

using namespace crackflutter::quadrature;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("Gauss-Legendre integrates degree 2n-1 exactly") {
    for (int n : {1, 2, 3, 7, 20}) {
        const auto& rule = gauss_legendre(n);
        REQUIRE(rule.points.size() == static_cast<std::size_t>(n));
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) sum += rule.weights[i] * std::pow(rule.points[i], p);
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
        }
    }
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("triangle rules") {
    // Monomials over the unit triangle: a! b! / (a + b + 2)!.
    auto check = [](const TriangleRule& rule, int degree) {
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        for (int a = 0; a <= degree; ++a) {
            for (int b = 0; a + b <= degree; ++b) {
                double sum = 0.0;
                for (std::size_t i = 0; i < rule.weights.size(); ++i) {
                    const double x = rule.barycentric[i][1];
                    const double y = rule.barycentric[i][2];
                    sum += 0.5 * rule.weights[i] * std::pow(x, a) * std::pow(y, b);
                }
                CHECK(sum == doctest::Approx(factorial(a) * factorial(b) / factorial(a + b + 2))
                                 .epsilon(1e-12));
            }
        }
    };
    check(triangle_rule_3(), 2);
    check(triangle_rule_7(), 5);
}

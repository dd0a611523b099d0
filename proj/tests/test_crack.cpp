#include <cmath>
#include <numbers>

#include <doctest.h>

#include "crackflutter/crack.hpp"
#include "crackflutter/errors.hpp"
#include "crackflutter/q4.hpp"

using namespace crackflutter;
using namespace crackflutter::crack;
using mesh::Point;

namespace {

CrackGeometry center(double cx, double cy, double d, double theta_deg = 0.0) {
    return {cx, cy, d, theta_deg * std::numbers::pi / 180.0, CrackKind::Center};
}

int count(const std::vector<ElementCut>& cuts, CutKind kind) {
    int n = 0;
    for (const auto& c : cuts) n += c.kind == kind ? 1 : 0;
    return n;
}

// Area of the part of a convex polygon with phi >= 0 (line clipping oracle).
double positive_area(const std::array<Point, 4>& poly, const CrackSegment& seg) {
    std::vector<Point> out;
    for (int i = 0; i < 4; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % 4];
        const double fa = seg.phi(a);
        const double fb = seg.phi(b);
        if (fa >= 0.0) out.push_back(a);
        if ((fa >= 0.0) != (fb >= 0.0)) out.push_back(a + fa / (fa - fb) * (b - a));
    }
    double area = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Point& p = out[i];
        const Point& q = out[(i + 1) % out.size()];
        area += 0.5 * (p.x() * q.y() - q.x() * p.y());
    }
    return area;
}

}  // namespace

TEST_CASE("level sets of a centre crack") {
    const auto g = center(0.5, 0.5, 0.4, 90.0);
    const auto ls = level_sets(g, Point(0.6, 0.5));
    CHECK(ls.phi == doctest::Approx(-0.1));
    CHECK(ls.psi == doctest::Approx(-0.2));
    CHECK(level_sets(g, Point(0.5, 0.9)).psi == doctest::Approx(0.2));
    CHECK_THROWS_AS(parse_crack_kind("through"), ArgumentError);
}

TEST_CASE("perturbation rule") {
    const auto m = mesh::generate_structured(1.0, 1.0, 10, 10);
    const double h = m.characteristic_size();

    SUBCASE("crack on a node line moves along its normal") {
        const auto seg = regularize(m, center(0.5, 0.5, 0.45));
        CHECK(seg.start.y() - 0.5 == doctest::Approx(1e-6 * h).epsilon(1e-6));
        CHECK(seg.end.y() == doctest::Approx(seg.start.y()).epsilon(1e-15));
    }
    SUBCASE("tips on element edges are pushed outward") {
        const auto seg = regularize(m, center(0.5, 0.55, 0.4));
        CHECK(seg.start.x() == doctest::Approx(0.3 - 1e-6 * h).epsilon(1e-12));
        CHECK(seg.end.x() == doctest::Approx(0.7 + 1e-6 * h).epsilon(1e-12));
    }
    SUBCASE("edge crack mouth is extended past the boundary") {
        CrackGeometry g{0.55, 0.15, 0.3, std::numbers::pi / 2, CrackKind::Edge};
        const auto seg = regularize(m, g);
        CHECK_FALSE(seg.start_is_tip);
        CHECK(seg.end_is_tip);
        CHECK(seg.start.y() == doctest::Approx(-h));
        CHECK(seg.end.y() == doctest::Approx(0.3 + 1e-6 * h).epsilon(1e-12));
    }
    SUBCASE("tip-count invariants") {
        CHECK_THROWS_AS(regularize(m, center(0.1, 0.5, 0.4)), GeometryError);
        CHECK_THROWS_AS(regularize(m, CrackGeometry{0.5, 0.5, 0.2, 0.0, CrackKind::Edge}),
                        GeometryError);
    }
}

TEST_CASE("element classification and enrichment sets") {
    const auto m = mesh::generate_structured(1.0, 1.0, 10, 10);
    const auto seg = regularize(m, center(0.5, 0.55, 0.5));
    const auto cuts = classify_elements(m, seg);
    CHECK(count(cuts, CutKind::Tip) == 2);
    CHECK(count(cuts, CutKind::Split) == 4);

    const auto base = mesh::apply_boundary(m, mesh::BoundaryKind::Free);
    const auto map = build_enrichment_map(m, cuts, seg, base);
    int heaviside = 0;
    int tip = 0;
    for (int n = 0; n < base.node_count; ++n) {
        const bool hv = map.heaviside_start[n] >= 0;
        const bool tp = map.tip_start[n] >= 0;
        CHECK_FALSE((hv && tp));
        heaviside += hv;
        tip += tp;
        if (hv) {
            const double x = m.nodes[n].x();
            CHECK(x > 0.35);
            CHECK(x < 0.65);
        }
    }
    CHECK(heaviside == 6);
    CHECK(tip == 8);
    CHECK(map.free_count == base.free_count + 5 * heaviside + 20 * tip);

    CHECK_THROWS_AS(classify_elements(m, center(0.55, 0.55, 0.04)), GeometryError);
}

TEST_CASE("enriched DOFs inherit boundary constraints") {
    const auto m = mesh::generate_structured(1.0, 1.0, 10, 10);
    CrackGeometry g{0.55, 0.15, 0.3, std::numbers::pi / 2, CrackKind::Edge};
    const auto seg = regularize(m, g);
    const auto cuts = classify_elements(m, seg);
    const auto base = mesh::apply_boundary(m, mesh::BoundaryKind::Clamped);
    const auto map = build_enrichment_map(m, cuts, seg, base);
    int checked = 0;
    for (int n = 0; n < base.node_count; ++n) {
        for (int f = 0; f < mesh::kFieldsPerNode; ++f) {
            const bool fixed = base.is_constrained(n, f);
            if (map.heaviside_start[n] >= 0) {
                CHECK(static_cast<bool>(map.constrained[map.heaviside_dof(n, f)]) == fixed);
                checked += fixed;
            }
            if (map.tip_start[n] >= 0) {
                for (int b = 0; b < 4; ++b) {
                    CHECK(static_cast<bool>(map.constrained[map.tip_dof(n, b, f)]) == fixed);
                }
            }
        }
    }
    CHECK(checked > 0);  // the mouth reaches the clamped edge
}

TEST_CASE("branch functions") {
    const auto f0 = tip_branch(0.25, 0.0);
    CHECK(f0[0] == doctest::Approx(0.0));
    CHECK(f0[1] == doctest::Approx(0.5));
    CHECK(f0[2] == doctest::Approx(0.0));
    CHECK(f0[3] == doctest::Approx(0.0));
    // Only the first function jumps across the crack faces.
    const auto up = tip_branch(0.25, std::numbers::pi);
    const auto dn = tip_branch(0.25, -std::numbers::pi);
    CHECK(up[0] - dn[0] == doctest::Approx(1.0));
    for (int j = 1; j < 4; ++j) CHECK(up[j] - dn[j] == doctest::Approx(0.0).scale(1.0));

    CrackSegment seg{Point(0.2, 0.3), Point(0.6, 0.5), true, true};
    for (int tip = 0; tip < 2; ++tip) {
        const Point p(0.75, 0.35);
        const auto ev = tip_branch_at(seg, tip, p);
        const double eps = 1e-6;
        for (int j = 0; j < 4; ++j) {
            const double dx = (tip_branch_at(seg, tip, p + Point(eps, 0)).value[j] -
                               tip_branch_at(seg, tip, p - Point(eps, 0)).value[j]) / (2 * eps);
            const double dy = (tip_branch_at(seg, tip, p + Point(0, eps)).value[j] -
                               tip_branch_at(seg, tip, p - Point(0, eps)).value[j]) / (2 * eps);
            CHECK(ev.gradient[j].x() == doctest::Approx(dx).epsilon(1e-6));
            CHECK(ev.gradient[j].y() == doctest::Approx(dy).epsilon(1e-6));
        }
    }
}

TEST_CASE("cut-element quadrature partitions the element area") {
    const auto m = mesh::generate_structured(1.0, 1.0, 10, 10);
    const auto seg = regularize(m, center(0.5, 0.537, 0.5, 7.0));
    const auto cuts = classify_elements(m, seg);
    int cut = 0;
    for (const auto& c : cuts) {
        if (c.kind == CutKind::Standard) continue;
        ++cut;
        const auto coords = m.element_coords(c.element);
        const double area = q4::area(coords);
        const auto rule = subcell_quadrature(coords, c, seg);
        double total = 0.0;
        double positive = 0.0;
        for (const auto& q : rule) {
            CHECK(q.weight > 0.0);
            total += q.weight;
            if (seg.phi(q.x) >= 0.0) positive += q.weight;
        }
        CHECK(std::abs(total - area) <= 1e-12 * area);
        if (c.kind == CutKind::Split) {
            CHECK(positive == doctest::Approx(positive_area(coords, seg)).epsilon(1e-12));
        }
    }
    CHECK(cut >= 6);

    const auto g = gauss_quadrature(m.element_coords(0), 3);
    CHECK(g.size() == 9);
}

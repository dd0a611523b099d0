#include <sstream>

#include <doctest.h>

#include "crackflutter/errors.hpp"
#include "crackflutter/mesh.hpp"
#include "crackflutter/q4.hpp"

using namespace crackflutter;
using namespace crackflutter::mesh;

TEST_CASE("structured mesh topology") {
    const auto m = generate_structured(2.0, 1.0, 4, 3);
    CHECK(m.node_count() == 20);
    CHECK(m.element_count() == 12);
    double total = 0.0;
    for (std::size_t e = 0; e < m.element_count(); ++e) {
        const double area = q4::area(m.element_coords(e));
        CHECK(area > 0.0);  // counterclockwise
        total += area;
    }
    CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m.characteristic_size() == doctest::Approx(std::sqrt(2.0 / 12.0)));
    CHECK_THROWS_AS(generate_structured(1.0, 1.0, 0, 3), ArgumentError);
}

TEST_CASE("boundary conditions") {
    const auto m = generate_structured(1.0, 1.0, 4, 4);
    const int boundary_nodes = 16;

    SUBCASE("simply supported") {
        const auto d = apply_boundary(m, BoundaryKind::SimplySupported);
        for (std::size_t i = 0; i < m.node_count(); ++i) {
            const auto& p = m.nodes[i];
            const bool on_x = p.x() == 0.0 || p.x() == 1.0;
            const bool on_y = p.y() == 0.0 || p.y() == 1.0;
            const int n = static_cast<int>(i);
            CHECK(d.is_constrained(n, W0) == (on_x || on_y));
            CHECK(d.is_constrained(n, ThetaY) == on_x);
            CHECK(d.is_constrained(n, U0) == on_x);
            CHECK(d.is_constrained(n, ThetaX) == on_y);
            CHECK(d.is_constrained(n, V0) == on_y);
        }
    }
    SUBCASE("clamped") {
        const auto d = apply_boundary(m, BoundaryKind::Clamped);
        CHECK(d.free_count == d.total_count() - 5 * boundary_nodes);
    }
    SUBCASE("cantilever") {
        const auto d = apply_boundary(m, BoundaryKind::CantileverX0);
        CHECK(d.free_count == d.total_count() - 5 * 5);
        for (std::size_t i = 0; i < m.node_count(); ++i) {
            CHECK(d.is_constrained(static_cast<int>(i), W0) == (m.nodes[i].x() == 0.0));
        }
    }
    SUBCASE("free") {
        const auto d = apply_boundary(m, BoundaryKind::Free);
        CHECK(d.free_count == d.total_count());
    }
}

TEST_CASE("free index numbering is dense and ordered") {
    const auto m = generate_structured(1.0, 1.0, 3, 3);
    const auto d = apply_boundary(m, BoundaryKind::SimplySupported);
    int expected = 0;
    for (int g = 0; g < d.total_count(); ++g) {
        if (d.constrained[g]) {
            CHECK(d.free_index[g] == -1);
        } else {
            CHECK(d.free_index[g] == expected++);
        }
    }
    CHECK(expected == d.free_count);
}

TEST_CASE("boundary kind names") {
    CHECK(parse_boundary_kind("SSSS") == BoundaryKind::SimplySupported);
    CHECK(parse_boundary_kind("clamped") == BoundaryKind::Clamped);
    CHECK(parse_boundary_kind("CFFF") == BoundaryKind::CantileverX0);
    CHECK(parse_boundary_kind(to_string(BoundaryKind::Free)) == BoundaryKind::Free);
    CHECK_THROWS_AS(parse_boundary_kind("hinged"), ArgumentError);
}

TEST_CASE("mesh CSV export") {
    const auto m = generate_structured(1.0, 1.0, 1, 1);
    std::ostringstream nodes;
    std::ostringstream elements;
    write_csv(m, nodes, elements);
    CHECK(nodes.str().rfind("id,x,y\n", 0) == 0);
    CHECK(elements.str().rfind("id,n0,n1,n2,n3\n", 0) == 0);
    CHECK(elements.str().find("0,0,1,3,2") != std::string::npos);
}

TEST_CASE("bilinear map round trip") {
    q4::Coords c{q4::Point(0.0, 0.0), q4::Point(1.2, 0.1), q4::Point(1.0, 0.9), q4::Point(-0.1, 1.1)};
    for (double xi : {-0.7, 0.0, 0.3}) {
        for (double eta : {-0.2, 0.5, 0.9}) {
            const auto x = q4::map(c, xi, eta);
            const auto back = q4::inverse_map(c, x);
            CHECK(back.x() == doctest::Approx(xi).epsilon(1e-12));
            CHECK(back.y() == doctest::Approx(eta).epsilon(1e-12));
        }
    }
}

#pragma once

#include <array>
#include <cmath>

#include <Eigen/Core>
#include <Eigen/LU>

#include "crackflutter/errors.hpp"

// Bilinear quadrilateral geometry on the natural square [-1, 1]^2.
namespace crackflutter::q4 {

using Point = Eigen::Vector2d;
using Coords = std::array<Point, 4>;

inline constexpr std::array<double, 4> kXi{-1.0, 1.0, 1.0, -1.0};
inline constexpr std::array<double, 4> kEta{-1.0, -1.0, 1.0, 1.0};

inline Eigen::Vector4d shape(double xi, double eta) {
    Eigen::Vector4d n;
    for (int i = 0; i < 4; ++i) {
        n[i] = 0.25 * (1.0 + kXi[i] * xi) * (1.0 + kEta[i] * eta);
    }
    return n;
}

/// Row 0: dN/dxi, row 1: dN/deta.
inline Eigen::Matrix<double, 2, 4> shape_natural_derivatives(double xi, double eta) {
    Eigen::Matrix<double, 2, 4> d;
    for (int i = 0; i < 4; ++i) {
        d(0, i) = 0.25 * kXi[i] * (1.0 + kEta[i] * eta);
        d(1, i) = 0.25 * kEta[i] * (1.0 + kXi[i] * xi);
    }
    return d;
}

inline Eigen::Matrix<double, 4, 2> coord_matrix(const Coords& c) {
    Eigen::Matrix<double, 4, 2> x;
    for (int i = 0; i < 4; ++i) {
        x.row(i) = c[i].transpose();
    }
    return x;
}

/// J = [[x_xi, y_xi], [x_eta, y_eta]].
inline Eigen::Matrix2d jacobian(const Coords& c, double xi, double eta) {
    return shape_natural_derivatives(xi, eta) * coord_matrix(c);
}

inline Point map(const Coords& c, double xi, double eta) {
    const Eigen::Vector4d n = shape(xi, eta);
    Point p = Point::Zero();
    for (int i = 0; i < 4; ++i) {
        p += n[i] * c[i];
    }
    return p;
}

/// Natural coordinates of a physical point by Newton iteration.
inline Point inverse_map(const Coords& c, const Point& x) {
    Point nat = Point::Zero();
    const double scale = (c[2] - c[0]).norm() + (c[3] - c[1]).norm();
    for (int it = 0; it < 50; ++it) {
        const Point r = map(c, nat[0], nat[1]) - x;
        if (r.norm() <= 1e-15 * scale) {
            return nat;
        }
        const Eigen::Matrix2d j = jacobian(c, nat[0], nat[1]);
        nat -= j.transpose().lu().solve(r);
    }
    const Point r = map(c, nat[0], nat[1]) - x;
    if (r.norm() > 1e-10 * scale) {
        throw GeometryError("q4::inverse_map did not converge");
    }
    return nat;
}

inline double area(const Coords& c) {
    const Point d1 = c[2] - c[0];
    const Point d2 = c[3] - c[1];
    return 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
}

}  // namespace crackflutter::q4

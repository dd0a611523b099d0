#include "crackflutter/crack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "crackflutter/errors.hpp"
#include "crackflutter/q4.hpp"
#include "crackflutter/quadrature.hpp"

namespace crackflutter::crack {

namespace {

constexpr double kProximityTolerance = 1e-8;  // relative to element size
constexpr double kPerturbation = 1e-6;        // relative to element size
constexpr int kMaxPerturbations = 8;

struct BoundingBox {
    double xmin, xmax, ymin, ymax;

    bool strictly_inside(const Point& p, double tol) const {
        return p.x() > xmin + tol && p.x() < xmax - tol && p.y() > ymin + tol &&
               p.y() < ymax - tol;
    }
};

BoundingBox bounding_box(const mesh::Mesh& mesh) {
    BoundingBox box{mesh.nodes.front().x(), mesh.nodes.front().x(), mesh.nodes.front().y(),
                    mesh.nodes.front().y()};
    for (const auto& p : mesh.nodes) {
        box.xmin = std::min(box.xmin, p.x());
        box.xmax = std::max(box.xmax, p.x());
        box.ymin = std::min(box.ymin, p.y());
        box.ymax = std::max(box.ymax, p.y());
    }
    return box;
}

double distance_to_segment(const Point& p, const Point& a, const Point& b) {
    const Point ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

// Signed distance of p from the left side of edge a -> b (positive inside a CCW polygon).
double inward_distance(const Point& p, const Point& a, const Point& b) {
    const Point e = b - a;
    return cross(e, p - a) / e.norm();
}

bool strictly_inside_element(const q4::Coords& c, const Point& p, double tol) {
    for (int k = 0; k < 4; ++k) {
        if (inward_distance(p, c[k], c[(k + 1) % 4]) <= tol) {
            return false;
        }
    }
    return true;
}

void append_triangle(std::vector<QuadraturePoint>& out, const Point& a, const Point& b,
                     const Point& c, const quadrature::TriangleRule& rule, double min_area) {
    const double area = 0.5 * cross(b - a, c - a);
    if (std::abs(area) <= min_area) {
        return;
    }
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& l = rule.barycentric[q];
        out.push_back({l[0] * a + l[1] * b + l[2] * c, rule.weights[q] * std::abs(area)});
    }
}

void append_fan(std::vector<QuadraturePoint>& out, const std::vector<Point>& polygon,
                const quadrature::TriangleRule& rule, double min_area) {
    Point centroid = Point::Zero();
    for (const auto& p : polygon) {
        centroid += p;
    }
    centroid /= static_cast<double>(polygon.size());
    for (std::size_t k = 0; k < polygon.size(); ++k) {
        append_triangle(out, centroid, polygon[k], polygon[(k + 1) % polygon.size()], rule,
                        min_area);
    }
}

}  // namespace

CrackKind parse_crack_kind(std::string_view name) {
    if (name == "center") {
        return CrackKind::Center;
    }
    if (name == "edge") {
        return CrackKind::Edge;
    }
    throw ArgumentError("unknown crack kind '" + std::string(name) + "'");
}

std::string_view to_string(CrackKind kind) {
    return kind == CrackKind::Center ? "center" : "edge";
}

Point CrackGeometry::tangent() const { return {std::cos(theta), std::sin(theta)}; }
Point CrackGeometry::normal() const { return {-std::sin(theta), std::cos(theta)}; }

std::array<Point, 2> CrackGeometry::endpoints() const {
    const Point c(cx, cy);
    return {c - 0.5 * d * tangent(), c + 0.5 * d * tangent()};
}

LevelSets level_sets(const CrackGeometry& crack, const Point& p) {
    const Point rel = p - Point(crack.cx, crack.cy);
    const double s = rel.dot(crack.tangent());
    return {rel.dot(crack.normal()), std::abs(s) - 0.5 * crack.d};
}

Point CrackSegment::tangent() const { return (end - start).normalized(); }

Point CrackSegment::normal() const {
    const Point t = tangent();
    return {-t.y(), t.x()};
}

LevelSets CrackSegment::level_sets(const Point& p) const {
    const double s = (p - start).dot(tangent());
    const double len = length();
    double psi;
    if (start_is_tip && end_is_tip) {
        psi = std::max(-s, s - len);
    } else if (end_is_tip) {
        psi = s - len;
    } else {
        psi = -s;
    }
    return {phi(p), psi};
}

CrackSegment regularize(const mesh::Mesh& mesh, const CrackGeometry& crack) {
    if (!(crack.d > 0.0) || !std::isfinite(crack.d)) {
        throw GeometryError("crack length must be positive");
    }
    const double h = mesh.characteristic_size();
    if (crack.d < kPerturbation * h) {
        throw GeometryError("crack length below the mesh-size tolerance");
    }
    const BoundingBox box = bounding_box(mesh);
    const double inside_tol = kProximityTolerance * h;

    auto [p0, p1] = crack.endpoints();
    const Point t = crack.tangent();
    const bool in0 = box.strictly_inside(p0, inside_tol);
    const bool in1 = box.strictly_inside(p1, inside_tol);

    CrackSegment seg{p0, p1, in0, in1};
    if (crack.kind == CrackKind::Center) {
        if (!in0 || !in1) {
            throw GeometryError("center crack: both tips must lie strictly inside the plate");
        }
    } else {
        if (in0 == in1) {
            throw GeometryError("edge crack: exactly one tip must lie inside the plate");
        }
        // Push the mouth past the boundary so the plate edge is crossed cleanly.
        if (!in0) {
            seg.start = p0 - h * t;
        } else {
            seg.end = p1 + h * t;
        }
    }

    const double near = kProximityTolerance * h;
    const double shift = kPerturbation * h;

    for (int attempt = 0; attempt < kMaxPerturbations; ++attempt) {
        const bool close = std::any_of(mesh.nodes.begin(), mesh.nodes.end(), [&](const Point& p) {
            return distance_to_segment(p, seg.start, seg.end) < near;
        });
        if (!close) {
            break;
        }
        const Point n = seg.normal();
        seg.start += shift * n;
        seg.end += shift * n;
    }

    for (int tip = 0; tip < 2; ++tip) {
        if (!seg.is_tip(tip)) {
            continue;
        }
        for (int attempt = 0; attempt < kMaxPerturbations; ++attempt) {
            const Point p = seg.tip(tip);
            bool close = false;
            for (std::size_t e = 0; e < mesh.element_count() && !close; ++e) {
                const auto c = mesh.element_coords(e);
                for (int k = 0; k < 4 && !close; ++k) {
                    close = distance_to_segment(p, c[k], c[(k + 1) % 4]) < near;
                }
            }
            if (!close) {
                break;
            }
            const Point outward = tip == 0 ? Point(-seg.tangent()) : seg.tangent();
            if (tip == 0) {
                seg.start += shift * outward;
            } else {
                seg.end += shift * outward;
            }
        }
    }
    return seg;
}

std::vector<ElementCut> classify_elements(const mesh::Mesh& mesh, const CrackSegment& segment) {
    const double h = mesh.characteristic_size();
    const double tol = 1e-12 * h;
    std::vector<ElementCut> cuts(mesh.element_count());
    const Point d = segment.end - segment.start;

    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        ElementCut& cut = cuts[e];
        cut.element = static_cast<int>(e);
        const auto c = mesh.element_coords(e);

        // Cyrus-Beck clipping of the segment against the convex element.
        double t0 = 0.0;
        double t1 = 1.0;
        bool empty = false;
        for (int k = 0; k < 4 && !empty; ++k) {
            const Point edge = c[(k + 1) % 4] - c[k];
            const Point inward(-edge.y(), edge.x());
            const double num = inward.dot(c[k] - segment.start);
            const double den = inward.dot(d);
            if (den == 0.0) {
                empty = inward.dot(segment.start - c[k]) < 0.0;
            } else if (den > 0.0) {
                t0 = std::max(t0, num / den);
            } else {
                t1 = std::min(t1, num / den);
            }
        }
        if (empty || (t1 - t0) * d.norm() <= tol) {
            continue;
        }

        const bool start_inside = segment.start_is_tip && strictly_inside_element(c, segment.start, tol);
        const bool end_inside = segment.end_is_tip && strictly_inside_element(c, segment.end, tol);
        if (start_inside && end_inside) {
            throw GeometryError("crack lies entirely inside element " + std::to_string(e) +
                                "; refine the mesh or lengthen the crack");
        }
        cut.entry = segment.start + t0 * d;
        cut.exit = segment.start + t1 * d;
        if (start_inside || end_inside) {
            cut.kind = CutKind::Tip;
            cut.tip = start_inside ? 0 : 1;
            cut.tip_point = segment.tip(cut.tip);
        } else {
            cut.kind = CutKind::Split;
        }
    }
    return cuts;
}

std::vector<ElementCut> classify_elements(const mesh::Mesh& mesh, const CrackGeometry& crack) {
    return classify_elements(mesh, regularize(mesh, crack));
}

std::array<double, 4> tip_branch(double r, double theta) {
    const double sr = std::sqrt(std::max(r, 0.0));
    const double s2 = std::sin(0.5 * theta);
    const double c2 = std::cos(0.5 * theta);
    const double st = std::sin(theta);
    return {sr * s2, sr * c2, sr * s2 * st, sr * c2 * st};
}

BranchEvaluation tip_branch_at(const CrackSegment& segment, int tip, const Point& p) {
    // Local frame: e1 points away from the crack faces, crack faces at theta = +-pi.
    const Point e1 = tip == 0 ? Point(-segment.tangent()) : segment.tangent();
    const Point e2(-e1.y(), e1.x());
    const Point rel = p - segment.tip(tip);
    const double xl = rel.dot(e1);
    const double yl = rel.dot(e2);
    const double r = std::hypot(xl, yl);
    const double th = std::atan2(yl, xl);

    BranchEvaluation out;
    out.value = tip_branch(r, th);
    if (r <= 0.0) {
        return out;
    }
    const double sr = std::sqrt(r);
    const double s2 = std::sin(0.5 * th);
    const double c2 = std::cos(0.5 * th);
    const double st = std::sin(th);
    const double ct = std::cos(th);

    // Partial derivatives with respect to r and theta.
    const std::array<double, 4> dr{s2 / (2.0 * sr), c2 / (2.0 * sr), s2 * st / (2.0 * sr),
                                   c2 * st / (2.0 * sr)};
    const std::array<double, 4> dth{0.5 * sr * c2, -0.5 * sr * s2,
                                    sr * (0.5 * c2 * st + s2 * ct),
                                    sr * (-0.5 * s2 * st + c2 * ct)};
    for (int j = 0; j < 4; ++j) {
        const double dxl = ct * dr[j] - st / r * dth[j];
        const double dyl = st * dr[j] + ct / r * dth[j];
        out.gradient[j] = dxl * e1 + dyl * e2;
    }
    return out;
}

int EnrichedDofMap::enriched_node_count() const {
    int count = 0;
    for (std::size_t i = 0; i < heaviside_start.size(); ++i) {
        count += (heaviside_start[i] >= 0 || tip_start[i] >= 0) ? 1 : 0;
    }
    return count;
}

EnrichedDofMap unenriched(const mesh::DofMap& base) {
    EnrichedDofMap map;
    map.base = base;
    map.heaviside_start.assign(base.node_count, -1);
    map.tip_start.assign(base.node_count, -1);
    map.tip_of_node.assign(base.node_count, -1);
    map.constrained = base.constrained;
    map.free_index = base.free_index;
    map.free_count = base.free_count;
    return map;
}

EnrichedDofMap build_enrichment_map(const mesh::Mesh& mesh, const std::vector<ElementCut>& cuts,
                                    const CrackSegment& segment, const mesh::DofMap& base) {
    EnrichedDofMap map = unenriched(base);
    const int n_nodes = base.node_count;

    for (const auto& cut : cuts) {
        if (cut.kind != CutKind::Tip) {
            continue;
        }
        for (int node : mesh.elements[cut.element]) {
            if (map.tip_of_node[node] >= 0 && map.tip_of_node[node] != cut.tip) {
                throw GeometryError("node " + std::to_string(node) +
                                    " lies in the support of both crack tips");
            }
            map.tip_of_node[node] = cut.tip;
        }
    }

    std::vector<std::vector<int>> node_elements(n_nodes);
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        for (int node : mesh.elements[e]) {
            node_elements[node].push_back(static_cast<int>(e));
        }
    }

    std::vector<char> heaviside(n_nodes, 0);
    for (const auto& cut : cuts) {
        if (cut.kind != CutKind::Split) {
            continue;
        }
        for (int node : mesh.elements[cut.element]) {
            if (map.tip_of_node[node] < 0) {
                heaviside[node] = 1;
            }
        }
    }

    // Drop nodes whose support is split into a vanishing sliver.
    for (int node = 0; node < n_nodes; ++node) {
        if (!heaviside[node]) {
            continue;
        }
        double positive = 0.0;
        double negative = 0.0;
        for (int e : node_elements[node]) {
            const auto coords = mesh.element_coords(e);
            if (cuts[e].kind == CutKind::Standard) {
                const Point centroid = 0.25 * (coords[0] + coords[1] + coords[2] + coords[3]);
                (segment.phi(centroid) >= 0.0 ? positive : negative) += q4::area(coords);
                continue;
            }
            for (const auto& qp : subcell_quadrature(coords, cuts[e], segment)) {
                (segment.phi(qp.x) >= 0.0 ? positive : negative) += qp.weight;
            }
        }
        if (std::min(positive, negative) < kMinSupportFraction * (positive + negative)) {
            heaviside[node] = 0;
        }
    }

    int next = base.total_count();
    for (int node = 0; node < n_nodes; ++node) {
        if (heaviside[node]) {
            map.heaviside_start[node] = next;
            next += mesh::kFieldsPerNode;
        }
        if (map.tip_of_node[node] >= 0) {
            map.tip_start[node] = next;
            next += 4 * mesh::kFieldsPerNode;
        }
    }

    map.constrained.resize(next, 0);
    for (int node = 0; node < n_nodes; ++node) {
        for (int f = 0; f < mesh::kFieldsPerNode; ++f) {
            if (!base.is_constrained(node, f)) {
                continue;
            }
            if (map.heaviside_start[node] >= 0) {
                map.constrained[map.heaviside_dof(node, f)] = 1;
            }
            if (map.tip_start[node] >= 0) {
                for (int j = 0; j < 4; ++j) {
                    map.constrained[map.tip_dof(node, j, f)] = 1;
                }
            }
        }
    }
    map.free_index.assign(next, -1);
    map.free_count = 0;
    for (int i = 0; i < next; ++i) {
        if (!map.constrained[i]) {
            map.free_index[i] = map.free_count++;
        }
    }
    return map;
}

std::vector<QuadraturePoint> gauss_quadrature(const std::array<Point, 4>& element, int n) {
    const auto& rule = quadrature::gauss_legendre(n);
    std::vector<QuadraturePoint> out;
    out.reserve(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double xi = rule.points[i];
            const double eta = rule.points[j];
            const double det = q4::jacobian(element, xi, eta).determinant();
            if (!(det > 0.0)) {
                throw GeometryError("non-positive Jacobian determinant");
            }
            out.push_back({q4::map(element, xi, eta), rule.weights[i] * rule.weights[j] * det});
        }
    }
    return out;
}

std::vector<QuadraturePoint> subcell_quadrature(const std::array<Point, 4>& element,
                                                const ElementCut& cut,
                                                const CrackSegment& segment) {
    if (cut.kind == CutKind::Standard) {
        return gauss_quadrature(element, 2);
    }
    const auto& rule = quadrature::triangle_rule_7();
    const double area = q4::area(element);
    const double min_area = 1e-14 * area;
    std::vector<QuadraturePoint> out;

    if (cut.kind == CutKind::Split) {
        std::vector<Point> plus;
        std::vector<Point> minus;
        for (int k = 0; k < 4; ++k) {
            const Point& a = element[k];
            const Point& b = element[(k + 1) % 4];
            const double pa = segment.phi(a);
            const double pb = segment.phi(b);
            (pa >= 0.0 ? plus : minus).push_back(a);
            if ((pa >= 0.0) != (pb >= 0.0)) {
                const Point x = a + (pa / (pa - pb)) * (b - a);
                plus.push_back(x);
                minus.push_back(x);
            }
        }
        if (plus.size() < 3 || minus.size() < 3) {
            throw GeometryError("split element " + std::to_string(cut.element) +
                                " could not be partitioned");
        }
        append_fan(out, plus, rule, min_area);
        append_fan(out, minus, rule, min_area);
    } else {
        // Fan around the tip; the crack mouth point splits the boundary loop so
        // the crack itself is a triangle edge.
        std::vector<Point> loop;
        int best_edge = -1;
        double best = std::numeric_limits<double>::max();
        const Point mouth = cut.tip == 0 ? cut.exit : cut.entry;
        for (int k = 0; k < 4; ++k) {
            const double dist = distance_to_segment(mouth, element[k], element[(k + 1) % 4]);
            if (dist < best) {
                best = dist;
                best_edge = k;
            }
        }
        for (int k = 0; k < 4; ++k) {
            loop.push_back(element[k]);
            if (k == best_edge) {
                loop.push_back(mouth);
            }
        }
        for (std::size_t k = 0; k < loop.size(); ++k) {
            append_triangle(out, cut.tip_point, loop[k], loop[(k + 1) % loop.size()], rule,
                            min_area);
        }
    }

    double total = 0.0;
    for (const auto& qp : out) {
        total += qp.weight;
    }
    if (std::abs(total - area) > 1e-10 * area) {
        throw GeometryError("sub-cell quadrature of element " + std::to_string(cut.element) +
                            " does not partition its area");
    }
    return out;
}

}  // namespace crackflutter::crack

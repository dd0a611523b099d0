#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "crackflutter/mesh.hpp"

namespace crackflutter::crack {

using mesh::Point;

enum class CrackKind { Center, Edge };

CrackKind parse_crack_kind(std::string_view name);
std::string_view to_string(CrackKind kind);

/// User-facing crack description: a straight segment of length d centred at
/// (cx, cy), rotated theta radians from +x. Edge cracks have exactly one tip
/// inside the plate; the other end lies on or beyond the boundary.
struct CrackGeometry {
    double cx = 0.0;
    double cy = 0.0;
    double d = 0.0;
    double theta = 0.0;
    CrackKind kind = CrackKind::Center;

    Point tangent() const;
    Point normal() const;
    std::array<Point, 2> endpoints() const;
};

struct LevelSets {
    double phi = 0.0;  // signed normal distance
    double psi = 0.0;  // tangential distance past the nearer tip, negative inside the span
};

LevelSets level_sets(const CrackGeometry& crack, const Point& p);

/// Crack segment after the mesh-dependent perturbation rule has been applied.
/// The segment runs start -> end; tip flags mark ends lying inside the plate.
struct CrackSegment {
    Point start;
    Point end;
    bool start_is_tip = true;
    bool end_is_tip = true;

    Point tangent() const;
    Point normal() const;
    double length() const { return (end - start).norm(); }
    double phi(const Point& p) const { return (p - start).dot(normal()); }
    LevelSets level_sets(const Point& p) const;
    Point tip(int index) const { return index == 0 ? start : end; }
    bool is_tip(int index) const { return index == 0 ? start_is_tip : end_is_tip; }
};

/// Applies the geometric tolerance rule against `mesh`:
///  - a node within 1e-8 h of the crack moves the crack 1e-6 h along its normal;
///  - a tip within 1e-8 h of an element edge is pushed 1e-6 h further out along the crack;
///  - the outer end of an edge crack is extended one element size past the boundary.
/// Throws GeometryError for cracks violating the kind's tip-count invariant.
CrackSegment regularize(const mesh::Mesh& mesh, const CrackGeometry& crack);

enum class CutKind { Standard, Split, Tip };

struct ElementCut {
    int element = -1;
    CutKind kind = CutKind::Standard;
    Point entry = Point::Zero();  // segment of the crack inside the element
    Point exit = Point::Zero();
    int tip = -1;                 // 0 = segment start, 1 = segment end
    Point tip_point = Point::Zero();
};

/// Classifies every element of `mesh` against the (already regularized) crack.
/// Throws GeometryError when one element holds both tips.
std::vector<ElementCut> classify_elements(const mesh::Mesh& mesh, const CrackSegment& segment);
/// Regularizes then classifies.
std::vector<ElementCut> classify_elements(const mesh::Mesh& mesh, const CrackGeometry& crack);

/// Generalized Heaviside: +1 for phi >= 0, -1 otherwise.
inline double heaviside(double phi) { return phi >= 0.0 ? 1.0 : -1.0; }

/// Asymptotic crack-tip branch functions in tip polar coordinates.
std::array<double, 4> tip_branch(double r, double theta_local);

/// Branch function values and global (x, y) gradients at p for the given tip.
struct BranchEvaluation {
    std::array<double, 4> value{};
    std::array<Point, 4> gradient{};
};
BranchEvaluation tip_branch_at(const CrackSegment& segment, int tip, const Point& p);

/// Standard DOF map extended with Heaviside (5 per node) and tip (4 x 5 per
/// node) blocks appended after the standard DOFs in node order.
struct EnrichedDofMap {
    mesh::DofMap base;
    std::vector<int> heaviside_start;  // per node, -1 when absent
    std::vector<int> tip_start;        // per node, -1 when absent
    std::vector<int> tip_of_node;      // segment end index owning the tip block
    std::vector<char> constrained;     // per global DOF
    std::vector<int> free_index;       // per global DOF, -1 when constrained
    int free_count = 0;

    int total_count() const { return static_cast<int>(constrained.size()); }
    int heaviside_dof(int node, int field) const { return heaviside_start[node] + field; }
    int tip_dof(int node, int function, int field) const {
        return tip_start[node] + function * mesh::kFieldsPerNode + field;
    }
    int enriched_node_count() const;
};

/// Side-area fraction below which a cut nodal support is not Heaviside enriched.
inline constexpr double kMinSupportFraction = 1e-4;

EnrichedDofMap build_enrichment_map(const mesh::Mesh& mesh, const std::vector<ElementCut>& cuts,
                                    const CrackSegment& segment, const mesh::DofMap& base);
/// Map with no enrichment.
EnrichedDofMap unenriched(const mesh::DofMap& base);

struct QuadraturePoint {
    Point x;
    double weight = 0.0;  // physical area weight
};

/// Ordinary 2x2 Gauss rule for standard elements; crack-conforming
/// sub-triangulation with the 7-point rule for split and tip elements.
std::vector<QuadraturePoint> subcell_quadrature(const std::array<Point, 4>& element,
                                                const ElementCut& cut,
                                                const CrackSegment& segment);

/// n x n Gauss rule mapped onto a bilinear quadrilateral.
std::vector<QuadraturePoint> gauss_quadrature(const std::array<Point, 4>& element, int n);

}  // namespace crackflutter::crack

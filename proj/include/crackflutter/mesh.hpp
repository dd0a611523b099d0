#pragma once

#include <array>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace crackflutter::mesh {

/// Nodal fields in DOF order.
enum Field : int { U0 = 0, V0 = 1, W0 = 2, ThetaX = 3, ThetaY = 4 };
inline constexpr int kFieldsPerNode = 5;

using Point = Eigen::Vector2d;

struct Mesh {
    std::vector<Point> nodes;
    std::vector<std::array<int, 4>> elements;  // counterclockwise
    int nx = 0;
    int ny = 0;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t element_count() const { return elements.size(); }
    std::array<Point, 4> element_coords(std::size_t e) const;
    /// Square root of the mean element area.
    double characteristic_size() const;
};

/// Uniform nx-by-ny quadrilateral grid over [0, a] x [0, b].
Mesh generate_structured(double a, double b, int nx, int ny);

enum class BoundaryKind { SimplySupported, Clamped, CantileverX0, Free };

BoundaryKind parse_boundary_kind(std::string_view name);
std::string_view to_string(BoundaryKind kind);

/// Standard DOF numbering (node-major, 5 fields per node) plus the
/// constrained set. Constrained DOFs keep their index; `free_index` maps a
/// global DOF to its position among free DOFs or -1.
struct DofMap {
    int node_count = 0;
    std::vector<char> constrained;  // per global DOF
    std::vector<int> free_index;
    int free_count = 0;

    int dof(int node, int field) const { return node * kFieldsPerNode + field; }
    int total_count() const { return static_cast<int>(constrained.size()); }
    bool is_constrained(int node, int field) const { return constrained[dof(node, field)] != 0; }
    void renumber();
};

DofMap apply_boundary(const Mesh& mesh, BoundaryKind kind);

/// Writes "id,x,y" node and "id,n0,n1,n2,n3" element tables.
void write_csv(const Mesh& mesh, std::ostream& nodes_out, std::ostream& elements_out);

}  // namespace crackflutter::mesh

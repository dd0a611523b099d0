#include "crackflutter/mesh.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "crackflutter/errors.hpp"

namespace crackflutter::mesh {

std::array<Point, 4> Mesh::element_coords(std::size_t e) const {
    const auto& conn = elements.at(e);
    return {nodes[conn[0]], nodes[conn[1]], nodes[conn[2]], nodes[conn[3]]};
}

double Mesh::characteristic_size() const {
    double area = 0.0;
    for (std::size_t e = 0; e < elements.size(); ++e) {
        const auto p = element_coords(e);
        const Point d1 = p[2] - p[0];
        const Point d2 = p[3] - p[1];
        area += 0.5 * std::abs(d1.x() * d2.y() - d1.y() * d2.x());
    }
    return std::sqrt(area / static_cast<double>(elements.size()));
}

Mesh generate_structured(double a, double b, int nx, int ny) {
    if (nx < 1 || ny < 1) {
        throw ArgumentError("generate_structured: nx and ny must be >= 1");
    }
    if (!(a > 0.0) || !(b > 0.0)) {
        throw ArgumentError("generate_structured: plate dimensions must be positive");
    }
    Mesh mesh;
    mesh.nx = nx;
    mesh.ny = ny;
    mesh.nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j) {
        // Exact end coordinates so boundary detection needs no tolerance.
        const double y = j == ny ? b : b * j / ny;
        for (int i = 0; i <= nx; ++i) {
            const double x = i == nx ? a : a * i / nx;
            mesh.nodes.emplace_back(x, y);
        }
    }
    mesh.elements.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int n0 = j * (nx + 1) + i;
            mesh.elements.push_back({n0, n0 + 1, n0 + nx + 2, n0 + nx + 1});
        }
    }
    return mesh;
}

BoundaryKind parse_boundary_kind(std::string_view name) {
    if (name == "simply_supported" || name == "SSSS") {
        return BoundaryKind::SimplySupported;
    }
    if (name == "clamped" || name == "CCCC") {
        return BoundaryKind::Clamped;
    }
    if (name == "cantilever" || name == "CFFF") {
        return BoundaryKind::CantileverX0;
    }
    if (name == "free" || name == "FFFF") {
        return BoundaryKind::Free;
    }
    throw ArgumentError("unknown boundary kind '" + std::string(name) + "'");
}

std::string_view to_string(BoundaryKind kind) {
    switch (kind) {
        case BoundaryKind::SimplySupported: return "simply_supported";
        case BoundaryKind::Clamped: return "clamped";
        case BoundaryKind::CantileverX0: return "cantilever";
        case BoundaryKind::Free: return "free";
    }
    return "unknown";
}

void DofMap::renumber() {
    free_index.assign(constrained.size(), -1);
    free_count = 0;
    for (std::size_t i = 0; i < constrained.size(); ++i) {
        if (!constrained[i]) {
            free_index[i] = free_count++;
        }
    }
}

DofMap apply_boundary(const Mesh& mesh, BoundaryKind kind) {
    DofMap map;
    map.node_count = static_cast<int>(mesh.node_count());
    map.constrained.assign(mesh.node_count() * kFieldsPerNode, 0);

    double xmin = mesh.nodes.front().x(), xmax = xmin;
    double ymin = mesh.nodes.front().y(), ymax = ymin;
    for (const auto& p : mesh.nodes) {
        xmin = std::min(xmin, p.x());
        xmax = std::max(xmax, p.x());
        ymin = std::min(ymin, p.y());
        ymax = std::max(ymax, p.y());
    }
    const double tol = 1e-10 * std::max(xmax - xmin, ymax - ymin);

    auto fix = [&](int node, std::initializer_list<int> fields) {
        for (int f : fields) {
            map.constrained[map.dof(node, f)] = 1;
        }
    };

    for (int n = 0; n < map.node_count; ++n) {
        const Point& p = mesh.nodes[n];
        const bool on_x_edge = std::abs(p.x() - xmin) < tol || std::abs(p.x() - xmax) < tol;
        const bool on_y_edge = std::abs(p.y() - ymin) < tol || std::abs(p.y() - ymax) < tol;
        switch (kind) {
            case BoundaryKind::SimplySupported:
                if (on_x_edge) fix(n, {U0, W0, ThetaY});
                if (on_y_edge) fix(n, {V0, W0, ThetaX});
                break;
            case BoundaryKind::Clamped:
                if (on_x_edge || on_y_edge) fix(n, {U0, V0, W0, ThetaX, ThetaY});
                break;
            case BoundaryKind::CantileverX0:
                if (std::abs(p.x() - xmin) < tol) fix(n, {U0, V0, W0, ThetaX, ThetaY});
                break;
            case BoundaryKind::Free:
                break;
        }
    }
    map.renumber();
    return map;
}

void write_csv(const Mesh& mesh, std::ostream& nodes_out, std::ostream& elements_out) {
    nodes_out << "id,x,y\n";
    nodes_out.precision(17);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        nodes_out << i << ',' << mesh.nodes[i].x() << ',' << mesh.nodes[i].y() << '\n';
    }
    elements_out << "id,n0,n1,n2,n3\n";
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const auto& c = mesh.elements[e];
        elements_out << e << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << c[3] << '\n';
    }
}

}  // namespace crackflutter::mesh

#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "crackflutter/crack.hpp"
#include "crackflutter/material.hpp"
#include "crackflutter/mesh.hpp"
#include "crackflutter/q4.hpp"

namespace crackflutter::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using mesh::Point;

/// Classified crack ready for assembly.
struct CrackModel {
    crack::CrackSegment segment;
    std::vector<crack::ElementCut> cuts;
};

CrackModel prepare_crack(const mesh::Mesh& mesh, const crack::CrackGeometry& geometry);

/// One scalar basis function of an element; all five fields share it.
struct BasisFunction {
    enum class Kind { Standard, Heaviside, Tip };
    Kind kind = Kind::Standard;
    int local_node = 0;
    int branch = 0;      // tip functions only
    int first_dof = 0;   // global DOF of field U0; field f lives at first_dof + f
    double node_sign = 0.0;                  // Heaviside value at the owning node
    std::array<double, 4> node_branch{};     // branch values at the owning node
};

struct QuadPoint {
    Point x;
    double xi = 0.0;
    double eta = 0.0;
    double weight = 0.0;
};

/// Everything needed to integrate one element: geometry, active basis
/// functions, quadrature and the crack (null for uncracked runs).
struct ElementContext {
    int element = -1;
    q4::Coords coords;
    std::vector<BasisFunction> functions;
    std::vector<QuadPoint> points;
    const crack::CrackSegment* segment = nullptr;
    int tip = -1;  // tip index used by tip functions

    int dof_count() const { return static_cast<int>(functions.size()) * mesh::kFieldsPerNode; }
    /// Global DOF for local index (function * 5 + field).
    int global_dof(int local) const {
        return functions[local / mesh::kFieldsPerNode].first_dof + local % mesh::kFieldsPerNode;
    }
};

ElementContext make_element_context(const mesh::Mesh& mesh, int element,
                                    const crack::EnrichedDofMap& dofs,
                                    const CrackModel* crack = nullptr);

/// Values and gradients of every basis function at one point, plus the 2x3
/// transverse shear operator (on w, theta_x, theta_y) for each function.
struct BasisEvaluation {
    Eigen::VectorXd value;
    Eigen::Matrix<double, 2, Eigen::Dynamic> gradient;
    std::vector<Eigen::Matrix<double, 2, 3>> shear;
};

/// Standard and Heaviside functions use the assumed natural shear strain
/// (edge-midpoint tying); tip functions use the direct strain.
BasisEvaluation evaluate_basis(const ElementContext& ctx, const QuadPoint& qp);

/// Strain operators: membrane (3 x n), bending (3 x n), shear (2 x n).
struct StrainOperators {
    Eigen::Matrix<double, 3, Eigen::Dynamic> membrane;
    Eigen::Matrix<double, 3, Eigen::Dynamic> bending;
    Eigen::Matrix<double, 2, Eigen::Dynamic> shear;
};
StrainOperators strain_operators(const ElementContext& ctx, const BasisEvaluation& basis);

Eigen::MatrixXd element_stiffness(const ElementContext& ctx,
                                  const material::SectionProperties& section);
Eigen::MatrixXd element_mass(const ElementContext& ctx, const material::SectionProperties& section);
/// Integral of N_w^T (cos t dN_w/dx + sin t dN_w/dy); nonzero only on w DOFs.
Eigen::MatrixXd element_aero(const ElementContext& ctx, double flow_angle);
/// Integral of N_w^T N_w: geometric part of the piston-theory damping term.
Eigen::MatrixXd element_aero_damping(const ElementContext& ctx);

/// Stress resultants (N, M, Q) at a natural point for element DOF values.
struct Resultants {
    Eigen::Vector3d force;
    Eigen::Vector3d moment;
    Eigen::Vector2d shear;
};
Resultants element_resultants(const ElementContext& ctx,
                              const material::SectionProperties& section,
                              const Eigen::VectorXd& element_dofs, double xi, double eta);

/// Quantities used to nondimensionalize frequencies and pressures.
struct Scales {
    double a = 1.0;
    double h = 1.0;
    double dc = 1.0;     // ceramic bending rigidity
    double rho_c = 1.0;  // ceramic density

    /// Omega^2 = omega^2 * frequency_factor.
    double frequency_factor() const { return a * a * a * a * rho_c * h / dc; }
    /// lambda_nd = lambda * pressure_factor.
    double pressure_factor() const { return a * a * a / dc; }
};

Scales scales_for(const material::FgmPlate& plate);

struct GlobalSystem {
    SparseMatrix k;
    SparseMatrix m;
    SparseMatrix a;  // aerodynamic matrix, lambda factored out
    crack::EnrichedDofMap dofs;
    Scales scales;
    double flow_angle = 0.0;

    int size() const { return static_cast<int>(k.rows()); }
};

GlobalSystem assemble(const mesh::Mesh& mesh, const CrackModel* crack,
                      const material::SectionProperties& section,
                      const crack::EnrichedDofMap& dofs, double flow_angle, const Scales& scales);

/// Free-DOF matrix of the damping diagnostic.
SparseMatrix assemble_aero_damping(const mesh::Mesh& mesh, const CrackModel* crack,
                                   const crack::EnrichedDofMap& dofs);

/// Matrix Market coordinate format, general storage, 17 significant digits.
void write_matrix_market(const SparseMatrix& matrix, std::ostream& out);

}  // namespace crackflutter::fem

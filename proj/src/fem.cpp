#include "crackflutter/fem.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <Eigen/LU>

#include "crackflutter/errors.hpp"
#include "crackflutter/quadrature.hpp"

namespace crackflutter::fem {

namespace {

using mesh::Field;
constexpr int kF = mesh::kFieldsPerNode;

// Gauss order for uncut elements touching tip-enriched nodes.
constexpr int kBlendingGaussOrder = 6;

// Covariant transverse shear of node i sampled at the tying point (xi, eta):
// row 0 along xi, row 1 along eta, columns (w, theta_x, theta_y).
Eigen::Matrix<double, 1, 3> tying_row(const q4::Coords& c, int i, double xi, double eta,
                                      int direction) {
    const Eigen::Vector4d n = q4::shape(xi, eta);
    const Eigen::Matrix<double, 2, 4> dn = q4::shape_natural_derivatives(xi, eta);
    const Eigen::Matrix2d j = q4::jacobian(c, xi, eta);
    Eigen::Matrix<double, 1, 3> row;
    row << dn(direction, i), n[i] * j(direction, 0), n[i] * j(direction, 1);
    return row;
}

// Assumed natural strain (edge-midpoint tying) operator of node i in x, y.
Eigen::Matrix<double, 2, 3> assumed_shear(const q4::Coords& c, const Eigen::Matrix2d& jinv,
                                          int i, double xi, double eta) {
    Eigen::Matrix<double, 2, 3> cov;
    cov.row(0) = 0.5 * (1.0 - eta) * tying_row(c, i, 0.0, -1.0, 0) +
                 0.5 * (1.0 + eta) * tying_row(c, i, 0.0, 1.0, 0);
    cov.row(1) = 0.5 * (1.0 - xi) * tying_row(c, i, -1.0, 0.0, 1) +
                 0.5 * (1.0 + xi) * tying_row(c, i, 1.0, 0.0, 1);
    return jinv * cov;
}

void scatter(std::vector<Eigen::Triplet<double>>& out, const ElementContext& ctx,
             const crack::EnrichedDofMap& dofs, const Eigen::MatrixXd& block) {
    const int n = ctx.dof_count();
    for (int c = 0; c < n; ++c) {
        const int gc = dofs.free_index[ctx.global_dof(c)];
        if (gc < 0) {
            continue;
        }
        for (int r = 0; r < n; ++r) {
            const int gr = dofs.free_index[ctx.global_dof(r)];
            if (gr < 0 || block(r, c) == 0.0) {
                continue;
            }
            out.emplace_back(gr, gc, block(r, c));
        }
    }
}

}  // namespace

CrackModel prepare_crack(const mesh::Mesh& mesh, const crack::CrackGeometry& geometry) {
    CrackModel model;
    model.segment = crack::regularize(mesh, geometry);
    model.cuts = crack::classify_elements(mesh, model.segment);
    return model;
}

ElementContext make_element_context(const mesh::Mesh& mesh, int element,
                                    const crack::EnrichedDofMap& dofs, const CrackModel* crack) {
    ElementContext ctx;
    ctx.element = element;
    ctx.coords = mesh.element_coords(element);
    ctx.segment = crack ? &crack->segment : nullptr;
    const auto& conn = mesh.elements[element];

    for (int i = 0; i < 4; ++i) {
        BasisFunction f;
        f.local_node = i;
        f.first_dof = conn[i] * kF;
        ctx.functions.push_back(f);
    }
    bool has_tip = false;
    for (int i = 0; i < 4; ++i) {
        const int node = conn[i];
        const bool heaviside = dofs.heaviside_start[node] >= 0;
        const bool tip = dofs.tip_start[node] >= 0;
        if ((heaviside || tip) && !crack) {
            throw AssemblyError("enriched DOFs present without a crack model");
        }
        if (heaviside) {
            BasisFunction f;
            f.kind = BasisFunction::Kind::Heaviside;
            f.local_node = i;
            f.first_dof = dofs.heaviside_start[node];
            f.node_sign = crack::heaviside(crack->segment.phi(ctx.coords[i]));
            ctx.functions.push_back(f);
        }
        if (tip) {
            const int owner = dofs.tip_of_node[node];
            if (ctx.tip >= 0 && ctx.tip != owner) {
                throw AssemblyError("element " + std::to_string(element) +
                                    " mixes tip enrichment from both crack tips");
            }
            ctx.tip = owner;
            has_tip = true;
            const auto at_node = crack::tip_branch_at(crack->segment, owner, ctx.coords[i]);
            for (int j = 0; j < 4; ++j) {
                BasisFunction f;
                f.kind = BasisFunction::Kind::Tip;
                f.local_node = i;
                f.branch = j;
                f.first_dof = dofs.tip_dof(node, j, 0);
                f.node_branch = at_node.value;
                ctx.functions.push_back(f);
            }
        }
    }

    const bool cut = crack && crack->cuts.at(element).kind != crack::CutKind::Standard;
    if (cut) {
        for (const auto& qp : crack::subcell_quadrature(ctx.coords, crack->cuts[element],
                                                        crack->segment)) {
            const Point nat = q4::inverse_map(ctx.coords, qp.x);
            ctx.points.push_back({qp.x, nat[0], nat[1], qp.weight});
        }
    } else {
        const int order = has_tip ? kBlendingGaussOrder : 2;
        const auto& rule = quadrature::gauss_legendre(order);
        for (int jq = 0; jq < order; ++jq) {
            for (int iq = 0; iq < order; ++iq) {
                const double xi = rule.points[iq];
                const double eta = rule.points[jq];
                const double det = q4::jacobian(ctx.coords, xi, eta).determinant();
                if (!(det > 0.0)) {
                    throw GeometryError("element " + std::to_string(element) +
                                        ": non-positive Jacobian determinant");
                }
                ctx.points.push_back({q4::map(ctx.coords, xi, eta), xi, eta,
                                      rule.weights[iq] * rule.weights[jq] * det});
            }
        }
    }
    return ctx;
}

BasisEvaluation evaluate_basis(const ElementContext& ctx, const QuadPoint& qp) {
    const Eigen::Vector4d n = q4::shape(qp.xi, qp.eta);
    const Eigen::Matrix<double, 2, 4> dnat = q4::shape_natural_derivatives(qp.xi, qp.eta);
    const Eigen::Matrix2d j = dnat * q4::coord_matrix(ctx.coords);
    const double det = j.determinant();
    if (!(det > 0.0)) {
        throw GeometryError("element " + std::to_string(ctx.element) +
                            ": singular or inverted Jacobian");
    }
    const Eigen::Matrix2d jinv = j.inverse();
    const Eigen::Matrix<double, 2, 4> dn = jinv * dnat;

    std::array<Eigen::Matrix<double, 2, 3>, 4> mitc;
    for (int i = 0; i < 4; ++i) {
        mitc[i] = assumed_shear(ctx.coords, jinv, i, qp.xi, qp.eta);
    }

    double side = 0.0;
    crack::BranchEvaluation branch;
    bool branch_ready = false;

    const auto count = ctx.functions.size();
    BasisEvaluation out;
    out.value.resize(static_cast<Eigen::Index>(count));
    out.gradient.resize(2, static_cast<Eigen::Index>(count));
    out.shear.resize(count);

    for (std::size_t a = 0; a < count; ++a) {
        const BasisFunction& f = ctx.functions[a];
        const int i = f.local_node;
        const auto idx = static_cast<Eigen::Index>(a);
        switch (f.kind) {
            case BasisFunction::Kind::Standard:
                out.value[idx] = n[i];
                out.gradient.col(idx) = dn.col(i);
                out.shear[a] = mitc[i];
                break;
            case BasisFunction::Kind::Heaviside: {
                if (side == 0.0) {
                    side = crack::heaviside(ctx.segment->phi(qp.x));
                }
                // On either side the shifted function is a scaled bilinear field,
                // so the tying construction carries over unchanged.
                const double s = side - f.node_sign;
                out.value[idx] = s * n[i];
                out.gradient.col(idx) = s * dn.col(i);
                out.shear[a] = s * mitc[i];
                break;
            }
            case BasisFunction::Kind::Tip: {
                if (!branch_ready) {
                    branch = crack::tip_branch_at(*ctx.segment, ctx.tip, qp.x);
                    branch_ready = true;
                }
                const double psi = branch.value[f.branch] - f.node_branch[f.branch];
                const double v = n[i] * psi;
                const Eigen::Vector2d g = dn.col(i) * psi + n[i] * branch.gradient[f.branch];
                out.value[idx] = v;
                out.gradient.col(idx) = g;
                out.shear[a] << g.x(), v, 0.0,
                                g.y(), 0.0, v;
                break;
            }
        }
    }
    return out;
}

StrainOperators strain_operators(const ElementContext& ctx, const BasisEvaluation& basis) {
    const int ndof = ctx.dof_count();
    StrainOperators ops;
    ops.membrane = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, ndof);
    ops.bending = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, ndof);
    ops.shear = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, ndof);
    for (std::size_t a = 0; a < ctx.functions.size(); ++a) {
        const int base = static_cast<int>(a) * kF;
        const double dx = basis.gradient(0, static_cast<Eigen::Index>(a));
        const double dy = basis.gradient(1, static_cast<Eigen::Index>(a));

        ops.membrane(0, base + Field::U0) = dx;
        ops.membrane(1, base + Field::V0) = dy;
        ops.membrane(2, base + Field::U0) = dy;
        ops.membrane(2, base + Field::V0) = dx;

        ops.bending(0, base + Field::ThetaX) = dx;
        ops.bending(1, base + Field::ThetaY) = dy;
        ops.bending(2, base + Field::ThetaX) = dy;
        ops.bending(2, base + Field::ThetaY) = dx;

        const auto& s = basis.shear[a];
        for (int r = 0; r < 2; ++r) {
            ops.shear(r, base + Field::W0) = s(r, 0);
            ops.shear(r, base + Field::ThetaX) = s(r, 1);
            ops.shear(r, base + Field::ThetaY) = s(r, 2);
        }
    }
    return ops;
}

Eigen::MatrixXd element_stiffness(const ElementContext& ctx,
                                  const material::SectionProperties& section) {
    const int ndof = ctx.dof_count();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(ndof, ndof);
    for (const auto& qp : ctx.points) {
        const auto ops = strain_operators(ctx, evaluate_basis(ctx, qp));
        const Eigen::Matrix<double, 3, Eigen::Dynamic> n_res =
            section.a * ops.membrane + section.b * ops.bending;
        const Eigen::Matrix<double, 3, Eigen::Dynamic> m_res =
            section.b * ops.membrane + section.db * ops.bending;
        k.noalias() += qp.weight * (ops.membrane.transpose() * n_res +
                                    ops.bending.transpose() * m_res +
                                    ops.shear.transpose() * (section.es * ops.shear));
    }
    return 0.5 * (k + k.transpose());
}

Eigen::MatrixXd element_mass(const ElementContext& ctx,
                             const material::SectionProperties& section) {
    const int ndof = ctx.dof_count();
    const auto nfun = static_cast<Eigen::Index>(ctx.functions.size());
    Eigen::MatrixXd scalar = Eigen::MatrixXd::Zero(nfun, nfun);
    for (const auto& qp : ctx.points) {
        const auto basis = evaluate_basis(ctx, qp);
        scalar.noalias() += qp.weight * basis.value * basis.value.transpose();
    }
    scalar = 0.5 * (scalar + scalar.transpose());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ndof, ndof);
    for (Eigen::Index a = 0; a < nfun; ++a) {
        for (Eigen::Index b = 0; b < nfun; ++b) {
            const double s = scalar(a, b);
            for (int f = 0; f < kF; ++f) {
                const double inertia = f <= Field::W0 ? section.i0 : section.i1;
                m(a * kF + f, b * kF + f) = inertia * s;
            }
        }
    }
    return m;
}

Eigen::MatrixXd element_aero(const ElementContext& ctx, double flow_angle) {
    const int ndof = ctx.dof_count();
    const auto nfun = static_cast<Eigen::Index>(ctx.functions.size());
    const double c = std::cos(flow_angle);
    const double s = std::sin(flow_angle);
    Eigen::MatrixXd scalar = Eigen::MatrixXd::Zero(nfun, nfun);
    for (const auto& qp : ctx.points) {
        const auto basis = evaluate_basis(ctx, qp);
        const Eigen::RowVectorXd slope = c * basis.gradient.row(0) + s * basis.gradient.row(1);
        scalar.noalias() += qp.weight * basis.value * slope;
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ndof, ndof);
    for (Eigen::Index i = 0; i < nfun; ++i) {
        for (Eigen::Index j = 0; j < nfun; ++j) {
            a(i * kF + Field::W0, j * kF + Field::W0) = scalar(i, j);
        }
    }
    return a;
}

Eigen::MatrixXd element_aero_damping(const ElementContext& ctx) {
    const int ndof = ctx.dof_count();
    const auto nfun = static_cast<Eigen::Index>(ctx.functions.size());
    Eigen::MatrixXd scalar = Eigen::MatrixXd::Zero(nfun, nfun);
    for (const auto& qp : ctx.points) {
        const auto basis = evaluate_basis(ctx, qp);
        scalar.noalias() += qp.weight * basis.value * basis.value.transpose();
    }
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(ndof, ndof);
    for (Eigen::Index i = 0; i < nfun; ++i) {
        for (Eigen::Index j = 0; j < nfun; ++j) {
            g(i * kF + Field::W0, j * kF + Field::W0) = scalar(i, j);
        }
    }
    return 0.5 * (g + g.transpose());
}

Resultants element_resultants(const ElementContext& ctx,
                              const material::SectionProperties& section,
                              const Eigen::VectorXd& element_dofs, double xi, double eta) {
    if (element_dofs.size() != ctx.dof_count()) {
        throw ArgumentError("element_resultants: DOF vector size mismatch");
    }
    const QuadPoint qp{q4::map(ctx.coords, xi, eta), xi, eta, 0.0};
    const auto ops = strain_operators(ctx, evaluate_basis(ctx, qp));
    const Eigen::Vector3d membrane = ops.membrane * element_dofs;
    const Eigen::Vector3d bending = ops.bending * element_dofs;
    const Eigen::Vector2d shear = ops.shear * element_dofs;
    return {section.a * membrane + section.b * bending, section.b * membrane + section.db * bending,
            section.es * shear};
}

Scales scales_for(const material::FgmPlate& plate) {
    return {plate.a, plate.h, material::ceramic_bending_rigidity(plate),
            material::ceramic_density(plate)};
}

GlobalSystem assemble(const mesh::Mesh& mesh, const CrackModel* crack,
                      const material::SectionProperties& section,
                      const crack::EnrichedDofMap& dofs, double flow_angle, const Scales& scales) {
    if (dofs.base.node_count != static_cast<int>(mesh.node_count()) ||
        static_cast<int>(dofs.free_index.size()) != dofs.total_count()) {
        throw AssemblyError("DOF map does not match the mesh");
    }
    if (crack && crack->cuts.size() != mesh.element_count()) {
        throw AssemblyError("crack classification does not match the mesh");
    }
    std::vector<Eigen::Triplet<double>> kt;
    std::vector<Eigen::Triplet<double>> mt;
    std::vector<Eigen::Triplet<double>> at;
    for (int e = 0; e < static_cast<int>(mesh.element_count()); ++e) {
        const ElementContext ctx = make_element_context(mesh, e, dofs, crack);
        scatter(kt, ctx, dofs, element_stiffness(ctx, section));
        scatter(mt, ctx, dofs, element_mass(ctx, section));
        scatter(at, ctx, dofs, element_aero(ctx, flow_angle));
    }
    GlobalSystem sys;
    const int n = dofs.free_count;
    sys.k.resize(n, n);
    sys.m.resize(n, n);
    sys.a.resize(n, n);
    sys.k.setFromTriplets(kt.begin(), kt.end());
    sys.m.setFromTriplets(mt.begin(), mt.end());
    sys.a.setFromTriplets(at.begin(), at.end());
    sys.dofs = dofs;
    sys.scales = scales;
    sys.flow_angle = flow_angle;
    return sys;
}

SparseMatrix assemble_aero_damping(const mesh::Mesh& mesh, const CrackModel* crack,
                                   const crack::EnrichedDofMap& dofs) {
    std::vector<Eigen::Triplet<double>> gt;
    for (int e = 0; e < static_cast<int>(mesh.element_count()); ++e) {
        const ElementContext ctx = make_element_context(mesh, e, dofs, crack);
        scatter(gt, ctx, dofs, element_aero_damping(ctx));
    }
    SparseMatrix g(dofs.free_count, dofs.free_count);
    g.setFromTriplets(gt.begin(), gt.end());
    return g;
}

void write_matrix_market(const SparseMatrix& matrix, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
    out.precision(17);
    for (int c = 0; c < matrix.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(matrix, c); it; ++it) {
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
        }
    }
}

}  // namespace crackflutter::fem

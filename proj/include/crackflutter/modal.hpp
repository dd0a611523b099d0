#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "crackflutter/fem.hpp"

namespace crackflutter::modal {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Lowest in-vacuo modes, mass orthonormal, sorted by ascending omega^2.
struct ModalBasis {
    Eigen::VectorXd omega2;
    Eigen::MatrixXd phi;
    int iterations = 0;
    double max_residual = 0.0;

    int size() const { return static_cast<int>(omega2.size()); }
};

struct SolverOptions {
    double tolerance = 1e-8;  // relative residual of the shifted problem
    int max_iterations = 2000;
    std::uint64_t seed = 20240611;
    /// Shift below the spectrum; chosen from the matrix diagonals when absent.
    std::optional<double> shift;
};

/// Shift-invert block subspace iteration with Rayleigh-Ritz projection for
/// the lowest `count` eigenpairs of K phi = omega^2 M phi.
ModalBasis free_vibration(const SparseMatrix& k, const SparseMatrix& m, int count,
                          const SolverOptions& options = {});
ModalBasis free_vibration(const fem::GlobalSystem& system, int count,
                          const SolverOptions& options = {});

/// Modal projection: diagonal stiffness plus full unsymmetric aerodynamic
/// matrix; the reduced mass is the identity.
struct ReducedPencil {
    Eigen::VectorXd kr;
    Eigen::MatrixXd ar;

    int size() const { return static_cast<int>(kr.size()); }
    Eigen::MatrixXd matrix(double lambda) const;
};

ReducedPencil reduce(const fem::GlobalSystem& system, const ModalBasis& basis);

struct ComplexEigenpair {
    std::complex<double> value;  // omega^2
    Eigen::VectorXcd vector;     // unit 2-norm
};

/// All eigenpairs of Kr + lambda Ar, sorted by real part then imaginary part.
std::vector<ComplexEigenpair> complex_eigs(const ReducedPencil& pencil, double lambda);

}  // namespace crackflutter::modal

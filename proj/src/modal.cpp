#include "crackflutter/modal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include "crackflutter/errors.hpp"

namespace crackflutter::modal {

namespace {

// Fraction of the mean diagonal ratio K_ii / M_ii used as the default shift.
constexpr double kDefaultShiftFraction = 1e-9;

double default_shift(const SparseMatrix& k, const SparseMatrix& m) {
    const Eigen::VectorXd kd = k.diagonal();
    const Eigen::VectorXd md = m.diagonal();
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < kd.size(); ++i) {
        if (md[i] > 0.0 && kd[i] > 0.0) {
            sum += kd[i] / md[i];
            ++count;
        }
    }
    if (count == 0) {
        throw SolverError("free_vibration: mass matrix has no positive diagonal entries");
    }
    return -kDefaultShiftFraction * sum / count;
}

}  // namespace

ModalBasis free_vibration(const SparseMatrix& k, const SparseMatrix& m, int count,
                          const SolverOptions& options) {
    const auto n = k.rows();
    if (k.cols() != n || m.rows() != n || m.cols() != n) {
        throw ArgumentError("free_vibration: K and M must be square and of equal size");
    }
    if (count < 1 || count > n) {
        throw ArgumentError("free_vibration: mode count must be in [1, free DOF count]");
    }
    const double shift = options.shift.value_or(default_shift(k, m));
    const auto block = static_cast<Eigen::Index>(std::min<Eigen::Index>(n, std::max(2 * count, count + 8)));

    const SparseMatrix shifted = k - shift * m;
    Eigen::SimplicialLDLT<SparseMatrix> factor(shifted);
    if (factor.info() != Eigen::Success) {
        throw SolverError("free_vibration: factorization of K - sigma M failed");
    }

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(n, block);
    for (Eigen::Index j = 0; j < block; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            x(i, j) = normal(rng);
        }
    }

    // Residuals cannot drop below the rounding error of K x.
    double k_norm = 0.0;
    for (int c = 0; c < k.outerSize(); ++c) {
        double col = 0.0;
        for (SparseMatrix::InnerIterator it(k, c); it; ++it) {
            col += std::abs(it.value());
        }
        k_norm = std::max(k_norm, col);
    }
    const double floor = 100.0 * std::numeric_limits<double>::epsilon() * k_norm;

    ModalBasis basis;
    Eigen::VectorXd theta;
    Eigen::VectorXd residuals(count);
    for (int it = 1; it <= options.max_iterations; ++it) {
        const Eigen::MatrixXd y = factor.solve(m * x);
        if (factor.info() != Eigen::Success || !y.allFinite()) {
            throw SolverError("free_vibration: shifted solve failed");
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
        const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
        const Eigen::MatrixXd kq = k * q;
        const Eigen::MatrixXd mq = m * q;
        Eigen::MatrixXd kp = q.transpose() * kq;
        Eigen::MatrixXd mp = q.transpose() * mq;
        kp = 0.5 * (kp + kp.transpose()).eval();
        mp = 0.5 * (mp + mp.transpose()).eval();

        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(kp, mp);
        if (ritz.info() != Eigen::Success) {
            throw SolverError("free_vibration: Rayleigh-Ritz projection failed");
        }
        theta = ritz.eigenvalues();
        x = q * ritz.eigenvectors();

        const Eigen::MatrixXd kx = kq * ritz.eigenvectors();
        const Eigen::MatrixXd mx = mq * ritz.eigenvectors();
        for (int i = 0; i < count; ++i) {
            const double scale = std::abs(theta[i] - shift) * mx.col(i).norm();
            const double r = (kx.col(i) - theta[i] * mx.col(i)).norm();
            residuals[i] = std::max(r - floor * x.col(i).norm(), 0.0) / scale;
        }
        basis.iterations = it;
        if (residuals.maxCoeff() <= options.tolerance) {
            basis.omega2 = theta.head(count);
            basis.phi = x.leftCols(count);
            basis.max_residual = residuals.maxCoeff();
            return basis;
        }
    }
    std::ostringstream msg;
    msg << "free_vibration: no convergence after " << options.max_iterations
        << " iterations (max relative residual " << residuals.maxCoeff() << ")";
    throw SolverError(msg.str());
}

ModalBasis free_vibration(const fem::GlobalSystem& system, int count,
                          const SolverOptions& options) {
    return free_vibration(system.k, system.m, count, options);
}

Eigen::MatrixXd ReducedPencil::matrix(double lambda) const {
    Eigen::MatrixXd out = lambda * ar;
    out.diagonal() += kr;
    return out;
}

ReducedPencil reduce(const fem::GlobalSystem& system, const ModalBasis& basis) {
    if (basis.phi.rows() != system.size()) {
        throw ArgumentError("reduce: modal basis does not match the system");
    }
    ReducedPencil pencil;
    pencil.kr = basis.omega2;
    pencil.ar = basis.phi.transpose() * (system.a * basis.phi);
    return pencil;
}

std::vector<ComplexEigenpair> complex_eigs(const ReducedPencil& pencil, double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw ArgumentError("complex_eigs: lambda must be finite and non-negative");
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(pencil.matrix(lambda), true);
    if (solver.info() != Eigen::Success) {
        throw SolverError("complex_eigs: Hessenberg QR iteration failed");
    }
    const Eigen::VectorXcd values = solver.eigenvalues();
    const Eigen::MatrixXcd vectors = solver.eigenvectors();
    std::vector<ComplexEigenpair> out;
    out.reserve(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        out.push_back({values[i], vectors.col(i).normalized()});
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        if (l.value.real() != r.value.real()) {
            return l.value.real() < r.value.real();
        }
        return l.value.imag() < r.value.imag();
    });
    return out;
}

}  // namespace crackflutter::modal

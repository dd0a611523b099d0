#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "crackflutter/errors.hpp"
#include "crackflutter/flutter.hpp"
#include "crackflutter/modal.hpp"

using namespace crackflutter;

namespace {

fem::GlobalSystem plate_system(int n, mesh::BoundaryKind bc, double flow = 0.0) {
    const auto plate = material::FgmPlate::homogeneous(
        1.0, 1.0, 0.01, material::isotropic_phase("al", 70e9, 0.3, 2700.0));
    const auto m = mesh::generate_structured(1.0, 1.0, n, n);
    const auto dofs = crack::unenriched(mesh::apply_boundary(m, bc));
    return fem::assemble(m, nullptr, material::section_properties(plate), dofs, flow,
                         fem::scales_for(plate));
}

modal::ReducedPencil analytic_pencil() {
    modal::ReducedPencil p;
    p.kr = Eigen::Vector2d(1.0, 4.0);
    p.ar = Eigen::Matrix2d{{0.0, 1.0}, {-1.0, 0.0}};
    return p;
}

}  // namespace

TEST_CASE("free vibration basis invariants") {
    const auto sys = plate_system(12, mesh::BoundaryKind::SimplySupported);
    const auto basis = modal::free_vibration(sys, 10);
    REQUIRE(basis.size() == 10);
    const Eigen::MatrixXd mm = basis.phi.transpose() * (sys.m * basis.phi);
    const Eigen::MatrixXd kk = basis.phi.transpose() * (sys.k * basis.phi);
    CHECK((mm - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-10);
    const Eigen::MatrixXd diag = basis.omega2.asDiagonal();
    CHECK((kk - diag).cwiseAbs().maxCoeff() <= 1e-8 * basis.omega2.maxCoeff());
    for (int i = 0; i < 10; ++i) {
        CHECK(basis.omega2[i] > 0.0);
        if (i > 0) CHECK(basis.omega2[i] >= basis.omega2[i - 1]);
    }
    // Navier oracle for the fundamental mode, Omega = 2 pi^2.
    const double omega = std::sqrt(basis.omega2[0] * sys.scales.frequency_factor());
    CHECK(omega == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi).epsilon(0.01));
    // Degenerate (1,2)/(2,1) pair.
    CHECK(basis.omega2[1] == doctest::Approx(basis.omega2[2]).epsilon(1e-8));
}

TEST_CASE("clamped fundamental frequency") {
    const auto sys = plate_system(16, mesh::BoundaryKind::Clamped);
    const auto basis = modal::free_vibration(sys, 4);
    const double omega = std::sqrt(basis.omega2[0] * sys.scales.frequency_factor());
    CHECK(omega == doctest::Approx(35.99).epsilon(0.02));
}

TEST_CASE("free-free plate has six rigid modes") {
    const auto sys = plate_system(8, mesh::BoundaryKind::Free);
    const auto basis = modal::free_vibration(sys, 8);
    const double first_elastic = basis.omega2[6];
    int zero = 0;
    for (int i = 0; i < 8; ++i) zero += std::abs(basis.omega2[i]) < 1e-6 * first_elastic;
    CHECK(zero == 6);
}

TEST_CASE("eigenvalues are invariant under common scaling of K and M") {
    const auto sys = plate_system(8, mesh::BoundaryKind::SimplySupported);
    const auto ref = modal::free_vibration(sys, 6);
    for (double c : {1e-6, 3.0, 1e5}) {
        const modal::SparseMatrix k = sys.k * c;
        const modal::SparseMatrix m = sys.m * c;
        const auto scaled = modal::free_vibration(k, m, 6);
        for (int i = 0; i < 6; ++i) {
            CHECK(scaled.omega2[i] == doctest::Approx(ref.omega2[i]).epsilon(1e-8));
        }
    }
}

TEST_CASE("argument checks") {
    const auto sys = plate_system(3, mesh::BoundaryKind::SimplySupported);
    CHECK_THROWS_AS(modal::free_vibration(sys, 0), ArgumentError);
    CHECK_THROWS_AS(modal::free_vibration(sys, sys.size() + 1), ArgumentError);
    CHECK_THROWS_AS(modal::complex_eigs(analytic_pencil(), -1.0), ArgumentError);
}

TEST_CASE("reduced pencil") {
    const auto sys = plate_system(8, mesh::BoundaryKind::SimplySupported);
    const auto basis = modal::free_vibration(sys, 6);
    const auto pencil = modal::reduce(sys, basis);
    CHECK(pencil.size() == 6);
    const auto at0 = modal::complex_eigs(pencil, 0.0);
    for (int i = 0; i < 6; ++i) {
        CHECK(at0[i].value.imag() == 0.0);
        CHECK(at0[i].value.real() == doctest::Approx(basis.omega2[i]).epsilon(1e-12));
    }

    modal::ModalBasis one;
    one.omega2 = basis.omega2.head(1);
    one.phi = basis.phi.leftCols(1);
    const auto scalar = modal::reduce(sys, one);
    const auto ev = modal::complex_eigs(scalar, 7.0);
    CHECK(ev.front().value.real() ==
          doctest::Approx(basis.omega2[0] + 7.0 * scalar.ar(0, 0)).epsilon(1e-14));
}

TEST_CASE("complex eigenpairs: residuals and conjugate closure") {
    const auto sys = plate_system(8, mesh::BoundaryKind::SimplySupported);
    const auto pencil = flutter::nondimensional_pencil(
        modal::reduce(sys, modal::free_vibration(sys, 12)), sys.scales);
    for (double lambda : {0.0, 200.0, 600.0, 1000.0}) {
        const auto pairs = modal::complex_eigs(pencil, lambda);
        const Eigen::MatrixXcd a = pencil.matrix(lambda).cast<std::complex<double>>();
        const double norm = pencil.matrix(lambda).norm();
        for (const auto& p : pairs) {
            CHECK(std::abs(p.vector.norm() - 1.0) < 1e-12);
            CHECK((a * p.vector - p.value * p.vector).norm() <= 1e-8 * norm);
            if (p.value.imag() != 0.0) {
                const bool has_conjugate = std::any_of(pairs.begin(), pairs.end(), [&](const auto& q) {
                    return std::abs(q.value - std::conj(p.value)) <= 1e-10 * std::abs(p.value);
                });
                CHECK(has_conjugate);
            }
        }
        for (std::size_t i = 1; i < pairs.size(); ++i) {
            CHECK(pairs[i - 1].value.real() <= pairs[i].value.real());
        }
    }
}

TEST_CASE("analytic two-mode pencil") {
    const auto p = analytic_pencil();
    // s solves (1 - s)(4 - s) + lambda^2 = 0.
    for (double lambda : {0.5, 1.0, 2.0}) {
        const auto ev = modal::complex_eigs(p, lambda);
        const std::complex<double> disc = std::sqrt(std::complex<double>(9.0 - 4.0 * lambda * lambda));
        const std::complex<double> lo = 0.5 * (5.0 - disc);
        const std::complex<double> hi = 0.5 * (5.0 + disc);
        CHECK(std::min(std::abs(ev[0].value - lo), std::abs(ev[0].value - hi)) < 1e-12);
        CHECK(std::min(std::abs(ev[1].value - lo), std::abs(ev[1].value - hi)) < 1e-12);
    }
}

TEST_CASE("reduced and full pencils agree at moderate pressure") {
    const auto sys = plate_system(10, mesh::BoundaryKind::SimplySupported);
    const auto basis = modal::free_vibration(sys, 20);
    const auto reduced = modal::reduce(sys, basis);
    const auto nd = flutter::nondimensional_pencil(reduced, sys.scales);
    const flutter::SweepConfig cfg;
    const auto sweep = flutter::sweep(nd, cfg);
    REQUIRE(sweep.bracket.has_value());
    const double lambda_nd = 0.25 * flutter::refine(nd, *sweep.bracket, cfg).lambda_cr;
    const double lambda = lambda_nd / sys.scales.pressure_factor();

    // Full dense oracle: L^-1 (K + lambda A) L^-T with M = L L^T.
    const Eigen::MatrixXd k = sys.k;
    const Eigen::MatrixXd a = sys.a;
    const Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(sys.m)};
    Eigen::MatrixXd g = llt.matrixL().solve(k + lambda * a);
    g = llt.matrixL().solve(g.transpose()).transpose();
    Eigen::EigenSolver<Eigen::MatrixXd> full(g, false);
    std::vector<double> full_re;
    for (int i = 0; i < full.eigenvalues().size(); ++i) full_re.push_back(full.eigenvalues()[i].real());
    std::sort(full_re.begin(), full_re.end());

    const auto red = modal::complex_eigs(reduced, lambda);
    for (int i = 0; i < 4; ++i) {
        CHECK(red[i].value.real() == doctest::Approx(full_re[i]).epsilon(0.005));
    }
}

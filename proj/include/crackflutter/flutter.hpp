#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <vector>

#include "crackflutter/fem.hpp"
#include "crackflutter/material.hpp"
#include "crackflutter/modal.hpp"

namespace crackflutter::flutter {

struct SweepConfig {
    double lambda_start = 0.0;
    double lambda_step = 5.0;
    double lambda_max = 1200.0;
    double imag_tolerance = 1e-6;    // |Im| / |value| marking a conjugate pair
    double refine_tolerance = 1e-4;  // relative bracket width

    void validate() const;
};

/// First interval [lo, hi] in which a conjugate pair is born; `mode_pair`
/// holds the tracked branch ids (ordered by in-vacuo frequency) that merge.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    std::array<int, 2> mode_pair{-1, -1};
};

struct SweepResult {
    std::vector<double> lambdas;
    /// values[step][branch]: tracked eigenvalue of each branch.
    std::vector<std::vector<std::complex<double>>> values;
    std::optional<Bracket> bracket;  // empty: no coalescence up to lambda_max
};

/// True when any eigenvalue has |Im| > tol |value|.
bool has_conjugate_pair(const std::vector<modal::ComplexEigenpair>& pairs, double tol);

SweepResult sweep(const modal::ReducedPencil& pencil, const SweepConfig& config);

struct FlutterPoint {
    double lambda_cr = 0.0;  // pencil units
    double omega2_cr = 0.0;  // pencil units
    double omega_cr = 0.0;
    std::array<int, 2> mode_pair{-1, -1};
    double lambda_cr_nd = 0.0;
    double omega_cr_nd = 0.0;
    double omega2_cr_nd = 0.0;
};

/// Bisects the bracket on the onset of a conjugate pair. Throws
/// InconsistencyError when the bracket does not straddle the onset.
FlutterPoint refine(const modal::ReducedPencil& pencil, const Bracket& bracket,
                    const SweepConfig& config);

struct Nondimensional {
    double lambda = 0.0;  // lambda a^3 / D_c
    double omega = 0.0;   // omega a^2 sqrt(rho_c h / D_c)
    double omega2 = 0.0;  // squared convention
};

Nondimensional nondimensionalize(const FlutterPoint& point, const fem::Scales& scales);
Nondimensional nondimensionalize(const FlutterPoint& point, const material::FgmPlate& plate);

/// Pencil whose eigenvalues are Omega^2 as a function of the nondimensional
/// pressure.
modal::ReducedPencil nondimensional_pencil(const modal::ReducedPencil& pencil,
                                           const fem::Scales& scales);

/// lambda_nd, branch_id, re_omega2_nd, im_omega2_nd
void write_trace_csv(const SweepResult& result, std::ostream& out);

}  // namespace crackflutter::flutter

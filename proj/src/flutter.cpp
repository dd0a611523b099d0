#include "crackflutter/flutter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "crackflutter/errors.hpp"

namespace crackflutter::flutter {

namespace {

using modal::ComplexEigenpair;

// Greedy assignment of new eigenpairs to tracked branches by maximal
// |v_prev^H v_new|. Returns, for each branch, the index into `current`.
std::vector<int> track(const std::vector<Eigen::VectorXcd>& previous,
                       const std::vector<ComplexEigenpair>& current) {
    const auto n = previous.size();
    Eigen::MatrixXd mac(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            mac(i, j) = std::abs(previous[i].dot(current[j].vector));
        }
    }
    std::vector<int> assignment(n, -1);
    std::vector<char> row_used(n, 0);
    std::vector<char> col_used(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        double best = -1.0;
        std::size_t bi = 0;
        std::size_t bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (row_used[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (col_used[j]) continue;
                if (mac(i, j) > best) {
                    best = mac(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        row_used[bi] = 1;
        col_used[bj] = 1;
        assignment[bi] = static_cast<int>(bj);
    }
    return assignment;
}

bool is_complex(const std::complex<double>& v, double tol) {
    return std::abs(v.imag()) > tol * std::abs(v);
}

// Index of the first eigenvalue belonging to a conjugate pair, or -1.
int first_complex(const std::vector<ComplexEigenpair>& pairs, double tol) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (is_complex(pairs[i].value, tol)) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

}  // namespace

void SweepConfig::validate() const {
    if (!(lambda_step > 0.0)) {
        throw ArgumentError("sweep: lambda_step must be positive");
    }
    if (!(lambda_start >= 0.0) || !(lambda_max >= lambda_start)) {
        throw ArgumentError("sweep: require 0 <= lambda_start <= lambda_max");
    }
    if (!(imag_tolerance > 0.0 && imag_tolerance < 1.0)) {
        throw ArgumentError("sweep: imag_tolerance must lie in (0, 1)");
    }
    if (!(refine_tolerance > 0.0 && refine_tolerance < 1.0)) {
        throw ArgumentError("sweep: refine_tolerance must lie in (0, 1)");
    }
}

bool has_conjugate_pair(const std::vector<ComplexEigenpair>& pairs, double tol) {
    return first_complex(pairs, tol) >= 0;
}

SweepResult sweep(const modal::ReducedPencil& pencil, const SweepConfig& config) {
    config.validate();
    SweepResult result;
    const int m = pencil.size();
    std::vector<Eigen::VectorXcd> tracked;

    const auto steps = static_cast<long>(
        std::floor((config.lambda_max - config.lambda_start) / config.lambda_step + 1e-9));
    for (long step = 0; step <= steps; ++step) {
        const double lambda = config.lambda_start + static_cast<double>(step) * config.lambda_step;
        const auto pairs = modal::complex_eigs(pencil, lambda);

        std::vector<int> order(m);
        if (tracked.empty()) {
            for (int i = 0; i < m; ++i) order[i] = i;
        } else {
            order = track(tracked, pairs);
        }
        std::vector<std::complex<double>> values(m);
        tracked.resize(m);
        for (int b = 0; b < m; ++b) {
            values[b] = pairs[order[b]].value;
            tracked[b] = pairs[order[b]].vector;
        }
        result.lambdas.push_back(lambda);
        result.values.push_back(values);

        if (first_complex(pairs, config.imag_tolerance) >= 0) {
            Bracket bracket;
            bracket.hi = lambda;
            bracket.lo = step == 0 ? lambda : lambda - config.lambda_step;
            // Branches carrying the first conjugate pair (lowest real part).
            std::vector<int> branches;
            double lowest = std::numeric_limits<double>::max();
            for (int b = 0; b < m; ++b) {
                if (is_complex(values[b], config.imag_tolerance)) {
                    lowest = std::min(lowest, values[b].real());
                }
            }
            for (int b = 0; b < m; ++b) {
                if (is_complex(values[b], config.imag_tolerance) &&
                    std::abs(values[b].real() - lowest) <= 1e-9 * std::abs(lowest) + 1e-300) {
                    branches.push_back(b);
                }
            }
            if (branches.size() >= 2) {
                bracket.mode_pair = {std::min(branches[0], branches[1]),
                                     std::max(branches[0], branches[1])};
            }
            result.bracket = bracket;
            break;
        }
    }
    return result;
}

FlutterPoint refine(const modal::ReducedPencil& pencil, const Bracket& bracket,
                    const SweepConfig& config) {
    config.validate();
    const double tol = config.imag_tolerance;
    double lo = bracket.lo;
    double hi = bracket.hi;
    const bool degenerate = (hi - lo) <= config.refine_tolerance * std::abs(hi);

    if (!degenerate) {
        if (!has_conjugate_pair(modal::complex_eigs(pencil, hi), tol)) {
            throw InconsistencyError("refine: no conjugate pair at the upper end of the bracket");
        }
        if (has_conjugate_pair(modal::complex_eigs(pencil, lo), tol)) {
            throw InconsistencyError("refine: conjugate pair already present at the lower end");
        }
        while (hi - lo > config.refine_tolerance * hi) {
            const double mid = 0.5 * (lo + hi);
            if (has_conjugate_pair(modal::complex_eigs(pencil, mid), tol)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    FlutterPoint point;
    point.mode_pair = bracket.mode_pair;
    point.lambda_cr = 0.5 * (lo + hi);

    // The merging pair sits next to the real part of the conjugate pair just
    // past onset; average the two eigenvalues closest to it at the midpoint.
    const auto above = modal::complex_eigs(pencil, hi);
    const int idx = first_complex(above, tol);
    const auto at = modal::complex_eigs(pencil, point.lambda_cr);
    double target;
    if (idx >= 0) {
        target = above[idx].value.real();
    } else {
        // No pair even at hi (degenerate bracket): use the closest real pair.
        double best = std::numeric_limits<double>::max();
        target = at.front().value.real();
        for (std::size_t i = 0; i + 1 < at.size(); ++i) {
            const double gap = at[i + 1].value.real() - at[i].value.real();
            if (gap < best) {
                best = gap;
                target = 0.5 * (at[i].value.real() + at[i + 1].value.real());
            }
        }
    }
    std::vector<double> reals;
    for (const auto& p : at) {
        reals.push_back(p.value.real());
    }
    std::sort(reals.begin(), reals.end(), [&](double l, double r) {
        return std::abs(l - target) < std::abs(r - target);
    });
    point.omega2_cr = reals.size() >= 2 ? 0.5 * (reals[0] + reals[1]) : reals.front();
    point.omega_cr = std::sqrt(std::max(point.omega2_cr, 0.0));
    return point;
}

Nondimensional nondimensionalize(const FlutterPoint& point, const fem::Scales& scales) {
    Nondimensional nd;
    nd.lambda = point.lambda_cr * scales.pressure_factor();
    nd.omega2 = point.omega2_cr * scales.frequency_factor();
    nd.omega = point.omega_cr * std::sqrt(scales.frequency_factor());
    return nd;
}

Nondimensional nondimensionalize(const FlutterPoint& point, const material::FgmPlate& plate) {
    return nondimensionalize(point, fem::scales_for(plate));
}

modal::ReducedPencil nondimensional_pencil(const modal::ReducedPencil& pencil,
                                           const fem::Scales& scales) {
    modal::ReducedPencil out;
    out.kr = pencil.kr * scales.frequency_factor();
    out.ar = pencil.ar * (scales.frequency_factor() / scales.pressure_factor());
    return out;
}

void write_trace_csv(const SweepResult& result, std::ostream& out) {
    out << "lambda_nd,branch_id,re_omega2_nd,im_omega2_nd\n";
    out.precision(12);
    for (std::size_t s = 0; s < result.lambdas.size(); ++s) {
        for (std::size_t b = 0; b < result.values[s].size(); ++b) {
            out << result.lambdas[s] << ',' << b << ',' << result.values[s][b].real() << ','
                << result.values[s][b].imag() << '\n';
        }
    }
}

}  // namespace crackflutter::flutter

#include "crackflutter/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

#include "crackflutter/errors.hpp"

namespace crackflutter::analysis {

PreparedCase prepare(const config::RunConfig& config) {
    PreparedCase pc;
    pc.plate = config.plate_model();
    pc.plate.validate();
    pc.section = material::section_properties(pc.plate, config.plate.shear);
    pc.mesh = mesh::generate_structured(pc.plate.a, pc.plate.b, config.mesh.nx, config.mesh.ny);
    const auto base = mesh::apply_boundary(pc.mesh, config.boundary);

    crack::EnrichedDofMap dofs;
    if (const auto geometry = config.crack_geometry()) {
        pc.crack = fem::prepare_crack(pc.mesh, *geometry);
        dofs = crack::build_enrichment_map(pc.mesh, pc.crack->cuts, pc.crack->segment, base);
    } else {
        dofs = crack::unenriched(base);
    }
    pc.system = fem::assemble(pc.mesh, pc.crack ? &*pc.crack : nullptr, pc.section, dofs,
                              config.flow_angle_radians(), fem::scales_for(pc.plate));
    return pc;
}

CaseReport run_case(const config::RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    CaseReport r;
    r.config = config;

    const PreparedCase pc = prepare(config);
    const auto& sys = pc.system;
    r.free_dofs = sys.size();
    r.enriched_nodes = sys.dofs.enriched_node_count();
    r.elements = static_cast<int>(pc.mesh.elements.size());

    modal::SolverOptions options;
    options.tolerance = config.solver.eigen_tolerance;
    const auto basis = modal::free_vibration(sys, config.solver.modes, options);
    r.eigen_iterations = basis.iterations;
    r.eigen_residual = basis.max_residual;
    const double ff = sys.scales.frequency_factor();
    for (int i = 0; i < basis.size(); ++i) {
        const double w2 = basis.omega2[i];
        r.omega2.push_back(w2);
        r.omega2_nd.push_back(w2 * ff);
        r.omega_nd.push_back(std::sqrt(std::max(w2 * ff, 0.0)));
    }

    const auto pencil = flutter::nondimensional_pencil(modal::reduce(sys, basis), sys.scales);
    r.trace = flutter::sweep(pencil, config.solver.sweep);
    r.lambda_swept_to = r.trace.lambdas.empty() ? 0.0 : r.trace.lambdas.back();
    if (r.trace.bracket) {
        const auto nd = flutter::refine(pencil, *r.trace.bracket, config.solver.sweep);
        r.flutter_found = true;
        r.point.mode_pair = nd.mode_pair;
        r.point.lambda_cr_nd = nd.lambda_cr;
        r.point.omega2_cr_nd = nd.omega2_cr;
        r.point.omega_cr_nd = nd.omega_cr;
        r.point.lambda_cr = nd.lambda_cr / sys.scales.pressure_factor();
        r.point.omega2_cr = nd.omega2_cr / ff;
        r.point.omega_cr = nd.omega_cr / std::sqrt(ff);
    }
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

void write_text(const CaseReport& r, std::ostream& out) {
    const auto& c = r.config;
    out << "crackflutter case report\n";
    out << "  boundary        " << mesh::to_string(c.boundary) << "\n";
    out << "  mesh            " << c.mesh.nx << " x " << c.mesh.ny << " (" << r.elements
        << " elements, " << r.free_dofs << " free DOFs, " << r.enriched_nodes
        << " enriched nodes)\n";
    if (c.crack) {
        out << "  crack           " << crack::to_string(c.crack->kind) << ", d/a = "
            << c.crack->d_over_a << ", theta = " << c.crack->theta_degrees << " deg\n";
    } else {
        out << "  crack           none\n";
    }
    out << "  flow angle      " << c.flow_theta_prime_degrees << " deg\n";
    out << "  modes           " << c.solver.modes << " (" << r.eigen_iterations
        << " iterations, residual " << std::scientific << std::setprecision(2)
        << r.eigen_residual << std::defaultfloat << ")\n";
    out << "\n  in-vacuo modes\n";
    out << "    #    omega [rad/s]      Omega         Omega^2\n";
    out << std::fixed;
    for (std::size_t i = 0; i < r.omega2.size(); ++i) {
        out << "    " << std::setw(2) << i + 1 << std::setprecision(4) << std::setw(16)
            << std::sqrt(std::max(r.omega2[i], 0.0)) << std::setw(14) << r.omega_nd[i]
            << std::setw(16) << r.omega2_nd[i] << "\n";
    }
    out << "\n";
    if (r.flutter_found) {
        out << std::setprecision(4);
        out << "  lambda_cr (nd)  " << r.point.lambda_cr_nd << "\n";
        out << "  Omega_cr        " << r.point.omega_cr_nd << "\n";
        out << "  Omega_cr^2      " << r.point.omega2_cr_nd << "\n";
        out << "  mode pair       " << r.point.mode_pair[0] + 1 << ", " << r.point.mode_pair[1] + 1
            << "\n";
        out << std::scientific << std::setprecision(6);
        out << "  lambda_cr       " << r.point.lambda_cr << " Pa/m\n";
        out << "  omega_cr        " << r.point.omega_cr << " rad/s\n";
    } else {
        out << "  no coalescence up to lambda_nd = " << r.lambda_swept_to << "\n";
    }
    out << std::defaultfloat << std::setprecision(3);
    out << "  wall time       " << r.wall_seconds << " s\n";
}

config::Json to_json(const CaseReport& r) {
    config::Json j;
    j["config"] = config::to_json(r.config);
    j["modes"] = {{"omega2_rad2_s2", r.omega2},
                  {"omega_nd", r.omega_nd},
                  {"omega2_nd", r.omega2_nd}};
    if (r.flutter_found) {
        j["flutter"] = {{"lambda_cr_nd", r.point.lambda_cr_nd},
                        {"omega_cr_nd", r.point.omega_cr_nd},
                        {"omega2_cr_nd", r.point.omega2_cr_nd},
                        {"lambda_cr_Pa_m", r.point.lambda_cr},
                        {"omega_cr_rad_s", r.point.omega_cr},
                        {"mode_pair", r.point.mode_pair}};
    } else {
        j["flutter"] = nullptr;
    }
    j["metadata"] = {{"free_dofs", r.free_dofs},
                     {"enriched_nodes", r.enriched_nodes},
                     {"elements", r.elements},
                     {"eigen_iterations", r.eigen_iterations},
                     {"eigen_residual", r.eigen_residual},
                     {"lambda_nd_swept_to", r.lambda_swept_to},
                     {"wall_seconds", r.wall_seconds}};
    return j;
}

std::vector<StudyRow> run_study(const config::RunConfig& config) {
    if (!config.study) {
        throw ConfigError("study: block is absent");
    }
    const auto& study = *config.study;
    std::vector<StudyRow> rows(study.values.size());
    if (rows.empty()) return rows;

    unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(rows.size()));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            rows[i].value = study.values[i];
            try {
                rows[i].report =
                    run_case(config::with_parameter(config, study.parameter, study.values[i]));
            } catch (const std::exception& err) {
                rows[i].error = err.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return rows;
}

void write_study_csv(const std::vector<StudyRow>& rows, std::ostream& out) {
    out << "value,lambda_cr_nd,omega_cr_nd,omega2_cr_nd,status\n";
    out << std::setprecision(10);
    for (const auto& row : rows) {
        out << row.value << ',';
        if (row.report && row.report->flutter_found) {
            const auto& p = row.report->point;
            out << p.lambda_cr_nd << ',' << p.omega_cr_nd << ',' << p.omega2_cr_nd << ",ok\n";
        } else if (row.report) {
            out << ",,,no_coalescence\n";
        } else {
            std::string msg = row.error;
            std::replace(msg.begin(), msg.end(), '"', '\'');
            out << ",,,\"error: " << msg << "\"\n";
        }
    }
}

}  // namespace crackflutter::analysis

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crackflutter/config.hpp"
#include "crackflutter/fem.hpp"
#include "crackflutter/flutter.hpp"
#include "crackflutter/modal.hpp"

namespace crackflutter::analysis {

/// Mesh, crack model and assembled system for one configuration.
struct PreparedCase {
    material::FgmPlate plate;
    material::SectionProperties section;
    mesh::Mesh mesh;
    std::optional<fem::CrackModel> crack;
    fem::GlobalSystem system;
};

PreparedCase prepare(const config::RunConfig& config);

struct CaseReport {
    config::RunConfig config;
    // In-vacuo spectrum, ascending.
    std::vector<double> omega2;      // rad^2/s^2
    std::vector<double> omega_nd;    // omega a^2 sqrt(rho_c h / D_c)
    std::vector<double> omega2_nd;   // squared convention
    bool flutter_found = false;
    flutter::FlutterPoint point;     // nondimensional fields filled when found
    // Metadata.
    int free_dofs = 0;
    int enriched_nodes = 0;
    int elements = 0;
    int eigen_iterations = 0;
    double eigen_residual = 0.0;
    double lambda_swept_to = 0.0;
    double wall_seconds = 0.0;
    flutter::SweepResult trace;
};

/// Full pipeline: assemble, modal basis, reduced sweep, refinement.
CaseReport run_case(const config::RunConfig& config);

void write_text(const CaseReport& report, std::ostream& out);
/// Machine readable report; embeds the resolved configuration.
config::Json to_json(const CaseReport& report);

struct StudyRow {
    double value = 0.0;
    std::optional<CaseReport> report;
    std::string error;  // non-empty when the case failed
};

/// One run_case per study value, executed by a worker pool. Failing cases
/// are recorded and do not stop the study. Rows keep the input order.
std::vector<StudyRow> run_study(const config::RunConfig& config);

/// value, lambda_cr_nd, omega_cr_nd, omega2_cr_nd, status
void write_study_csv(const std::vector<StudyRow>& rows, std::ostream& out);

}  // namespace crackflutter::analysis

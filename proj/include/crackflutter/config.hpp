#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "crackflutter/crack.hpp"
#include "crackflutter/flutter.hpp"
#include "crackflutter/material.hpp"
#include "crackflutter/mesh.hpp"

namespace crackflutter::config {

using Json = nlohmann::json;

/// Isotropic override: bypasses the graded material pair entirely.
struct Isotropic {
    double youngs_modulus_pa = 0.0;
    double nu = 0.3;
    double rho_kg_m3 = 0.0;
};

struct PlateConfig {
    double a_m = 1.0;
    double b_m = 1.0;
    double h_m = 0.01;
    double k = 0.0;
    double temperature_k = 300.0;
    std::optional<Isotropic> isotropic;
    material::MaterialPhase ceramic = material::silicon_nitride();
    material::MaterialPhase metal = material::stainless_steel_sus304();
    material::ShearCorrectionMode shear = material::ShearCorrectionMode::Fixed;
};

struct MeshConfig {
    int nx = 34;
    int ny = 34;
};

struct CrackConfig {
    crack::CrackKind kind = crack::CrackKind::Center;
    double cx_m = 0.0;
    double cy_m = 0.0;
    double d_over_a = 0.0;
    double theta_degrees = 0.0;
};

struct SolverConfig {
    int modes = 16;
    double eigen_tolerance = 1e-8;
    flutter::SweepConfig sweep;
};

struct StudyConfig {
    std::string parameter;  // dotted path, e.g. "crack.d_over_a"
    std::vector<double> values;
};

struct OutputConfig {
    std::string report_text;  // empty: not written
    std::string report_json;
    std::string study_csv;
    std::string trace_csv;
    std::string matrices_dir;
};

struct RunConfig {
    std::string profile = "full";
    PlateConfig plate;
    mesh::BoundaryKind boundary = mesh::BoundaryKind::SimplySupported;
    MeshConfig mesh;
    std::optional<CrackConfig> crack;
    double flow_theta_prime_degrees = 0.0;
    SolverConfig solver;
    std::optional<StudyConfig> study;
    OutputConfig output;
    int threads = 0;  // study workers; 0 picks the hardware concurrency

    material::FgmPlate plate_model() const;
    std::optional<crack::CrackGeometry> crack_geometry() const;
    double flow_angle_radians() const;
};

/// Parses and validates a configuration document. Every problem is reported
/// as a ConfigError naming the offending field.
RunConfig parse(const Json& document);
RunConfig load(const std::filesystem::path& path);

/// Fully resolved configuration, defaults applied; parse(to_json(c)) == c.
Json to_json(const RunConfig& config);

/// Scalar fields a study may vary.
const std::vector<std::string>& study_parameters();

/// Copy of `config` with the named scalar set to `value` and revalidated.
RunConfig with_parameter(const RunConfig& config, const std::string& parameter, double value);

}  // namespace crackflutter::config

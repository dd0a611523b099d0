#include "crackflutter/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "crackflutter/errors.hpp"

namespace crackflutter::config {

namespace {

// Reads one JSON object, remembering which keys were consumed so that
// unknown (typically misspelled or wrongly unit-suffixed) keys are rejected.
class Section {
public:
    Section(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            fail(path_, "expected an object");
        }
    }

    [[noreturn]] static void fail(const std::string& field, const std::string& what) {
        throw ConfigError(field + ": " + what);
    }

    std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    bool has(const std::string& key) const { return node_.contains(key) && !node_[key].is_null(); }

    const Json* get(const std::string& key) {
        seen_.insert(key);
        return has(key) ? &node_[key] : nullptr;
    }

    double number(const std::string& key, double fallback) {
        const Json* v = get(key);
        if (!v) return fallback;
        if (!v->is_number()) fail(field(key), "expected a number");
        const double x = v->get<double>();
        if (!std::isfinite(x)) fail(field(key), "must be finite");
        return x;
    }

    int integer(const std::string& key, int fallback) {
        const Json* v = get(key);
        if (!v) return fallback;
        if (!v->is_number_integer()) fail(field(key), "expected an integer");
        return v->get<int>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const Json* v = get(key);
        if (!v) return fallback;
        if (!v->is_string()) fail(field(key), "expected a string");
        return v->get<std::string>();
    }

    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.count(key)) fail(field(key), "unknown key");
        }
    }

private:
    const Json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void require_positive(double value, const std::string& field) {
    if (!(value > 0.0)) Section::fail(field, "must be positive");
}

material::TemperatureCoefficients parse_coefficients(const Json& node, const std::string& path) {
    if (node.is_number()) {
        return material::TemperatureCoefficients::constant(node.get<double>());
    }
    Section s(node, path);
    material::TemperatureCoefficients c;
    c.p0 = s.number("p0", 0.0);
    c.p_minus1 = s.number("p_minus1", 0.0);
    c.p1 = s.number("p1", 0.0);
    c.p2 = s.number("p2", 0.0);
    c.p3 = s.number("p3", 0.0);
    s.finish();
    return c;
}

Json coefficients_json(const material::TemperatureCoefficients& c) {
    return {{"p0", c.p0}, {"p_minus1", c.p_minus1}, {"p1", c.p1}, {"p2", c.p2}, {"p3", c.p3}};
}

material::MaterialPhase parse_phase(const Json& node, const std::string& path) {
    material::MaterialPhase phase;
    if (node.is_string()) {
        const auto name = node.get<std::string>();
        if (name == "Si3N4") return material::silicon_nitride();
        if (name == "SUS304") return material::stainless_steel_sus304();
        Section::fail(path, "unknown material preset '" + name + "' (Si3N4, SUS304)");
    }
    Section s(node, path);
    phase.name = s.text("name", "custom");
    const Json* e = s.get("E_Pa");
    if (!e) Section::fail(s.field("E_Pa"), "required");
    phase.e_coeffs = parse_coefficients(*e, s.field("E_Pa"));
    if (const Json* alpha = s.get("alpha_per_K")) {
        phase.alpha_coeffs = parse_coefficients(*alpha, s.field("alpha_per_K"));
    }
    phase.nu = s.number("nu", 0.3);
    phase.rho = s.number("rho_kg_m3", 0.0);
    s.finish();
    try {
        phase.validate();
    } catch (const Error& err) {
        Section::fail(path, err.what());
    }
    return phase;
}

Json phase_json(const material::MaterialPhase& phase) {
    return {{"name", phase.name},
            {"E_Pa", coefficients_json(phase.e_coeffs)},
            {"alpha_per_K", coefficients_json(phase.alpha_coeffs)},
            {"nu", phase.nu},
            {"rho_kg_m3", phase.rho}};
}

PlateConfig parse_plate(const Json& node) {
    Section s(node, "plate");
    PlateConfig p;
    p.a_m = s.number("a_m", p.a_m);
    p.b_m = s.number("b_m", p.b_m);
    p.h_m = s.number("h_m", p.h_m);
    p.k = s.number("k", p.k);
    p.temperature_k = s.number("temperature_K", p.temperature_k);
    require_positive(p.a_m, "plate.a_m");
    require_positive(p.b_m, "plate.b_m");
    require_positive(p.h_m, "plate.h_m");
    require_positive(p.temperature_k, "plate.temperature_K");
    if (p.k < 0.0) Section::fail("plate.k", "must be >= 0");

    const auto shear = s.text("shear_correction", "fixed");
    if (shear == "fixed") {
        p.shear = material::ShearCorrectionMode::Fixed;
    } else if (shear == "energy") {
        p.shear = material::ShearCorrectionMode::EnergyEquivalence;
    } else {
        Section::fail("plate.shear_correction", "expected 'fixed' or 'energy'");
    }

    const Json* iso = s.get("isotropic");
    const Json* pair = s.get("materials");
    if (iso && pair) {
        Section::fail("plate", "give exactly one of 'isotropic' and 'materials'");
    }
    if (iso) {
        Section is(*iso, "plate.isotropic");
        Isotropic v;
        v.youngs_modulus_pa = is.number("E_Pa", 0.0);
        v.nu = is.number("nu", v.nu);
        v.rho_kg_m3 = is.number("rho_kg_m3", 0.0);
        is.finish();
        require_positive(v.youngs_modulus_pa, "plate.isotropic.E_Pa");
        require_positive(v.rho_kg_m3, "plate.isotropic.rho_kg_m3");
        if (!(v.nu > -1.0 && v.nu < 0.5)) Section::fail("plate.isotropic.nu", "must lie in (-1, 0.5)");
        if (p.k != 0.0) Section::fail("plate.k", "must be 0 with the isotropic override");
        p.isotropic = v;
    }
    if (pair) {
        Section ps(*pair, "plate.materials");
        if (const Json* c = ps.get("ceramic")) p.ceramic = parse_phase(*c, "plate.materials.ceramic");
        if (const Json* m = ps.get("metal")) p.metal = parse_phase(*m, "plate.materials.metal");
        ps.finish();
    }
    s.finish();
    return p;
}

CrackConfig parse_crack(const Json& node, const PlateConfig& plate) {
    Section s(node, "crack");
    CrackConfig c;
    try {
        c.kind = crack::parse_crack_kind(s.text("kind", "center"));
    } catch (const Error& err) {
        Section::fail("crack.kind", err.what());
    }
    c.cx_m = s.number("cx_m", 0.5 * plate.a_m);
    c.cy_m = s.number("cy_m", 0.5 * plate.b_m);
    c.d_over_a = s.number("d_over_a", 0.0);
    c.theta_degrees = s.number("theta_degrees", 0.0);
    s.finish();
    require_positive(c.d_over_a, "crack.d_over_a");
    if (c.cx_m < 0.0 || c.cx_m > plate.a_m) Section::fail("crack.cx_m", "must lie within [0, a_m]");
    if (c.cy_m < 0.0 || c.cy_m > plate.b_m) Section::fail("crack.cy_m", "must lie within [0, b_m]");
    return c;
}

SolverConfig parse_solver(const Json& node, SolverConfig v) {
    Section s(node, "solver");
    v.modes = s.integer("modes", v.modes);
    v.eigen_tolerance = s.number("eigen_tolerance", v.eigen_tolerance);
    v.sweep.lambda_start = s.number("lambda_nd_start", v.sweep.lambda_start);
    v.sweep.lambda_step = s.number("lambda_nd_step", v.sweep.lambda_step);
    v.sweep.lambda_max = s.number("lambda_nd_max", v.sweep.lambda_max);
    v.sweep.imag_tolerance = s.number("imag_tolerance", v.sweep.imag_tolerance);
    v.sweep.refine_tolerance = s.number("refine_tolerance", v.sweep.refine_tolerance);
    s.finish();
    if (v.modes < 1) Section::fail("solver.modes", "must be >= 1");
    if (!(v.eigen_tolerance > 0.0 && v.eigen_tolerance < 1.0)) {
        Section::fail("solver.eigen_tolerance", "must lie in (0, 1)");
    }
    try {
        v.sweep.validate();
    } catch (const Error& err) {
        Section::fail("solver", err.what());
    }
    return v;
}

std::vector<std::string> split(const std::string& path) {
    std::vector<std::string> parts;
    std::stringstream ss(path);
    std::string item;
    while (std::getline(ss, item, '.')) parts.push_back(item);
    return parts;
}

}  // namespace

material::FgmPlate RunConfig::plate_model() const {
    if (plate.isotropic) {
        const auto& iso = *plate.isotropic;
        return material::FgmPlate::homogeneous(
            plate.a_m, plate.b_m, plate.h_m,
            material::isotropic_phase("isotropic", iso.youngs_modulus_pa, iso.nu, iso.rho_kg_m3),
            plate.temperature_k);
    }
    material::FgmPlate p;
    p.a = plate.a_m;
    p.b = plate.b_m;
    p.h = plate.h_m;
    p.k = plate.k;
    p.ceramic = plate.ceramic;
    p.metal = plate.metal;
    p.temperature = plate.temperature_k;
    return p;
}

std::optional<crack::CrackGeometry> RunConfig::crack_geometry() const {
    if (!crack) return std::nullopt;
    crack::CrackGeometry g;
    g.kind = crack->kind;
    g.cx = crack->cx_m;
    g.cy = crack->cy_m;
    g.d = crack->d_over_a * plate.a_m;
    g.theta = crack->theta_degrees * std::numbers::pi / 180.0;
    return g;
}

double RunConfig::flow_angle_radians() const {
    return flow_theta_prime_degrees * std::numbers::pi / 180.0;
}

RunConfig parse(const Json& document) {
    Section root(document, "");
    RunConfig c;
    c.profile = root.text("profile", "full");
    if (c.profile == "fast") {
        c.mesh = {20, 20};
        c.solver.modes = 12;
    } else if (c.profile != "full") {
        Section::fail("profile", "expected 'full' or 'fast'");
    }

    if (const Json* p = root.get("plate")) c.plate = parse_plate(*p);
    try {
        c.boundary = mesh::parse_boundary_kind(root.text("boundary", "simply_supported"));
    } catch (const Error& err) {
        Section::fail("boundary", err.what());
    }
    if (const Json* m = root.get("mesh")) {
        Section s(*m, "mesh");
        c.mesh.nx = s.integer("nx", c.mesh.nx);
        c.mesh.ny = s.integer("ny", c.mesh.ny);
        s.finish();
        if (c.mesh.nx < 2) Section::fail("mesh.nx", "must be >= 2");
        if (c.mesh.ny < 2) Section::fail("mesh.ny", "must be >= 2");
    }
    if (const Json* k = root.get("crack")) c.crack = parse_crack(*k, c.plate);
    if (const Json* f = root.get("flow")) {
        Section s(*f, "flow");
        c.flow_theta_prime_degrees = s.number("theta_prime_degrees", 0.0);
        s.finish();
    }
    if (const Json* s = root.get("solver")) c.solver = parse_solver(*s, c.solver);
    if (const Json* st = root.get("study")) {
        Section s(*st, "study");
        StudyConfig study;
        study.parameter = s.text("parameter", "");
        const auto& names = study_parameters();
        if (std::find(names.begin(), names.end(), study.parameter) == names.end()) {
            Section::fail("study.parameter", "'" + study.parameter + "' is not a scalar field");
        }
        if (const Json* values = s.get("values")) {
            if (!values->is_array()) Section::fail("study.values", "expected an array");
            for (const auto& v : *values) {
                if (!v.is_number() || !std::isfinite(v.get<double>())) {
                    Section::fail("study.values", "entries must be finite numbers");
                }
                study.values.push_back(v.get<double>());
            }
        }
        s.finish();
        c.study = study;
    }
    if (const Json* o = root.get("output")) {
        Section s(*o, "output");
        c.output.report_text = s.text("report_text", "");
        c.output.report_json = s.text("report_json", "");
        c.output.study_csv = s.text("study_csv", "");
        c.output.trace_csv = s.text("trace_csv", "");
        c.output.matrices_dir = s.text("matrices_dir", "");
        s.finish();
    }
    c.threads = root.integer("threads", 0);
    if (c.threads < 0) Section::fail("threads", "must be >= 0");
    root.finish();
    if (c.solver.modes > 5 * (c.mesh.nx + 1) * (c.mesh.ny + 1)) {
        Section::fail("solver.modes", "exceeds the number of mesh DOFs");
    }
    return c;
}

RunConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& err) {
        throw ConfigError(path.string() + ": " + err.what());
    }
    return parse(doc);
}

Json to_json(const RunConfig& c) {
    Json plate = {{"a_m", c.plate.a_m},
                  {"b_m", c.plate.b_m},
                  {"h_m", c.plate.h_m},
                  {"k", c.plate.k},
                  {"temperature_K", c.plate.temperature_k},
                  {"shear_correction",
                   c.plate.shear == material::ShearCorrectionMode::Fixed ? "fixed" : "energy"}};
    if (c.plate.isotropic) {
        plate["isotropic"] = {{"E_Pa", c.plate.isotropic->youngs_modulus_pa},
                              {"nu", c.plate.isotropic->nu},
                              {"rho_kg_m3", c.plate.isotropic->rho_kg_m3}};
    } else {
        plate["materials"] = {{"ceramic", phase_json(c.plate.ceramic)},
                              {"metal", phase_json(c.plate.metal)}};
    }
    Json doc = {{"profile", c.profile},
                {"plate", plate},
                {"boundary", std::string(mesh::to_string(c.boundary))},
                {"mesh", {{"nx", c.mesh.nx}, {"ny", c.mesh.ny}}},
                {"flow", {{"theta_prime_degrees", c.flow_theta_prime_degrees}}},
                {"solver",
                 {{"modes", c.solver.modes},
                  {"eigen_tolerance", c.solver.eigen_tolerance},
                  {"lambda_nd_start", c.solver.sweep.lambda_start},
                  {"lambda_nd_step", c.solver.sweep.lambda_step},
                  {"lambda_nd_max", c.solver.sweep.lambda_max},
                  {"imag_tolerance", c.solver.sweep.imag_tolerance},
                  {"refine_tolerance", c.solver.sweep.refine_tolerance}}},
                {"output",
                 {{"report_text", c.output.report_text},
                  {"report_json", c.output.report_json},
                  {"study_csv", c.output.study_csv},
                  {"trace_csv", c.output.trace_csv},
                  {"matrices_dir", c.output.matrices_dir}}},
                {"threads", c.threads}};
    if (c.crack) {
        doc["crack"] = {{"kind", std::string(crack::to_string(c.crack->kind))},
                        {"cx_m", c.crack->cx_m},
                        {"cy_m", c.crack->cy_m},
                        {"d_over_a", c.crack->d_over_a},
                        {"theta_degrees", c.crack->theta_degrees}};
    }
    if (c.study) {
        doc["study"] = {{"parameter", c.study->parameter}, {"values", c.study->values}};
    }
    return doc;
}

const std::vector<std::string>& study_parameters() {
    static const std::vector<std::string> names = {
        "plate.a_m",        "plate.b_m",      "plate.h_m",        "plate.k",
        "plate.temperature_K", "crack.cx_m",  "crack.cy_m",       "crack.d_over_a",
        "crack.theta_degrees", "flow.theta_prime_degrees", "mesh.nx", "mesh.ny",
        "solver.modes"};
    return names;
}

RunConfig with_parameter(const RunConfig& config, const std::string& parameter, double value) {
    const auto& names = study_parameters();
    if (std::find(names.begin(), names.end(), parameter) == names.end()) {
        throw ConfigError("study.parameter: '" + parameter + "' is not a scalar field");
    }
    Json doc = to_json(config);
    doc.erase("study");
    const auto parts = split(parameter);
    if (!doc.contains(parts[0])) {
        throw ConfigError(parameter + ": block '" + parts[0] + "' is absent from the configuration");
    }
    Json& slot = doc[parts[0]][parts[1]];
    if (slot.is_number_integer()) {
        if (value != std::floor(value)) throw ConfigError(parameter + ": expected an integer value");
        slot = static_cast<int>(value);
    } else {
        slot = value;
    }
    return parse(doc);
}

}  // namespace crackflutter::config

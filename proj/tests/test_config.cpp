#include <string>

#include <doctest.h>

#include "crackflutter/config.hpp"
#include "crackflutter/errors.hpp"

using namespace crackflutter;
using config::Json;

namespace {

Json isotropic_doc() {
    return Json::parse(R"({
        "plate": {"a_m": 1.0, "b_m": 1.0, "h_m": 0.01,
                  "isotropic": {"E_Pa": 70e9, "nu": 0.3, "rho_kg_m3": 2700}},
        "boundary": "clamped",
        "mesh": {"nx": 12, "ny": 10},
        "crack": {"kind": "center", "d_over_a": 0.4, "theta_degrees": 30},
        "flow": {"theta_prime_degrees": 45},
        "solver": {"modes": 10, "lambda_nd_step": 2.5}
    })");
}

std::string error_of(const Json& doc) {
    try {
        config::parse(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("defaults and profiles") {
    const auto c = config::parse(Json::object());
    CHECK(c.mesh.nx == 34);
    CHECK(c.solver.modes == 16);
    CHECK_FALSE(c.plate.isotropic.has_value());
    CHECK(c.plate.ceramic.name == material::silicon_nitride().name);
    CHECK(c.solver.sweep.lambda_max == 1200.0);

    const auto fast = config::parse(Json{{"profile", "fast"}});
    CHECK(fast.mesh.nx == 20);
    CHECK(fast.mesh.ny == 20);
    CHECK(fast.solver.modes == 12);
    const auto fast_override = config::parse(Json{{"profile", "fast"}, {"mesh", {{"nx", 24}}}});
    CHECK(fast_override.mesh.nx == 24);
    CHECK(fast_override.mesh.ny == 20);
}

TEST_CASE("explicit fields and derived geometry") {
    const auto c = config::parse(isotropic_doc());
    REQUIRE(c.plate.isotropic.has_value());
    CHECK(c.boundary == mesh::BoundaryKind::Clamped);
    REQUIRE(c.crack.has_value());
    CHECK(c.crack->cx_m == 0.5);
    const auto g = c.crack_geometry();
    CHECK(g->d == doctest::Approx(0.4));
    CHECK(g->theta == doctest::Approx(std::numbers::pi / 6));
    CHECK(c.flow_angle_radians() == doctest::Approx(std::numbers::pi / 4));
    CHECK(c.solver.sweep.lambda_step == 2.5);
    const auto plate = c.plate_model();
    CHECK(plate.k == 0.0);
    CHECK(material::ceramic_density(plate) == doctest::Approx(2700.0));
}

TEST_CASE("resolved echo round trips") {
    for (const Json& doc : {isotropic_doc(), Json::object()}) {
        const auto c = config::parse(doc);
        const Json echo = config::to_json(c);
        CHECK(config::to_json(config::parse(echo)) == echo);
    }
}

TEST_CASE("field-level validation errors") {
    auto doc = isotropic_doc();
    doc["plate"]["a_mm"] = 1.0;
    CHECK(error_of(doc).find("plate.a_mm") != std::string::npos);

    doc = isotropic_doc();
    doc["plate"]["materials"] = {{"ceramic", "Si3N4"}};
    CHECK(error_of(doc).find("exactly one") != std::string::npos);

    doc = isotropic_doc();
    doc["plate"]["h_m"] = -0.01;
    CHECK(error_of(doc).find("plate.h_m") != std::string::npos);

    doc = isotropic_doc();
    doc["mesh"]["nx"] = 10.5;
    CHECK(error_of(doc).find("mesh.nx") != std::string::npos);

    doc = isotropic_doc();
    doc["boundary"] = "hinged";
    CHECK(error_of(doc).find("boundary") != std::string::npos);

    doc = isotropic_doc();
    doc["crack"]["kind"] = "through";
    CHECK(error_of(doc).find("crack.kind") != std::string::npos);

    doc = isotropic_doc();
    doc["solver"]["imag_tolerance"] = 2.0;
    CHECK(error_of(doc).find("solver") != std::string::npos);

    doc = isotropic_doc();
    doc["study"] = {{"parameter", "plate.color"}, {"values", {1, 2}}};
    CHECK(error_of(doc).find("study.parameter") != std::string::npos);

    doc = Json{{"plate", {{"materials", {{"metal", "Unobtainium"}}}}}};
    CHECK(error_of(doc).find("plate.materials.metal") != std::string::npos);

    CHECK_THROWS_AS(config::load("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("material coefficient blocks") {
    const auto c = config::parse(Json::parse(R"({
        "plate": {"k": 2, "materials": {
            "ceramic": {"name": "alumina", "E_Pa": 380e9, "nu": 0.3, "rho_kg_m3": 3800},
            "metal": {"name": "al", "E_Pa": {"p0": 70e9, "p1": 1e-4}, "nu": 0.3, "rho_kg_m3": 2700}}}
    })"));
    CHECK(c.plate.ceramic.name == "alumina");
    CHECK(material::property_at(c.plate.metal.e_coeffs, 300.0) == doctest::Approx(70e9 * 1.03));
}

TEST_CASE("study parameters") {
    const auto c = config::parse(isotropic_doc());
    const auto d = config::with_parameter(c, "crack.d_over_a", 0.2);
    CHECK(d.crack->d_over_a == 0.2);
    CHECK(d.mesh.nx == 12);
    CHECK(config::with_parameter(c, "mesh.nx", 16).mesh.nx == 16);
    CHECK_THROWS_AS(config::with_parameter(c, "mesh.nx", 16.5), ConfigError);
    CHECK_THROWS_AS(config::with_parameter(c, "plate.k", 1.0), ConfigError);
    CHECK_THROWS_AS(config::with_parameter(c, "plate.colour", 1.0), ConfigError);

    auto uncracked = c;
    uncracked.crack.reset();
    CHECK_THROWS_AS(config::with_parameter(uncracked, "crack.theta_degrees", 10.0), ConfigError);
    for (const auto& name : config::study_parameters()) {
        CHECK(name.find('.') != std::string::npos);
    }
}

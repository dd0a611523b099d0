#include <sstream>

#include <doctest.h>

#include "crackflutter/analysis.hpp"

using namespace crackflutter;
using config::Json;

namespace {

config::RunConfig small_case() {
    return config::parse(Json::parse(R"({
        "plate": {"isotropic": {"E_Pa": 70e9, "nu": 0.3, "rho_kg_m3": 2700}},
        "mesh": {"nx": 10, "ny": 10},
        "solver": {"modes": 10},
        "threads": 2
    })"));
}

}  // namespace

TEST_CASE("single case report") {
    const auto r = analysis::run_case(small_case());
    REQUIRE(r.flutter_found);
    CHECK(r.omega_nd.size() == 10);
    CHECK(r.omega_nd[0] == doctest::Approx(19.74).epsilon(0.02));
    CHECK(r.point.lambda_cr_nd > 400.0);
    CHECK(r.point.lambda_cr_nd < 600.0);
    CHECK(r.point.omega2_cr_nd == doctest::Approx(r.point.omega_cr_nd * r.point.omega_cr_nd));
    // Dimensional and nondimensional values are consistent.
    const auto s = fem::scales_for(r.config.plate_model());
    CHECK(r.point.lambda_cr * s.pressure_factor() == doctest::Approx(r.point.lambda_cr_nd));

    const Json j = analysis::to_json(r);
    CHECK(j["config"] == config::to_json(small_case()));
    CHECK(j["flutter"]["lambda_cr_nd"].get<double>() == r.point.lambda_cr_nd);
    std::ostringstream text;
    analysis::write_text(r, text);
    CHECK(text.str().find("lambda_cr (nd)") != std::string::npos);
}

TEST_CASE("sweep range exhausted reports no coalescence") {
    auto c = small_case();
    c.solver.sweep.lambda_max = 100.0;
    const auto r = analysis::run_case(c);
    CHECK_FALSE(r.flutter_found);
    CHECK(r.lambda_swept_to == 100.0);
}

TEST_CASE("study is deterministic and survives failing cases") {
    auto c = small_case();
    c.crack = config::CrackConfig{};
    c.crack->cx_m = 0.5;
    c.crack->cy_m = 0.55;
    c.crack->d_over_a = 0.3;
    c.study = config::StudyConfig{"crack.d_over_a", {0.3, 0.5, 0.0, 0.6}};

    const auto rows = analysis::run_study(c);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].error.empty());
    CHECK_FALSE(rows[2].error.empty());  // zero crack length is rejected
    CHECK(rows[3].report.has_value());

    std::ostringstream first;
    std::ostringstream second;
    analysis::write_study_csv(rows, first);
    analysis::write_study_csv(analysis::run_study(c), second);
    CHECK(first.str() == second.str());
    CHECK(first.str().rfind("value,lambda_cr_nd,omega_cr_nd,omega2_cr_nd,status\n", 0) == 0);
}

TEST_CASE("empty study") {
    auto c = small_case();
    c.study = config::StudyConfig{"plate.h_m", {}};
    const auto rows = analysis::run_study(c);
    CHECK(rows.empty());
    std::ostringstream out;
    analysis::write_study_csv(rows, out);
    CHECK(out.str() == "value,lambda_cr_nd,omega_cr_nd,omega2_cr_nd,status\n");
}

TEST_CASE("prepared case exposes the assembled system") {
    auto c = small_case();
    c.crack = config::CrackConfig{};
    c.crack->cx_m = 0.5;
    c.crack->cy_m = 0.55;
    c.crack->d_over_a = 0.4;
    const auto pc = analysis::prepare(c);
    REQUIRE(pc.crack.has_value());
    CHECK(pc.system.dofs.enriched_node_count() > 0);
    CHECK(pc.system.size() == pc.system.dofs.free_count);
}

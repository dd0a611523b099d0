#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "crackflutter/analysis.hpp"
#include "crackflutter/config.hpp"
#include "crackflutter/errors.hpp"

namespace cf = crackflutter;
namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw cf::Error("cannot write " + path);
    return out;
}

int cmd_validate(const std::string& path) {
    const auto config = cf::config::load(path);
    std::cout << cf::config::to_json(config).dump(2) << "\n";
    return 0;
}

int cmd_run(const std::string& path) {
    const auto config = cf::config::load(path);
    const auto report = cf::analysis::run_case(config);
    cf::analysis::write_text(report, std::cout);
    const auto& out = config.output;
    if (!out.report_text.empty()) {
        auto f = open_output(out.report_text);
        cf::analysis::write_text(report, f);
    }
    if (!out.report_json.empty()) {
        open_output(out.report_json) << cf::analysis::to_json(report).dump(2) << "\n";
    }
    if (!out.trace_csv.empty()) {
        auto f = open_output(out.trace_csv);
        cf::flutter::write_trace_csv(report.trace, f);
    }
    return 0;
}

int cmd_study(const std::string& path) {
    const auto config = cf::config::load(path);
    if (!config.study) throw cf::ConfigError("study: block is required for the study command");
    const auto rows = cf::analysis::run_study(config);
    if (config.output.study_csv.empty()) {
        cf::analysis::write_study_csv(rows, std::cout);
    } else {
        auto f = open_output(config.output.study_csv);
        cf::analysis::write_study_csv(rows, f);
        std::cout << "wrote " << rows.size() << " rows to " << config.output.study_csv << "\n";
    }
    int failed = 0;
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            std::cerr << "case " << config.study->parameter << " = " << row.value
                      << " failed: " << row.error << "\n";
            ++failed;
        }
    }
    return failed == 0 ? 0 : 3;
}

int cmd_dump(const std::string& path, std::string dir) {
    const auto config = cf::config::load(path);
    if (dir.empty()) dir = config.output.matrices_dir;
    if (dir.empty()) dir = "matrices";
    fs::create_directories(dir);
    const auto pc = cf::analysis::prepare(config);
    const std::pair<const char*, const cf::fem::SparseMatrix*> mats[] = {
        {"K.mtx", &pc.system.k}, {"M.mtx", &pc.system.m}, {"A.mtx", &pc.system.a}};
    for (const auto& [name, m] : mats) {
        auto f = open_output((fs::path(dir) / name).string());
        cf::fem::write_matrix_market(*m, f);
    }
    auto nodes = open_output((fs::path(dir) / "nodes.csv").string());
    auto elements = open_output((fs::path(dir) / "elements.csv").string());
    cf::mesh::write_csv(pc.mesh, nodes, elements);
    std::cout << "wrote K, M, A (" << pc.system.size() << " free DOFs) and mesh to " << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Supersonic flutter of cracked functionally graded plates"};
    app.require_subcommand(1);

    std::string config_path;
    std::string dump_dir;
    auto* run = app.add_subcommand("run", "Analyse one configuration");
    auto* study = app.add_subcommand("study", "Run the parameter study of a configuration");
    auto* validate = app.add_subcommand("validate", "Parse a configuration and print it resolved");
    auto* dump = app.add_subcommand("dump-matrices", "Write K, M, A in Matrix Market format");
    for (auto* sub : {run, study, validate, dump}) {
        sub->add_option("config", config_path, "JSON configuration file")
            ->required()
            ->check(CLI::ExistingFile);
    }
    dump->add_option("-o,--output-dir", dump_dir, "Destination directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path);
        if (*study) return cmd_study(config_path);
        if (*validate) return cmd_validate(config_path);
        if (*dump) return cmd_dump(config_path, dump_dir);
    } catch (const cf::ConfigError& err) {
        std::cerr << "configuration error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}

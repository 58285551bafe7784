#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "swlab/field_io.hpp"
#include "swlab/kahler.hpp"
#include "swlab/parallel.hpp"
#include "swlab/suite.hpp"

using namespace swlab;

namespace {

int do_run(const std::string& config_path, const std::vector<std::string>& suites, std::int64_t seed, int grid,
           int threads, const std::string& report, bool timing) {
    SuiteConfig cfg = config_path.empty() ? SuiteConfig{} : load_config(config_path);
    if (!suites.empty()) cfg.suites = suites;
    if (seed >= 0) cfg.seed = std::uint64_t(seed);
    if (grid > 0) cfg.grids = {grid};
    if (threads > 0) cfg.threads = threads;
    cfg.validate();

    std::vector<CheckReport> checks = run_suite(cfg);
    std::string json = report_json(cfg, checks, timing);
    if (report.empty()) {
        std::cout << json;
    } else {
        std::ofstream f(report, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + report);
        f << json;
    }
    for (const auto& c : checks) {
        if (!c.pass) {
            std::cerr << "first failing check: " << c.name << "\n";
            return 1;
        }
    }
    return 0;
}

int do_study(const std::string& check, const std::vector<double>& levels, std::int64_t seed, const std::string& report) {
    StudyResult r = convergence_study(check, levels, seed >= 0 ? std::uint64_t(seed) : 1);
    nlohmann::ordered_json j;
    j["check"] = r.check;
    j["levels"] = r.levels;
    j["errors"] = r.errors;
    j["slope"] = r.slope;
    j["residual"] = r.residual;
    j["monotone"] = r.monotone;
    j["saturated"] = r.saturated;
    std::string out = j.dump(2) + "\n";
    if (report.empty())
        std::cout << out;
    else
        std::ofstream(report, std::ios::binary) << out;
    if (!r.monotone && !r.saturated) {
        std::cerr << "non-monotone errors in study " << check << "\n";
        return 1;
    }
    return 0;
}

// Dense kernel operator at A = 0 and constant alpha, as a 2-D field container.
int do_export(int grid, double alpha, const std::string& out) {
    Grid g(grid);
    Eigen::MatrixXd m = assemble_kernel_operator(Connection(g, Vec4::Zero()), Field<cd>(g, alpha));
    write_raw_file(out, matrix_to_raw(m));
    std::cout << m.rows() << " x " << m.cols() << " -> " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch verification of the swlab numerical checks"};
    app.require_subcommand(1);

    std::string config_path, report;
    std::vector<std::string> suites;
    std::int64_t seed = -1;
    int grid = 0, threads = 0;
    bool timing = false;
    auto* run = app.add_subcommand("run", "run verification suites");
    run->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    run->add_option("--suite", suites, "suite name (repeatable)");
    run->add_option("--seed", seed, "random seed");
    run->add_option("--grid", grid, "grid size for the grid-based checks");
    run->add_option("--threads", threads, "worker threads");
    run->add_option("--report", report, "write the JSON report here instead of stdout");
    run->add_flag("--timing", timing, "include per-check runtimes in the report");

    std::string check;
    std::vector<double> levels;
    std::string study_report;
    std::int64_t study_seed = -1;
    auto* study = app.add_subcommand("study", "convergence study of one check");
    study->add_option("--check", check, "one of dirac-variation, lc-variation, holonomy, adjoint-curved, adjoint-flat")
        ->required();
    study->add_option("--levels", levels, "t or epsilon values, or grid sizes for adjoint checks")
        ->required()
        ->delimiter(',');
    study->add_option("--seed", study_seed, "random seed");
    study->add_option("--report", study_report, "write the JSON result here instead of stdout");

    int export_grid = 4;
    double export_alpha = 1.0;
    std::string export_out;
    auto* exp = app.add_subcommand("export-kernel", "write the assembled kernel operator");
    exp->add_option("--grid", export_grid, "grid size")->capture_default_str();
    exp->add_option("--alpha", export_alpha, "constant section alpha")->capture_default_str();
    exp->add_option("--out", export_out, "output path")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return do_run(config_path, suites, seed, grid, threads, report, timing);
        if (*study) return do_study(check, levels, study_seed, study_report);
        return do_export(export_grid, export_alpha, export_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

#include <cstdlib>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "rf2d/config.hpp"
#include "rf2d/expr.hpp"
#include "rf2d/inequalities.hpp"
#include "rf2d/oracles.hpp"
#include "rf2d/runner.hpp"

namespace {

using rf2d::ExperimentConfig;

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("RF2D_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    ExperimentConfig cfg = rf2d::parse_config_file(path);
    for (const auto& ov : overrides) rf2d::apply_override(cfg, ov);
    return cfg;
}

int run_and_report(const ExperimentConfig& cfg) {
    const rf2d::RunResult result = rf2d::run_experiment(cfg);
    for (const auto& r : result.records) {
        std::cout << "[" << r.status << "] " << r.suite << "." << r.claim
                  << " worst_deficit=" << r.worst_deficit << "\n";
    }
    std::cout << "report: " << (cfg.output_dir / "report.json").string() << "\n";
    return result.any_fail() ? 1 : 0;
}

int cmd_constants(const ExperimentConfig& cfg) {
    const auto base = rf2d::BaseSurface::make(cfg.surface_kind, cfg.resolution);
    const rf2d::ConformalSurface s0(base, rf2d::phi0_field(*base, cfg.phi0, cfg.seed), 0.0);
    std::optional<double> override;
    if (cfg.c_ni_mode == rf2d::CniMode::Analytic)
        override = rf2d::oracle::analytic_cni(cfg.surface_kind == rf2d::SurfaceKind::Sphere
                                                  ? rf2d::oracle::Family::RoundSphere
                                                  : rf2d::oracle::Family::FlatTorus);
    else if (cfg.c_ni_mode == rf2d::CniMode::Value)
        override = cfg.c_ni_value;
    const rf2d::LogSobolevConstants c = rf2d::constants_for(s0, override);
    nlohmann::json j = {{"c_ni", c.c_ni},       {"vol", c.vol},  {"min_r_minus", c.min_r_minus},
                        {"lambda0", c.lambda0}, {"a1", c.a1},    {"a2", c.a2}};
    if (c.delta0) j["delta0"] = *c.delta0;
    if (c.b0) j["b0"] = *c.b0;
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream out(cfg.output_dir / "constants.json", std::ios::trunc);
    out << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_report(const std::string& dir) {
    std::ifstream in(std::filesystem::path(dir) / "report.json");
    if (!in) {
        std::cerr << "no report.json under " << dir << "\n";
        return 2;
    }
    nlohmann::json report;
    in >> report;
    bool any_fail = false;
    for (const auto& r : report["suites"]) {
        const std::string status = r["status"];
        any_fail = any_fail || status == "fail";
        std::cout << "[" << status << "] " << r["suite"].get<std::string>() << "."
                  << r["claim"].get<std::string>() << " worst_deficit=" << r["worst_deficit"]
                  << "\n";
    }
    return any_fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();
    CLI::App app{"rf2d: 2D Ricci flow simulator and inequality verification harness"};
    app.require_subcommand(1);

    std::string config_path, suite_name, report_dir;
    std::vector<std::string> overrides;

    auto add_config_opts = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "experiment config file")->required();
        sub->add_option("--override", overrides, "key=value applied after the file parse");
    };

    CLI::App* c_run = app.add_subcommand("run", "run all configured suites");
    add_config_opts(c_run);
    CLI::App* c_flow = app.add_subcommand("flow", "run the flow and store the trajectory");
    add_config_opts(c_flow);
    CLI::App* c_verify = app.add_subcommand("verify", "run a single suite");
    c_verify->add_option("suite", suite_name, "suite name")->required();
    add_config_opts(c_verify);
    CLI::App* c_constants = app.add_subcommand("constants", "compute the constant bundle for g0");
    add_config_opts(c_constants);
    CLI::App* c_report = app.add_subcommand("report", "summarize an output directory");
    c_report->add_option("dir", report_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_report->parsed()) return cmd_report(report_dir);
        ExperimentConfig cfg = load_config(config_path, overrides);
        if (c_flow->parsed()) cfg.suites = {"flow"};
        if (c_verify->parsed()) cfg.suites = {suite_name};
        if (c_constants->parsed()) return cmd_constants(cfg);
        return run_and_report(cfg);
    } catch (const rf2d::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const rf2d::ExpressionError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

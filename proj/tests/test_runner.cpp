#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rf2d/runner.hpp"

using namespace rf2d;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_config(const std::filesystem::path& outdir) {
    ExperimentConfig cfg;
    cfg.surface_kind = SurfaceKind::Torus;
    cfg.resolution = 32;
    cfg.phi0 = "0.1*sin(x)";
    cfg.t_end = 0.2;
    cfg.snapshot_every = 0.1;
    cfg.suites = {"flow", "spectral", "static3"};
    cfg.c_ni_mode = CniMode::Estimate;
    cfg.seed = 11;
    cfg.output_dir = outdir;
    return cfg;
}

}  // namespace

TEST_CASE("run_experiment produces records and files") {
    const auto dir = std::filesystem::temp_directory_path() / "rf2d_runner_a";
    std::filesystem::remove_all(dir);
    const ExperimentConfig cfg = small_config(dir);
    const RunResult result = run_experiment(cfg);

    REQUIRE(!result.records.empty());
    for (const auto& r : result.records) {
        INFO(r.suite, ".", r.claim, " -> ", r.status);
        CHECK(r.status != "fail");
    }
    CHECK(!result.any_fail());
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "timings.csv"));
    CHECK(std::filesystem::exists(dir / "timeseries.csv"));
    CHECK(std::filesystem::exists(dir / "spectral.csv"));
    CHECK(std::filesystem::exists(dir / "static3.csv"));
    CHECK(std::filesystem::exists(dir / "snapshots" / "manifest.csv"));

    const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report["suites"].size() == result.records.size());
    // One record per configured claim; failures must carry a witness.
    for (const auto& jr : report["suites"]) CHECK(jr.contains("witness"));
}

TEST_CASE("identical configs give byte-identical reports and CSVs") {
    const auto dir_a = std::filesystem::temp_directory_path() / "rf2d_repro_a";
    const auto dir_b = std::filesystem::temp_directory_path() / "rf2d_repro_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    ExperimentConfig cfg_a = small_config(dir_a);
    ExperimentConfig cfg_b = small_config(dir_b);
    (void)run_experiment(cfg_a);
    (void)run_experiment(cfg_b);
    for (const char* name : {"report.json", "timeseries.csv", "spectral.csv", "static3.csv"})
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
}

TEST_CASE("not-applicable suites are reported as such") {
    const auto dir = std::filesystem::temp_directory_path() / "rf2d_runner_na";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg = small_config(dir);
    cfg.suites = {"flow", "logsobolevB", "extinctionE", "conjugate37"};
    cfg.snapshot_every = 0.001;
    cfg.t_end = 0.02;
    const RunResult result = run_experiment(cfg);
    int n_na = 0;
    for (const auto& r : result.records) {
        if (r.suite == "logsobolevB" || r.suite == "extinctionE") {
            CHECK(r.status == "not-applicable");
            ++n_na;
        }
        CHECK(r.status != "fail");
    }
    CHECK(n_na == 2);
}

TEST_CASE("invalid configs are usage errors") {
    ExperimentConfig cfg;
    cfg.suites = {};
    CHECK_THROWS_AS((void)run_experiment(cfg), ConfigError);
}

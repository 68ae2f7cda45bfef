#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rf2d/base_surface.hpp"

namespace rf2d {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CniMode { Analytic, Estimate, Value };

inline const std::vector<std::string> kKnownSuites = {
    "flow",       "spectral",     "static3",     "logsobolevA", "logsobolevB",
    "sobolevC",   "noncollapseD", "extinctionE", "conjugate37"};

// Flat key=value experiment description; see docs in README.
struct ExperimentConfig {
    SurfaceKind surface_kind = SurfaceKind::Torus;
    unsigned resolution = 96;
    std::string phi0 = "zero";
    double t_end = 1.0;
    double snapshot_every = 0.05;
    std::vector<std::string> suites;
    std::vector<double> p_values = {4.0};
    std::vector<double> sigma_grid;  // default {2^k : k=-8..4} when empty
    CniMode c_ni_mode = CniMode::Analytic;
    double c_ni_value = 0.0;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "rf2d_out";
    double safety_factor = 0.2;
    double dt_max = 1e-2;
    double dt_min = 1e-12;

    void validate() const;  // throws ConfigError naming the offending field
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Applies one "key=value" pair on top of a parsed config.
void apply_override(ExperimentConfig& cfg, const std::string& key_eq_value);

}  // namespace rf2d

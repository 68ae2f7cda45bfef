#include "rf2d/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rf2d {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: bad number for '" + key + "': " + v);
    }
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "surface") {
        const auto parts = split(value, ' ');
        if (parts.size() != 2) throw ConfigError("config: surface must be 'torus N' or 'sphere L'");
        if (parts[0] == "torus") cfg.surface_kind = SurfaceKind::Torus;
        else if (parts[0] == "sphere") cfg.surface_kind = SurfaceKind::Sphere;
        else throw ConfigError("config: unknown surface kind '" + parts[0] + "'");
        cfg.resolution = static_cast<unsigned>(parse_double(key, parts[1]));
    } else if (key == "phi0") {
        cfg.phi0 = value;
    } else if (key == "t_end") {
        cfg.t_end = parse_double(key, value);
    } else if (key == "snapshot_every") {
        cfg.snapshot_every = parse_double(key, value);
    } else if (key == "suites") {
        cfg.suites = split(value, ',');
    } else if (key == "p_values") {
        cfg.p_values.clear();
        for (const auto& v : split(value, ',')) cfg.p_values.push_back(parse_double(key, v));
    } else if (key == "sigma_grid") {
        cfg.sigma_grid.clear();
        for (const auto& v : split(value, ',')) cfg.sigma_grid.push_back(parse_double(key, v));
    } else if (key == "c_ni_mode") {
        if (value == "analytic") cfg.c_ni_mode = CniMode::Analytic;
        else if (value == "estimate") cfg.c_ni_mode = CniMode::Estimate;
        else if (value.rfind("value:", 0) == 0) {
            cfg.c_ni_mode = CniMode::Value;
            cfg.c_ni_value = parse_double(key, value.substr(6));
        } else {
            throw ConfigError("config: c_ni_mode must be analytic, estimate or value:<x>");
        }
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_double(key, value));
    } else if (key == "output_dir") {
        cfg.output_dir = value;
    } else if (key == "safety_factor") {
        cfg.safety_factor = parse_double(key, value);
    } else if (key == "dt_max") {
        cfg.dt_max = parse_double(key, value);
    } else if (key == "dt_min") {
        cfg.dt_min = parse_double(key, value);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (suites.empty()) throw ConfigError("config: suites must be nonempty");
    for (const auto& s : suites)
        if (std::find(kKnownSuites.begin(), kKnownSuites.end(), s) == kKnownSuites.end())
            throw ConfigError("config: unknown suite '" + s + "'");
    for (double p : p_values)
        if (!(p > 2.0)) throw ConfigError("config: p_values entries must exceed 2");
    for (double s : sigma_grid)
        if (!(s > 0.0)) throw ConfigError("config: sigma_grid entries must be positive");
    if (!(t_end > 0.0)) throw ConfigError("config: t_end must be positive");
    if (!(snapshot_every > 0.0)) throw ConfigError("config: snapshot_every must be positive");
    if (!(safety_factor > 0.0 && safety_factor < 1.0))
        throw ConfigError("config: safety_factor must lie in (0,1)");
    if (!(dt_min > 0.0 && dt_min <= dt_max)) throw ConfigError("config: need 0 < dt_min <= dt_max");
    if (surface_kind == SurfaceKind::Torus && resolution < 8)
        throw ConfigError("config: torus resolution must be >= 8");
    if (surface_kind == SurfaceKind::Sphere && (resolution < 2 || resolution > 8))
        throw ConfigError("config: sphere level must be in [2,8]");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(ExperimentConfig& cfg, const std::string& key_eq_value) {
    const auto eq = key_eq_value.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value");
    std::string key = trim(key_eq_value.substr(0, eq));
    std::string value = trim(key_eq_value.substr(eq + 1));
    set_key(cfg, key, value);
}

}  // namespace rf2d

#include "rodsim/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rodsim/calibrate.hpp"

namespace rodsim {

RobotSpec RunConfig::robot_spec() const {
    RobotSpec spec;
    spec.n = n;
    spec.head_radius = head_radius_m;
    spec.disc_diameter = disc_diameter_m;
    spec.tail_length = tail_length_m;
    spec.tail_radius = tail_radius_m;
    spec.youngs_modulus = youngs_modulus_pa;
    spec.poisson_ratio = poisson_ratio;
    spec.density = density_kg_m3;
    spec.target_edge_length = target_edge_length_m;
    spec.head_mass = head_mass_kg;
    spec.rigid_multiplier = rigid_multiplier;
    return spec;
}

DragModel RunConfig::drag_model() const {
    return make_drag_model(mu_pa_s, c1, c2, head_radius_m, tail_length_m, tail_radius_m);
}

SolverConfig RunConfig::solver_config() const {
    SolverConfig cfg;
    cfg.dt = dt_s;
    cfg.newton_tolerance = newton_tolerance_n > 0.0
                               ? newton_tolerance_n
                               : default_newton_tolerance(youngs_modulus_pa, tail_radius_m);
    cfg.max_newton_iterations = max_newton_iterations;
    cfg.rigid_multiplier = rigid_multiplier;
    return cfg;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t consumed = 0;
        const double v = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key `" + key + "`: cannot parse number from `" + value + "`");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw ConfigError("config key `" + key + "`: expected an integer");
    return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters = {
        {"n", [&](const std::string& k, const std::string& v) { cfg.n = parse_int(k, v); }},
        {"head_radius_m", [&](const std::string& k, const std::string& v) { cfg.head_radius_m = parse_double(k, v); }},
        {"disc_diameter_m", [&](const std::string& k, const std::string& v) { cfg.disc_diameter_m = parse_double(k, v); }},
        {"tail_length_m", [&](const std::string& k, const std::string& v) { cfg.tail_length_m = parse_double(k, v); }},
        {"tail_radius_m", [&](const std::string& k, const std::string& v) { cfg.tail_radius_m = parse_double(k, v); }},
        {"youngs_modulus_pa", [&](const std::string& k, const std::string& v) { cfg.youngs_modulus_pa = parse_double(k, v); }},
        {"poisson_ratio", [&](const std::string& k, const std::string& v) { cfg.poisson_ratio = parse_double(k, v); }},
        {"density_kg_m3", [&](const std::string& k, const std::string& v) { cfg.density_kg_m3 = parse_double(k, v); }},
        {"target_edge_length_m", [&](const std::string& k, const std::string& v) { cfg.target_edge_length_m = parse_double(k, v); }},
        {"head_mass_kg", [&](const std::string& k, const std::string& v) { cfg.head_mass_kg = parse_double(k, v); }},
        {"rigid_multiplier", [&](const std::string& k, const std::string& v) { cfg.rigid_multiplier = parse_double(k, v); }},
        {"C1", [&](const std::string& k, const std::string& v) { cfg.c1 = parse_double(k, v); }},
        {"C2", [&](const std::string& k, const std::string& v) { cfg.c2 = parse_double(k, v); }},
        {"mu_pa_s", [&](const std::string& k, const std::string& v) { cfg.mu_pa_s = parse_double(k, v); }},
        {"omega_T_rpm", [&](const std::string& k, const std::string& v) { cfg.omega_T_rpm = parse_double(k, v); }},
        {"duration_s", [&](const std::string& k, const std::string& v) { cfg.duration_s = parse_double(k, v); }},
        {"dt_s", [&](const std::string& k, const std::string& v) { cfg.dt_s = parse_double(k, v); }},
        {"newton_tolerance_n", [&](const std::string& k, const std::string& v) { cfg.newton_tolerance_n = parse_double(k, v); }},
        {"max_newton_iterations", [&](const std::string& k, const std::string& v) { cfg.max_newton_iterations = parse_int(k, v); }},
        {"output_dir", [&](const std::string&, const std::string& v) { cfg.output_dir = v; }},
        {"parallelism", [&](const std::string& k, const std::string& v) { cfg.parallelism = parse_int(k, v); }},
        {"sweep.n_list",
         [&](const std::string& k, const std::string& v) {
             cfg.sweep_n_list.clear();
             for (const auto& item : split_list(v)) cfg.sweep_n_list.push_back(parse_int(k, item));
         }},
        {"sweep.omega_T_rpm_list",
         [&](const std::string& k, const std::string& v) {
             cfg.sweep_omega_T_rpm_list.clear();
             for (const auto& item : split_list(v))
                 cfg.sweep_omega_T_rpm_list.push_back(parse_double(k, item));
         }},
    };

    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            std::ostringstream msg;
            msg << origin << ":" << lineno << ": expected `key: value`, got `" << line << "`";
            throw ConfigError(msg.str());
        }
        const std::string key = trim(line.substr(0, colon));
        const std::string value = trim(line.substr(colon + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            std::ostringstream msg;
            msg << origin << ":" << lineno << ": unknown config key `" << key << "`";
            throw ConfigError(msg.str());
        }
        it->second(key, value);
    }
    validate_config(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "n: " << c.n << "\n";
    out << "head_radius_m: " << fmt_double(c.head_radius_m) << "\n";
    out << "disc_diameter_m: " << fmt_double(c.disc_diameter_m) << "\n";
    out << "tail_length_m: " << fmt_double(c.tail_length_m) << "\n";
    out << "tail_radius_m: " << fmt_double(c.tail_radius_m) << "\n";
    out << "youngs_modulus_pa: " << fmt_double(c.youngs_modulus_pa) << "\n";
    out << "poisson_ratio: " << fmt_double(c.poisson_ratio) << "\n";
    out << "density_kg_m3: " << fmt_double(c.density_kg_m3) << "\n";
    out << "target_edge_length_m: " << fmt_double(c.target_edge_length_m) << "\n";
    out << "head_mass_kg: " << fmt_double(c.head_mass_kg) << "\n";
    out << "rigid_multiplier: " << fmt_double(c.rigid_multiplier) << "\n";
    out << "C1: " << fmt_double(c.c1) << "\n";
    out << "C2: " << fmt_double(c.c2) << "\n";
    out << "mu_pa_s: " << fmt_double(c.mu_pa_s) << "\n";
    out << "omega_T_rpm: " << fmt_double(c.omega_T_rpm) << "\n";
    out << "duration_s: " << fmt_double(c.duration_s) << "\n";
    out << "dt_s: " << fmt_double(c.dt_s) << "\n";
    out << "newton_tolerance_n: " << fmt_double(c.newton_tolerance_n) << "\n";
    out << "max_newton_iterations: " << c.max_newton_iterations << "\n";
    out << "output_dir: " << c.output_dir << "\n";
    out << "parallelism: " << c.parallelism << "\n";
    if (!c.sweep_n_list.empty()) {
        out << "sweep.n_list: ";
        for (size_t i = 0; i < c.sweep_n_list.size(); ++i)
            out << (i ? ", " : "") << c.sweep_n_list[i];
        out << "\n";
    }
    if (!c.sweep_omega_T_rpm_list.empty()) {
        out << "sweep.omega_T_rpm_list: ";
        for (size_t i = 0; i < c.sweep_omega_T_rpm_list.size(); ++i)
            out << (i ? ", " : "") << fmt_double(c.sweep_omega_T_rpm_list[i]);
        out << "\n";
    }
    return out.str();
}

void validate_config(const RunConfig& c) {
    const auto positive = [](double v, const char* key) {
        if (!(v > 0.0)) throw ConfigError(std::string("config key `") + key + "` must be positive");
    };
    if (c.n < 1) throw ConfigError("config key `n` must be at least 1");
    positive(c.head_radius_m, "head_radius_m");
    positive(c.disc_diameter_m, "disc_diameter_m");
    positive(c.tail_length_m, "tail_length_m");
    positive(c.tail_radius_m, "tail_radius_m");
    positive(c.youngs_modulus_pa, "youngs_modulus_pa");
    positive(c.density_kg_m3, "density_kg_m3");
    positive(c.target_edge_length_m, "target_edge_length_m");
    positive(c.head_mass_kg, "head_mass_kg");
    positive(c.rigid_multiplier, "rigid_multiplier");
    positive(c.c1, "C1");
    positive(c.c2, "C2");
    positive(c.mu_pa_s, "mu_pa_s");
    positive(c.duration_s, "duration_s");
    positive(c.dt_s, "dt_s");
    if (!(c.poisson_ratio > -1.0 && c.poisson_ratio <= 0.5))
        throw ConfigError("config key `poisson_ratio` must lie in (-1, 0.5]");
    if (c.omega_T_rpm < 0.0) throw ConfigError("config key `omega_T_rpm` must not be negative");
    if (c.newton_tolerance_n < 0.0)
        throw ConfigError("config key `newton_tolerance_n` must not be negative");
    if (c.max_newton_iterations < 1)
        throw ConfigError("config key `max_newton_iterations` must be at least 1");
    if (c.parallelism < 0) throw ConfigError("config key `parallelism` must not be negative");
    for (int n : c.sweep_n_list)
        if (n < 1) throw ConfigError("config key `sweep.n_list` entries must be at least 1");
    for (double w : c.sweep_omega_T_rpm_list)
        if (!(w > 0.0))
            throw ConfigError("config key `sweep.omega_T_rpm_list` entries must be positive");
}

}  // namespace rodsim

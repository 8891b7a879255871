#ifndef RODSIM_CONFIG_HPP
#define RODSIM_CONFIG_HPP

#include <string>
#include <vector>

#include "rodsim/robot.hpp"

namespace rodsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One run of the simulator as described by a config file. Boundary units are
// the reporting units (rpm, mm/s); everything internal is SI. Every field
// has the physical robot's value as its default, so an empty file is a valid
// config.
struct RunConfig {
    // robot
    int n = 2;
    double head_radius_m = 0.02;
    double disc_diameter_m = 0.04;
    double tail_length_m = 0.111;
    double tail_radius_m = 0.0032;
    double youngs_modulus_pa = 1.2e6;
    double poisson_ratio = 0.5;
    double density_kg_m3 = 1000.0;
    double target_edge_length_m = 4.11e-3;
    double head_mass_kg = 0.035;
    double rigid_multiplier = 1e4;

    // drag (fitted values)
    double c1 = 2.420;
    double c2 = 0.039;
    double mu_pa_s = 6.828;

    // run
    double omega_T_rpm = 100.0;
    double duration_s = 200.0;

    // solver
    double dt_s = 1e-2;
    double newton_tolerance_n = 0.0;  // 0 = derived from the tail stiffness
    int max_newton_iterations = 50;

    // io / sweep
    std::string output_dir = "out";
    std::vector<int> sweep_n_list;
    std::vector<double> sweep_omega_T_rpm_list;
    int parallelism = 0;  // 0 = hardware concurrency

    RobotSpec robot_spec() const;
    DragModel drag_model() const;
    SolverConfig solver_config() const;
};

// Flat `key: value` text, `#` comments, one nesting level spelled as
// `sweep.<key>`. Unknown keys are rejected; omitted keys keep defaults.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

std::string serialize_config(const RunConfig& config);

void validate_config(const RunConfig& config);

}  // namespace rodsim

#endif

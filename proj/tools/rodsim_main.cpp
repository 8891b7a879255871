#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rodsim/calibrate.hpp"
#include "rodsim/config.hpp"
#include "rodsim/output.hpp"
#include "rodsim/version.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

std::string version_string() {
    std::string s = "rodsim ";
    s += rodsim::kVersion;
#if defined(__clang__)
    s += " (clang " + std::to_string(__clang_major__) + "." + std::to_string(__clang_minor__) + ")";
#elif defined(__GNUC__)
    s += " (gcc " + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__) + ")";
#endif
#ifdef NDEBUG
    s += " release";
#else
    s += " debug";
#endif
    return s;
}

void write_json(const ordered_json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw rodsim::OutputError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

int cmd_simulate(const std::string& config_path, const std::string& out_override) {
    rodsim::RunConfig cfg = rodsim::parse_config(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;

    const rodsim::BuiltRobot robot = rodsim::build_robot(cfg.robot_spec());
    const rodsim::DragModel drag = cfg.drag_model();
    const double omega_T = cfg.omega_T_rpm * rodsim::kRpmToRadPerSec;
    const rodsim::Trajectory traj =
        rodsim::simulate(robot, drag, omega_T, cfg.duration_s, cfg.solver_config());
    const rodsim::Measurement m = rodsim::measure(traj, omega_T, drag);

    std::filesystem::create_directories(cfg.output_dir);
    const auto traj_path = std::filesystem::path(cfg.output_dir) / "trajectory.csv";
    rodsim::write_trajectory(traj, traj_path.string());

    ordered_json j;
    j["omega_T_rpm"] = cfg.omega_T_rpm;
    j["v_mm_s"] = m.v * 1e3;
    j["omega_h_rpm"] = m.omega_h * rodsim::kRadPerSecToRpm;
    j["omega_t_rpm"] = m.omega_t * rodsim::kRadPerSecToRpm;
    j["eta"] = m.eta;
    j["fit_residual_m"] = m.fit_residual;
    const auto meas_path = std::filesystem::path(cfg.output_dir) / "measurement.json";
    write_json(j, meas_path);

    std::cout << "wrote " << traj_path.string() << " and " << meas_path.string() << "\n"
              << "v = " << rodsim::fmt_g12(m.v * 1e3)
              << " mm/s, omega_h = " << rodsim::fmt_g12(m.omega_h * rodsim::kRadPerSecToRpm)
              << " rpm, eta = " << rodsim::fmt_g12(m.eta) << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path) {
    const rodsim::RunConfig cfg = rodsim::parse_config(config_path);
    const auto rows = rodsim::run_sweep(cfg);
    size_t ok = 0;
    for (const auto& r : rows) ok += r.status == "ok";
    std::cout << "wrote " << (std::filesystem::path(cfg.output_dir) / "sweep.csv").string() << " ("
              << ok << "/" << rows.size() << " runs ok)\n";
    return ok == rows.size() ? 0 : 1;
}

int cmd_calibrate(const std::string& config_path, const std::string& data_path) {
    const rodsim::RunConfig cfg = rodsim::parse_config(config_path);
    const rodsim::CalibrationDataset dataset = rodsim::load_dataset(data_path);

    rodsim::CalibrationSetup setup;
    setup.base_spec = cfg.robot_spec();
    setup.solver = cfg.solver_config();
    setup.duration = cfg.duration_s;
    setup.parallelism = cfg.parallelism;

    rodsim::FitOptions options;
    options.initial = {cfg.c1, cfg.c2, cfg.mu_pa_s};

    const rodsim::FittedParams fitted = rodsim::fit(dataset, setup, options);

    ordered_json j;
    j["C1"] = fitted.C1;
    j["C2"] = fitted.C2;
    j["mu_pa_s"] = fitted.mu;
    j["objective"] = fitted.objective_value;
    j["evaluations"] = fitted.evaluations;
    j["converged"] = fitted.converged;
    j["underdetermined"] = fitted.underdetermined;
    std::filesystem::create_directories(cfg.output_dir);
    const auto path = std::filesystem::path(cfg.output_dir) / "calibration.json";
    write_json(j, path);

    std::cout << "wrote " << path.string() << "\n" << j.dump(2) << "\n";
    if (fitted.underdetermined)
        std::cerr << "warning: dataset underdetermines the three drag parameters\n";
    if (!fitted.converged)
        std::cerr << "warning: fit stopped at the evaluation budget; best-so-far reported\n";
    return 0;
}

int cmd_measure(const std::string& trajectory_path, double omega_T_rpm, double c1, double c2,
                double head_radius_m) {
    const rodsim::TrajectoryFile tf = rodsim::read_trajectory(trajectory_path);
    const size_t n = tf.t_s.size();
    const size_t start = static_cast<size_t>(rodsim::kTransientFraction * n);
    if (n < start + 2) throw rodsim::MeasureError("trajectory too short to measure");
    const std::span<const double> t(tf.t_s.data() + start, n - start);
    const std::span<const double> s(tf.s_m.data() + start, n - start);
    const std::span<const double> th(tf.theta_h_rad.data() + start, n - start);
    const rodsim::LinearFit speed = rodsim::fit_line(t, s);
    const rodsim::LinearFit rot = rodsim::fit_line(t, th);

    ordered_json j;
    j["v_mm_s"] = speed.slope * 1e3;
    j["fit_residual_m"] = speed.rms_residual;
    j["omega_h_rpm"] = std::abs(rot.slope) * rodsim::kRadPerSecToRpm;
    if (omega_T_rpm > 0.0)
        j["omega_t_rpm"] = omega_T_rpm - std::abs(rot.slope) * rodsim::kRadPerSecToRpm;
    if (std::abs(rot.slope) > 0.0) {
        rodsim::DragModel drag;
        drag.C1 = c1;
        drag.C2 = c2;
        drag.a = head_radius_m;
        j["eta"] = rodsim::efficiency(speed.slope, rot.slope, drag);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for multi-tailed flexible-rod robots in granular media"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    std::string config_path, out_override, data_path, trajectory_path;
    double omega_T_rpm = 0.0, c1 = 2.420, c2 = 0.039, head_radius_m = 0.02;

    auto* sim = app.add_subcommand("simulate", "Run one simulation and write trajectory + measurement");
    sim->add_option("--config", config_path, "Run configuration file")->required();
    sim->add_option("--out", out_override, "Output directory override");

    auto* sweep = app.add_subcommand("sweep", "Run the configured (n, omega_T) sweep");
    sweep->add_option("--config", config_path, "Run configuration file")->required();

    auto* cal = app.add_subcommand("calibrate", "Fit C1, C2, mu to a measurement dataset");
    cal->add_option("--config", config_path, "Run configuration file")->required();
    cal->add_option("--data", data_path, "Dataset CSV (n, omega_T_rpm, v_mm_s, omega_h_rpm, weight)")
        ->required();

    auto* meas = app.add_subcommand("measure", "Re-measure speed and rotation from a trajectory CSV");
    meas->add_option("--trajectory", trajectory_path, "Trajectory CSV written by `simulate`")
        ->required();
    meas->add_option("--omega-T-rpm", omega_T_rpm, "Motor speed, enables the omega_t column");
    meas->add_option("--c1", c1, "Head force coefficient for the efficiency column");
    meas->add_option("--c2", c2, "Head torque coefficient for the efficiency column");
    meas->add_option("--head-radius-m", head_radius_m, "Head radius for the efficiency column");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, out_override);
        if (sweep->parsed()) return cmd_sweep(config_path);
        if (cal->parsed()) return cmd_calibrate(config_path, data_path);
        if (meas->parsed()) return cmd_measure(trajectory_path, omega_T_rpm, c1, c2, head_radius_m);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}

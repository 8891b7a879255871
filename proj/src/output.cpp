#include "rodsim/output.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "rodsim/calibrate.hpp"

namespace rodsim {

std::string fmt_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_trajectory(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw OutputError("cannot write trajectory file: " + path);
    out << "t_s,xh_x_m,xh_y_m,xh_z_m,s_m,theta_h_rad,residual,iters\n";
    for (size_t i = 0; i < traj.size(); ++i) {
        const Eigen::Vector3d xh = traj.head_position(i);
        out << fmt_g12(traj.time[i]) << ',' << fmt_g12(xh.x()) << ',' << fmt_g12(xh.y()) << ','
            << fmt_g12(xh.z()) << ',' << fmt_g12(traj.axial_position(i)) << ','
            << fmt_g12(traj.theta_head(i)) << ',' << fmt_g12(traj.residual[i]) << ','
            << traj.iterations[i] << '\n';
    }
    if (!out) throw OutputError("short write on trajectory file: " + path);
}

TrajectoryFile read_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw OutputError("cannot open trajectory file: " + path);
    TrajectoryFile tf;
    std::string line;
    if (!std::getline(in, line)) throw OutputError("empty trajectory file: " + path);
    if (line.rfind("t_s,", 0) != 0) throw OutputError("unrecognized trajectory header in " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 7> vals{};
        int iters = 0;
        const int got = std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%d", &vals[0], &vals[1],
                                    &vals[2], &vals[3], &vals[4], &vals[5], &vals[6], &iters);
        if (got != 8) throw OutputError("malformed trajectory row in " + path + ": " + line);
        tf.t_s.push_back(vals[0]);
        tf.s_m.push_back(vals[4]);
        tf.theta_h_rad.push_back(vals[5]);
    }
    return tf;
}

namespace {

bool row_is_finite(const SweepRow& r) {
    return std::isfinite(r.v_mm_s) && std::isfinite(r.omega_h_rpm) && std::isfinite(r.omega_t_rpm) &&
           std::isfinite(r.eta) && std::isfinite(r.newton_iters_mean) && std::isfinite(r.wall_time_s);
}

SweepRow run_sweep_point(const RunConfig& config, int n, double omega_T_rpm) {
    SweepRow row;
    row.n = n;
    row.omega_T_rpm = omega_T_rpm;
    const auto start = std::chrono::steady_clock::now();
    try {
        RobotSpec spec = config.robot_spec();
        spec.n = n;
        const BuiltRobot robot = build_robot(spec);
        const DragModel drag = config.drag_model();
        const double omega_T = omega_T_rpm * kRpmToRadPerSec;
        const Trajectory traj = simulate(robot, drag, omega_T, config.duration_s,
                                         config.solver_config());
        const Measurement m = measure(traj, omega_T, drag);
        row.v_mm_s = m.v * 1e3;
        row.omega_h_rpm = m.omega_h * kRadPerSecToRpm;
        row.omega_t_rpm = m.omega_t * kRadPerSecToRpm;
        row.eta = m.eta;
        row.newton_iters_mean =
            std::accumulate(traj.iterations.begin() + 1, traj.iterations.end(), 0.0) /
            static_cast<double>(traj.iterations.size() - 1);
    } catch (const std::exception& err) {
        row = SweepRow{};
        row.n = n;
        row.omega_T_rpm = omega_T_rpm;
        std::string reason = err.what();
        std::replace(reason.begin(), reason.end(), ',', ';');
        std::replace(reason.begin(), reason.end(), '\n', ' ');
        row.status = "failed: " + reason;
    }
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (row.status == "ok" && !row_is_finite(row)) {
        const SweepRow failed{row.n, row.omega_T_rpm, 0, 0, 0, 0, 0, row.wall_time_s,
                              "failed: non-finite measurement"};
        return failed;
    }
    return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const RunConfig& config) {
    if (config.sweep_n_list.empty() || config.sweep_omega_T_rpm_list.empty())
        throw ConfigError("sweep requires non-empty sweep.n_list and sweep.omega_T_rpm_list");

    std::vector<std::pair<int, double>> points;
    std::vector<int> ns = config.sweep_n_list;
    std::vector<double> omegas = config.sweep_omega_T_rpm_list;
    std::sort(ns.begin(), ns.end());
    std::sort(omegas.begin(), omegas.end());
    for (int n : ns)
        for (double w : omegas) points.emplace_back(n, w);

    std::vector<SweepRow> rows(points.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(
        config.parallelism > 0 ? static_cast<unsigned>(config.parallelism) : hw,
        static_cast<unsigned>(points.size()));

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            rows[i] = run_sweep_point(config, points[i].first, points[i].second);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::filesystem::create_directories(config.output_dir);
    write_sweep_csv(rows, (std::filesystem::path(config.output_dir) / "sweep.csv").string());
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw OutputError("cannot write sweep file: " + path);
    out << "n,omega_T_rpm,v_mm_s,omega_h_rpm,omega_t_rpm,eta,newton_iters_mean,wall_time_s,status\n";
    for (const auto& r : rows) {
        out << r.n << ',' << fmt_g12(r.omega_T_rpm) << ',' << fmt_g12(r.v_mm_s) << ','
            << fmt_g12(r.omega_h_rpm) << ',' << fmt_g12(r.omega_t_rpm) << ',' << fmt_g12(r.eta) << ','
            << fmt_g12(r.newton_iters_mean) << ',' << fmt_g12(r.wall_time_s) << ',' << r.status
            << '\n';
    }
    if (!out) throw OutputError("short write on sweep file: " + path);
}

}  // namespace rodsim

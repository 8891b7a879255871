#ifndef RODSIM_OUTPUT_HPP
#define RODSIM_OUTPUT_HPP

#include <string>
#include <vector>

#include "rodsim/config.hpp"
#include "rodsim/measure.hpp"

namespace rodsim {

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 12 significant digits, reproducible byte-for-byte on a fixed platform.
std::string fmt_g12(double v);

// CSV columns: t_s, xh_x_m, xh_y_m, xh_z_m, s_m, theta_h_rad, residual, iters
void write_trajectory(const Trajectory& traj, const std::string& path);

// Head-trajectory columns read back from a trajectory CSV.
struct TrajectoryFile {
    std::vector<double> t_s;
    std::vector<double> s_m;
    std::vector<double> theta_h_rad;
};
TrajectoryFile read_trajectory(const std::string& path);

struct SweepRow {
    int n = 0;
    double omega_T_rpm = 0.0;
    double v_mm_s = 0.0;
    double omega_h_rpm = 0.0;
    double omega_t_rpm = 0.0;
    double eta = 0.0;
    double newton_iters_mean = 0.0;
    double wall_time_s = 0.0;
    std::string status = "ok";
};

// Runs every (n, omega_T) pair of the config's sweep lists, concurrently up
// to the configured parallelism, and writes `<output_dir>/sweep.csv` with
// rows sorted by (n, omega_T). A failed run keeps its row, zero-valued, with
// the failure in the status column.
std::vector<SweepRow> run_sweep(const RunConfig& config);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace rodsim

#endif

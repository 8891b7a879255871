#ifndef RODSIM_CALIBRATE_HPP
#define RODSIM_CALIBRATE_HPP

#include <array>
#include <string>
#include <vector>

#include "rodsim/measure.hpp"
#include "rodsim/robot.hpp"

namespace rodsim {

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CalibrationRecord {
    int n = 2;
    double omega_T_rpm = 0.0;
    double v_mm_s = 0.0;
    double omega_h_rpm = 0.0;
    double weight = 1.0;
};

struct CalibrationDataset {
    std::vector<CalibrationRecord> records;
    std::string source;
};

// Delimited text, header `n, omega_T_rpm, v_mm_s, omega_h_rpm, weight`,
// `#` comments allowed.
CalibrationDataset load_dataset(const std::string& path);
void save_dataset(const CalibrationDataset& dataset, const std::string& path);

// How each objective evaluation runs its forward simulations.
struct CalibrationSetup {
    RobotSpec base_spec;       // n overridden per record
    SolverConfig solver;
    double duration = 200.0;   // s
    double transient_fraction = kTransientFraction;
    int parallelism = 0;       // 0 = hardware concurrency
};

struct DragParams {
    double C1 = 1.0;
    double C2 = 1.0;
    double mu = 1.0;
};

// Sum over records of weight * [ ((v_sim - v_obs)/v_obs)^2 +
// ((wh_sim - wh_obs)/wh_obs)^2 ]; a failed simulation contributes a large
// penalty. Records evaluate concurrently.
double objective(const DragParams& params, const CalibrationDataset& dataset,
                 const CalibrationSetup& setup);

struct FitOptions {
    DragParams initial{2.0, 0.05, 5.0};
    DragParams lower{0.1, 1e-3, 0.1};
    DragParams upper{20.0, 1.0, 100.0};
    int max_evaluations = 250;
    double param_tolerance = 1e-3;      // relative simplex spread
    double objective_tolerance = 1e-8;
};

struct FitLogEntry {
    int evaluation = 0;
    DragParams params;
    double objective = 0.0;
};

struct FittedParams {
    double C1 = 0.0;
    double C2 = 0.0;
    double mu = 0.0;
    double objective_value = 0.0;
    int evaluations = 0;
    bool converged = false;
    bool underdetermined = false;  // fewer residual terms than parameters
    std::vector<FitLogEntry> log;
};

// Derivative-free simplex minimization of the objective inside the bounds
// box. Returns best-so-far with converged=false when the evaluation budget
// runs out first.
FittedParams fit(const CalibrationDataset& dataset, const CalibrationSetup& setup,
                 const FitOptions& options);

struct ValidationEntry {
    CalibrationRecord record;
    double v_sim_mm_s = 0.0;
    double omega_h_sim_rpm = 0.0;
    double v_rel_error = 0.0;
    double omega_h_rel_error = 0.0;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;
    double mean_v_rel_error = 0.0;
    double max_v_rel_error = 0.0;
    double mean_omega_h_rel_error = 0.0;
    double max_omega_h_rel_error = 0.0;
};

// Forward-simulates every holdout record at the given parameters and reports
// per-record relative errors.
ValidationReport cross_validate(const DragParams& params, const CalibrationDataset& holdout,
                                const CalibrationSetup& setup);

inline constexpr double kRpmToRadPerSec = 2.0 * 3.14159265358979323846 / 60.0;
inline constexpr double kRadPerSecToRpm = 1.0 / kRpmToRadPerSec;

}  // namespace rodsim

#endif

#ifndef RODSIM_MEASURE_HPP
#define RODSIM_MEASURE_HPP

#include <span>
#include <stdexcept>

#include "rodsim/drag.hpp"
#include "rodsim/robot.hpp"

namespace rodsim {

struct MeasureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

LinearFit fit_line(std::span<const double> t, std::span<const double> y);

// Fraction of the trajectory discarded before fitting; the remaining part of
// the run is treated as steady.
inline constexpr double kTransientFraction = 0.2;
inline constexpr int kMinFitSamples = 50;

struct SpeedMeasurement {
    double v = 0.0;             // signed axial speed, m/s
    double fit_residual = 0.0;  // m
};

// Least-squares slope of the head node's axial position over the
// post-transient window.
SpeedMeasurement measure_speed(const Trajectory& traj, double transient_fraction = kTransientFraction);

// Mean rotation rate |d theta/dt| of one edge's twist angle over the
// post-transient window (rad/s).
double rotation_rate(const Trajectory& traj, int edge, double transient_fraction = kTransientFraction);

struct RotationMeasurement {
    double omega_h = 0.0;  // rad/s
    double omega_t = 0.0;  // rad/s
};

// omega_h from the head edge's twist history; omega_t as the remainder of
// the rotation budget |omega_T| = omega_h + omega_t.
RotationMeasurement measure_rotations(const Trajectory& traj, double omega_T,
                                      double transient_fraction = kTransientFraction);

// eta = 6 C1 |v| / (8 C2 a omega_h): propulsive force over propulsive
// torque, nondimensionalized by the head radius.
double efficiency(double v, double omega_h, const DragModel& drag);

struct Measurement {
    double v = 0.0;             // m/s, signed
    double omega_h = 0.0;       // rad/s
    double omega_t = 0.0;       // rad/s
    double omega_T = 0.0;       // rad/s
    double eta = 0.0;
    double fit_residual = 0.0;  // m
};

Measurement measure(const Trajectory& traj, double omega_T, const DragModel& drag,
                    double transient_fraction = kTransientFraction);

}  // namespace rodsim

#endif

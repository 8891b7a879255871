#ifndef RODSIM_ROBOT_HPP
#define RODSIM_ROBOT_HPP

#include <vector>

#include <Eigen/Core>

#include "rodsim/stepper.hpp"

namespace rodsim {

struct BuildError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Geometry and material of the n-tailed robot. Defaults are the physical
// robot: 40 mm head, 40 mm disc, 111 mm silicone tails of 3.2 mm radius.
struct RobotSpec {
    int n = 2;                            // tail count
    double head_radius = 0.02;            // a, m
    double disc_diameter = 0.04;          // L2, m
    double tail_length = 0.111;           // L3, m
    double tail_radius = 0.0032;          // r0, m
    double youngs_modulus = 1.2e6;        // E, N/m^2
    double poisson_ratio = 0.5;
    double density = 1000.0;              // kg/m^3
    double target_edge_length = 4.11e-3;  // m
    double head_mass = 0.035;             // kg, lumped at the head node
    double rigid_multiplier = 1e4;
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();  // front direction
};

struct BuiltRobot {
    RodNetwork network;
    NaturalStrains natural;
    StiffnessSet stiffness;
    MassModel mass;
    State initial_state;
    Eigen::Vector3d axis;
    int head_spring_index = -1;  // bend/twist spring at the head node (the motor)
    int disc_edge_index = -1;    // edge between head node and joint node
    int edges_per_tail = 0;
    double tail_edge_length = 0.0;
};

// Stick-figure robot: head node x_h flanked by the front node x_0 and the
// joint x_a on the axis (rigid), n rigid spokes of length L2/2 radiating
// from x_a, and a flexible tail running axially backward from each spoke
// tip, discretized at the target edge length.
BuiltRobot build_robot(const RobotSpec& spec);

struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time series of the DOF vector plus per-step solver statistics.
struct Trajectory {
    double dt = 0.0;
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
    int head_node = -1;
    int head_edge = -1;
    int disc_edge = -1;
    int node_count = 0;

    std::vector<double> time;
    std::vector<Eigen::VectorXd> q;
    std::vector<double> residual;
    std::vector<int> iterations;

    size_t size() const { return time.size(); }
    Eigen::Vector3d head_position(size_t i) const { return q[i].segment<3>(3 * head_node); }
    // axial position relative to the start
    double axial_position(size_t i) const { return (head_position(i) - head_position(0)).dot(axis); }
    double twist_angle(size_t i, int edge) const { return q[i][3 * node_count + edge]; }
    double theta_head(size_t i) const { return twist_angle(i, head_edge); }
};

// Runs the robot for `duration` seconds at motor speed omega_T (rad/s),
// recording every step. A step that fails to converge is retried once as two
// half steps before the simulation is abandoned.
Trajectory simulate(const BuiltRobot& robot, const DragModel& drag, double omega_T, double duration,
                    const SolverConfig& config);

}  // namespace rodsim

#endif

#include "rodsim/robot.hpp"

#include <cmath>
#include <sstream>

namespace rodsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

BuiltRobot build_robot(const RobotSpec& spec) {
    if (spec.n < 1) throw BuildError("robot requires at least one tail");
    if (!(spec.head_radius > 0 && spec.disc_diameter > 0 && spec.tail_length > 0 &&
          spec.tail_radius > 0 && spec.target_edge_length > 0))
        throw BuildError("robot geometry must be positive");
    if (!(spec.youngs_modulus > 0 && spec.density > 0))
        throw BuildError("robot material parameters must be positive");
    if (!(spec.poisson_ratio > -1.0 && spec.poisson_ratio <= 0.5))
        throw BuildError("poisson ratio outside (-1, 0.5]");

    // Build in a canonical frame with the axis along +z, then rotate the
    // finished state onto the requested axis. Frames rotate with it, so
    // rebuilding along a different axis is exactly the rotated simulation.
    const Eigen::Vector3d axis = spec.axis.normalized();
    const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();

    const double a = spec.head_radius;
    const int edges_per_tail =
        std::max(1, static_cast<int>(std::lround(spec.tail_length / spec.target_edge_length)));
    const double ell = spec.tail_length / edges_per_tail;

    // nodes 0..2 on the axis: x_0 front, x_h head, x_a joint
    std::vector<Eigen::Vector3d> positions;
    positions.push_back(Eigen::Vector3d::Zero());
    positions.push_back(-a * z);
    positions.push_back(-2.0 * a * z);

    std::vector<std::array<int, 2>> edges;
    std::vector<bool> rigid;
    edges.push_back({0, 1});  // head edge, carries theta_h
    edges.push_back({1, 2});
    rigid.push_back(true);
    rigid.push_back(true);

    for (int tail = 0; tail < spec.n; ++tail) {
        const double phi = 2.0 * kPi * tail / spec.n;
        const Eigen::Vector3d radial(std::cos(phi), std::sin(phi), 0.0);
        const int tip = static_cast<int>(positions.size());
        positions.push_back(positions[2] + 0.5 * spec.disc_diameter * radial);
        edges.push_back({2, tip});
        rigid.push_back(true);
        int prev = tip;
        for (int k = 1; k <= edges_per_tail; ++k) {
            const int node = static_cast<int>(positions.size());
            positions.push_back(positions[tip] - k * ell * z);
            edges.push_back({prev, node});
            rigid.push_back(false);
            prev = node;
        }
    }

    std::vector<double> lengths(edges.size());
    for (size_t e = 0; e < edges.size(); ++e)
        lengths[e] = (positions[edges[e][1]] - positions[edges[e][0]]).norm();

    BuiltRobot robot;
    robot.network = make_network(static_cast<int>(positions.size()), std::move(edges),
                                 std::move(lengths), std::move(rigid),
                                 /*head_edge_index=*/0, /*head_node_index=*/1,
                                 /*spring_root_node=*/0);
    robot.initial_state = make_initial_state(robot.network, positions);

    if ((axis - z).norm() > 0.0) {
        const Eigen::Quaterniond rot = Eigen::Quaterniond::FromTwoVectors(z, axis);
        for (int i = 0; i < robot.network.node_count; ++i)
            robot.initial_state.q.segment<3>(robot.network.position_slot(i)) =
                rot * robot.initial_state.q.segment<3>(robot.network.position_slot(i));
        for (auto& f : robot.initial_state.ref_frames) {
            f.d1 = rot * f.d1;
            f.d2 = rot * f.d2;
            f.t = rot * f.t;
        }
    }
    robot.natural = natural_strains_from_configuration(robot.network, robot.initial_state.q,
                                                       robot.initial_state.ref_frames);
    robot.stiffness = make_stiffness(robot.network, spec.youngs_modulus, spec.poisson_ratio,
                                     spec.tail_radius, spec.rigid_multiplier);
    robot.mass = make_mass_model(robot.network, spec.density, spec.tail_radius, spec.head_mass);
    robot.axis = axis;
    robot.disc_edge_index = 1;
    robot.edges_per_tail = edges_per_tail;
    robot.tail_edge_length = ell;
    for (size_t i = 0; i < robot.network.bendtwist_springs.size(); ++i) {
        if (robot.network.bendtwist_springs[i].center_node == robot.network.head_node_index) {
            robot.head_spring_index = static_cast<int>(i);
            break;
        }
    }
    if (robot.head_spring_index < 0) throw BuildError("head spring not found");
    return robot;
}

Trajectory simulate(const BuiltRobot& robot, const DragModel& drag, double omega_T, double duration,
                    const SolverConfig& config) {
    DynamicsModel model{robot.network, robot.natural, robot.stiffness, robot.mass, drag};
    TimeStepper stepper(std::move(model), config);
    stepper.set_actuation(robot.head_spring_index, robot.natural.natural_twists[robot.head_spring_index],
                          omega_T);

    const long steps = std::lround(duration / config.dt);
    State state = robot.initial_state;

    Trajectory traj;
    traj.dt = config.dt;
    traj.axis = robot.axis;
    traj.head_node = robot.network.head_node_index;
    traj.head_edge = robot.network.head_edge_index;
    traj.disc_edge = robot.disc_edge_index;
    traj.node_count = robot.network.node_count;
    traj.time.reserve(steps + 1);
    traj.q.reserve(steps + 1);
    traj.residual.reserve(steps + 1);
    traj.iterations.reserve(steps + 1);

    traj.time.push_back(0.0);
    traj.q.push_back(state.q);
    traj.residual.push_back(0.0);
    traj.iterations.push_back(0);

    for (long k = 0; k < steps; ++k) {
        StepStats stats;
        try {
            stats = stepper.step(state);
        } catch (const StepFailure& first) {
            // one retry as two half steps
            try {
                stats = stepper.step_with_dt(state, 0.5 * config.dt);
                const StepStats second = stepper.step_with_dt(state, 0.5 * config.dt);
                stats.iterations += second.iterations;
                stats.residual = second.residual;
                stats.halved_dt = true;
            } catch (const StepFailure& retry) {
                std::ostringstream msg;
                msg << "step failed at t = " << first.time << " s (" << first.what()
                    << "); retry with halved dt failed as well (" << retry.what() << ")";
                throw SimulationError(msg.str());
            }
        }
        traj.time.push_back(state.time);
        traj.q.push_back(state.q);
        traj.residual.push_back(stats.residual);
        traj.iterations.push_back(stats.iterations);
    }
    return traj;
}

}  // namespace rodsim

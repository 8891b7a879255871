#ifndef RODSIM_DRAG_HPP
#define RODSIM_DRAG_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "rodsim/network.hpp"

namespace rodsim {

struct InvalidGeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Drag parameters of the medium and the head. eta_t / eta_p are the
// resistive-force-theory coefficients along and across the tail centerline;
// C1 and C2 correct the Stokes head drag and torque for the nonspherical
// head shape.
struct DragModel {
    double mu = 0.0;     // dynamic viscosity, Pa s
    double eta_t = 0.0;  // Pa s
    double eta_p = 0.0;  // Pa s
    double C1 = 1.0;
    double C2 = 1.0;
    double a = 0.0;      // head radius, m
    double L = 0.0;      // tail length, m
    double r0 = 0.0;     // tail radius, m
};

// eta_t = 2 pi mu / (ln(2L/r0) - 1/2), eta_p = 4 pi mu / (ln(2L/r0) + 1/2).
// Requires ln(2L/r0) > 1/2 (slender tail).
std::pair<double, double> drag_coefficients(double mu, double L, double r0);

DragModel make_drag_model(double mu, double C1, double C2, double head_radius, double tail_length,
                          double tail_radius);

// F = -eta_t (v.t)t dl - eta_p [v - (v.t)t] dl
Eigen::Vector3d tail_node_force(const Eigen::Vector3d& velocity, const Eigen::Vector3d& tangent,
                                double voronoi_length, const DragModel& drag);

// F_h = -6 pi C1 mu a v_h
Eigen::Vector3d head_force(const Eigen::Vector3d& head_velocity, const DragModel& drag);

// T_h = -8 pi C2 mu a^3 omega_h
double head_torque(double omega_h, const DragModel& drag);

// Which nodes carry distributed drag and with what weights. Drag acts on
// nodes with at least one flexible adjacent edge, through those flexible
// edges only; the rigid head assembly is covered by the lumped head force
// and torque instead.
struct DragPlan {
    struct NodeEntry {
        int node = -1;
        double voronoi = 0.0;  // m
        int edge_a = -1;
        int edge_b = -1;  // -1 at the tail root and tip
    };
    std::vector<NodeEntry> nodes;
};
DragPlan make_drag_plan(const RodNetwork& network);

// Assembles drag forces on all tail nodes plus the head force and torque,
// with velocities evaluated implicitly as (q_new - q_old)/dt. When
// `jacobian_triplets` is given it receives J_ext = -d f_ext / d q_new.
void add_external_forces(const RodNetwork& network, const DragPlan& plan, const DragModel& drag,
                         const Eigen::VectorXd& q_new, const Eigen::VectorXd& q_old, double dt,
                         Eigen::VectorXd& f_ext, std::vector<Eigen::Triplet<double>>* jacobian_triplets);

std::pair<Eigen::VectorXd, Eigen::SparseMatrix<double>> external_force_and_jacobian(
    const Eigen::VectorXd& q_new, const Eigen::VectorXd& q_old, double dt, const RodNetwork& network,
    const DragModel& drag);

}  // namespace rodsim

#endif

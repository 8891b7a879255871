#include "rodsim/drag.hpp"

#include <cmath>

namespace rodsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::pair<double, double> drag_coefficients(double mu, double L, double r0) {
    if (!(L > 0.0 && r0 > 0.0)) throw InvalidGeometryError("drag_coefficients: requires L > 0, r0 > 0");
    const double log_slender = std::log(2.0 * L / r0);
    if (!(log_slender > 0.5))
        throw InvalidGeometryError("drag_coefficients: slenderness assumption ln(2L/r0) > 1/2 violated");
    const double eta_t = 2.0 * kPi * mu / (log_slender - 0.5);
    const double eta_p = 4.0 * kPi * mu / (log_slender + 0.5);
    return {eta_t, eta_p};
}

DragModel make_drag_model(double mu, double C1, double C2, double head_radius, double tail_length,
                          double tail_radius) {
    DragModel d;
    d.mu = mu;
    d.C1 = C1;
    d.C2 = C2;
    d.a = head_radius;
    d.L = tail_length;
    d.r0 = tail_radius;
    std::tie(d.eta_t, d.eta_p) = drag_coefficients(mu, tail_length, tail_radius);
    return d;
}

Eigen::Vector3d tail_node_force(const Eigen::Vector3d& velocity, const Eigen::Vector3d& tangent,
                                double voronoi_length, const DragModel& drag) {
    const double vt = velocity.dot(tangent);
    const Eigen::Vector3d v_par = vt * tangent;
    const Eigen::Vector3d v_perp = velocity - v_par;
    return -(drag.eta_t * v_par + drag.eta_p * v_perp) * voronoi_length;
}

Eigen::Vector3d head_force(const Eigen::Vector3d& head_velocity, const DragModel& drag) {
    return -6.0 * kPi * drag.C1 * drag.mu * drag.a * head_velocity;
}

double head_torque(double omega_h, const DragModel& drag) {
    return -8.0 * kPi * drag.C2 * drag.mu * drag.a * drag.a * drag.a * omega_h;
}

DragPlan make_drag_plan(const RodNetwork& network) {
    DragPlan plan;
    const auto adjacency = network.node_edge_adjacency();
    for (int node = 0; node < network.node_count; ++node) {
        DragPlan::NodeEntry entry;
        entry.node = node;
        for (int e : adjacency[node]) {
            if (network.rigid_edge_flags[e]) continue;
            if (entry.edge_a < 0)
                entry.edge_a = e;
            else if (entry.edge_b < 0)
                entry.edge_b = e;
            else
                throw NetworkError("drag plan: node has more than two flexible edges");
            entry.voronoi += 0.5 * network.undeformed_edge_lengths[e];
        }
        if (entry.edge_a >= 0) plan.nodes.push_back(entry);
    }
    return plan;
}

void add_external_forces(const RodNetwork& network, const DragPlan& plan, const DragModel& drag,
                         const Eigen::VectorXd& q_new, const Eigen::VectorXd& q_old, double dt,
                         Eigen::VectorXd& f_ext, std::vector<Eigen::Triplet<double>>* jacobian_triplets) {
    const double s = drag.eta_t - drag.eta_p;
    const Eigen::Matrix3d identity = Eigen::Matrix3d::Identity();

    for (const auto& entry : plan.nodes) {
        const int slot = network.position_slot(entry.node);
        const Eigen::Vector3d v = (q_new.segment<3>(slot) - q_old.segment<3>(slot)) / dt;

        // averaged unit tangent over the node's flexible edges
        Eigen::Vector3d ea = network.edge_vector(q_new, entry.edge_a);
        const double la = ea.norm();
        Eigen::Vector3d u = ea / la;
        double lb = 0.0;
        Eigen::Vector3d tb = Eigen::Vector3d::Zero();
        if (entry.edge_b >= 0) {
            const Eigen::Vector3d eb = network.edge_vector(q_new, entry.edge_b);
            lb = eb.norm();
            tb = eb / lb;
            u += tb;
        }
        const double un = u.norm();
        const Eigen::Vector3d t_hat = u / un;

        const double vt = v.dot(t_hat);
        f_ext.segment<3>(slot) +=
            -entry.voronoi * (drag.eta_p * v + s * vt * t_hat);

        if (jacobian_triplets) {
            const Eigen::Matrix3d proj = t_hat * t_hat.transpose();
            // velocity dependence: dF/dx through v = (x_new - x_old)/dt
            const Eigen::Matrix3d dF_dv =
                -(entry.voronoi / dt) * (drag.eta_p * identity + s * proj);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    jacobian_triplets->emplace_back(slot + r, slot + c, -dF_dv(r, c));

            // tangent dependence: dF/dt_hat through the edge directions
            const Eigen::Matrix3d dF_dth =
                -entry.voronoi * s * (vt * identity + t_hat * v.transpose());
            const Eigen::Matrix3d dth_du = (identity - proj) / un;
            auto scatter_edge = [&](int edge, const Eigen::Vector3d& t_edge, double len) {
                const Eigen::Matrix3d m =
                    dF_dth * dth_du * (identity - t_edge * t_edge.transpose()) / len;
                const int from = network.position_slot(network.edges[edge][0]);
                const int to = network.position_slot(network.edges[edge][1]);
                for (int r = 0; r < 3; ++r) {
                    for (int c = 0; c < 3; ++c) {
                        jacobian_triplets->emplace_back(slot + r, to + c, -m(r, c));
                        jacobian_triplets->emplace_back(slot + r, from + c, m(r, c));
                    }
                }
            };
            scatter_edge(entry.edge_a, ea / la, la);
            if (entry.edge_b >= 0) scatter_edge(entry.edge_b, tb, lb);
        }
    }

    if (network.head_node_index >= 0) {
        const int slot = network.position_slot(network.head_node_index);
        const Eigen::Vector3d v_h = (q_new.segment<3>(slot) - q_old.segment<3>(slot)) / dt;
        f_ext.segment<3>(slot) += head_force(v_h, drag);
        const int tw = network.twist_slot(network.head_edge_index);
        const double omega_h = (q_new[tw] - q_old[tw]) / dt;
        f_ext[tw] += head_torque(omega_h, drag);
        if (jacobian_triplets) {
            const double kf = 6.0 * kPi * drag.C1 * drag.mu * drag.a / dt;
            for (int r = 0; r < 3; ++r) jacobian_triplets->emplace_back(slot + r, slot + r, kf);
            const double kt = 8.0 * kPi * drag.C2 * drag.mu * drag.a * drag.a * drag.a / dt;
            jacobian_triplets->emplace_back(tw, tw, kt);
        }
    }
}

std::pair<Eigen::VectorXd, Eigen::SparseMatrix<double>> external_force_and_jacobian(
    const Eigen::VectorXd& q_new, const Eigen::VectorXd& q_old, double dt, const RodNetwork& network,
    const DragModel& drag) {
    const DragPlan plan = make_drag_plan(network);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(network.ndof());
    std::vector<Eigen::Triplet<double>> triplets;
    add_external_forces(network, plan, drag, q_new, q_old, dt, f, &triplets);
    Eigen::SparseMatrix<double> jac(network.ndof(), network.ndof());
    jac.setFromTriplets(triplets.begin(), triplets.end());
    return {std::move(f), std::move(jac)};
}

}  // namespace rodsim

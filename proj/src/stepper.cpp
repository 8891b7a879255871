#include "rodsim/stepper.hpp"

#include <cmath>
#include <sstream>

namespace rodsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSolveContract = 1e-10;   // sparse_solve relative residual
constexpr double kSolveUsable = 1e-6;      // worst residual Newton will accept
}  // namespace

double default_newton_tolerance(double youngs_modulus, double tail_radius) {
    const double ea = youngs_modulus * kPi * tail_radius * tail_radius;
    return 1e-6 * (ea * 1e-3);
}

MassModel make_mass_model(const RodNetwork& network, double density, double radius, double head_mass) {
    MassModel m;
    m.density = density;
    m.head_mass = head_mass;
    m.lumped = Eigen::VectorXd::Zero(network.ndof());
    const double area = kPi * radius * radius;
    for (int e = 0; e < network.edge_count; ++e) {
        const double edge_mass = density * area * network.undeformed_edge_lengths[e];
        for (int end = 0; end < 2; ++end) {
            const int slot = network.position_slot(network.edges[e][end]);
            m.lumped.segment<3>(slot).array() += 0.5 * edge_mass;
        }
        m.lumped[network.twist_slot(e)] = 0.5 * edge_mass * radius * radius;
    }
    if (network.head_node_index >= 0)
        m.lumped.segment<3>(network.position_slot(network.head_node_index)).array() += head_mass;
    return m;
}

Eigen::VectorXd dynamics_residual(const DynamicsModel& model, const Eigen::VectorXd& q_new,
                                  const Eigen::VectorXd& q_old, const Eigen::VectorXd& qdot_old,
                                  double dt, const FrameSet& frames,
                                  const std::vector<double>* ref_twist_guide) {
    Eigen::VectorXd f =
        (model.mass.lumped.array() / dt * ((q_new - q_old).array() / dt - qdot_old.array())).matrix();
    add_energy_gradient(q_new, model.network, model.natural, model.stiffness, frames, f,
                        ref_twist_guide);
    if (model.drag) {
        Eigen::VectorXd f_ext = Eigen::VectorXd::Zero(model.network.ndof());
        const DragPlan plan = make_drag_plan(model.network);
        add_external_forces(model.network, plan, *model.drag, q_new, q_old, dt, f_ext, nullptr);
        f -= f_ext;
    }
    return f;
}

Eigen::SparseMatrix<double> dynamics_jacobian(const DynamicsModel& model, const Eigen::VectorXd& q_new,
                                              const Eigen::VectorXd& q_old, double dt,
                                              const FrameSet& frames,
                                              const std::vector<double>* ref_twist_guide) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<size_t>(model.network.ndof()) +
                     36 * model.network.stretch_springs.size() +
                     121 * model.network.bendtwist_springs.size());
    for (int i = 0; i < model.network.ndof(); ++i)
        triplets.emplace_back(i, i, model.mass.lumped[i] / (dt * dt));
    add_energy_hessian(q_new, model.network, model.natural, model.stiffness, frames, triplets,
                       ref_twist_guide);
    if (model.drag) {
        Eigen::VectorXd unused = Eigen::VectorXd::Zero(model.network.ndof());
        const DragPlan plan = make_drag_plan(model.network);
        add_external_forces(model.network, plan, *model.drag, q_new, q_old, dt, unused, &triplets);
    }
    Eigen::SparseMatrix<double> jac(model.network.ndof(), model.network.ndof());
    jac.setFromTriplets(triplets.begin(), triplets.end());
    return jac;
}

SparseSolveResult SparseLinearSolver::solve(const Eigen::SparseMatrix<double>& jacobian,
                                            const Eigen::VectorXd& rhs) {
    if (!analyzed_) {
        lu_.analyzePattern(jacobian);
        analyzed_ = true;
    }
    lu_.factorize(jacobian);
    if (lu_.info() != Eigen::Success) {
        // the pattern may have changed between calls; try a full recompute
        lu_.analyzePattern(jacobian);
        lu_.factorize(jacobian);
        if (lu_.info() != Eigen::Success)
            throw SolverFailure("sparse factorization failed: Jacobian is singular or ill-conditioned "
                                "(log|det| = " + std::to_string(lu_.logAbsDeterminant()) + ")");
    }

    SparseSolveResult res;
    res.dq = lu_.solve(rhs);
    const double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) {
        res.dq.setZero();
        res.rel_residual = 0.0;
        return res;
    }
    res.rel_residual = (jacobian * res.dq - rhs).norm() / rhs_norm;
    while (res.rel_residual > kSolveContract && res.refinements < 3) {
        const Eigen::VectorXd r = rhs - jacobian * res.dq;
        res.dq += lu_.solve(r);
        res.rel_residual = (jacobian * res.dq - rhs).norm() / rhs_norm;
        ++res.refinements;
    }
    return res;
}

TimeStepper::TimeStepper(DynamicsModel model, SolverConfig config)
    : model_(std::move(model)), config_(config) {
    if (model_.drag) drag_plan_ = make_drag_plan(model_.network);
    triplets_.reserve(static_cast<size_t>(model_.network.ndof()) +
                      36 * model_.network.stretch_springs.size() +
                      121 * model_.network.bendtwist_springs.size() + 128);
}

void TimeStepper::set_actuation(int spring_index, double base_twist, double rate) {
    actuated_spring_ = spring_index;
    actuation_base_ = base_twist;
    actuation_rate_ = rate;
    model_.natural.head_natural_twist_rate = rate;
}

StepStats TimeStepper::step_with_dt(State& state, double dt) {
    const RodNetwork& net = model_.network;
    const int ndof = net.ndof();
    const double t_new = state.time + dt;
    if (actuated_spring_ >= 0)
        model_.natural.natural_twists[actuated_spring_] = actuation_base_ + actuation_rate_ * t_new;

    const Eigen::VectorXd q_old = state.q;
    const Eigen::VectorXd qdot_old = state.q_dot;
    Eigen::VectorXd q = q_old;
    Eigen::VectorXd f(ndof);
    FrameSet frames;

    // The stored continuous reference twist anchors the 2 pi branch of every
    // spring for the whole step.
    if (state.ref_twist.size() != net.bendtwist_springs.size()) {
        state.ref_twist.resize(net.bendtwist_springs.size());
        for (size_t i = 0; i < net.bendtwist_springs.size(); ++i)
            state.ref_twist[i] =
                compute_reference_twist(net, state.ref_frames, net.bendtwist_springs[i]);
    }
    const std::vector<double>& guide = state.ref_twist;

    StepStats stats;
    bool converged = false;
    for (int iter = 1; iter <= config_.max_newton_iterations; ++iter) {
        stats.iterations = iter;
        frames = time_update_frames(net, state.ref_frames, q);

        f = (model_.mass.lumped.array() / dt * ((q - q_old).array() / dt - qdot_old.array())).matrix();
        add_energy_gradient(q, net, model_.natural, model_.stiffness, frames, f, &guide);
        if (model_.drag) {
            Eigen::VectorXd f_ext = Eigen::VectorXd::Zero(ndof);
            add_external_forces(net, drag_plan_, *model_.drag, q, q_old, dt, f_ext, nullptr);
            f -= f_ext;
        }
        stats.residual = f.lpNorm<1>();
        if (stats.residual < config_.newton_tolerance) {
            converged = true;
            break;
        }

        triplets_.clear();
        for (int i = 0; i < ndof; ++i) triplets_.emplace_back(i, i, model_.mass.lumped[i] / (dt * dt));
        add_energy_hessian(q, net, model_.natural, model_.stiffness, frames, triplets_, &guide);
        if (model_.drag) {
            Eigen::VectorXd unused = Eigen::VectorXd::Zero(ndof);
            add_external_forces(net, drag_plan_, *model_.drag, q, q_old, dt, unused, &triplets_);
        }
        Eigen::SparseMatrix<double> jac(ndof, ndof);
        jac.setFromTriplets(triplets_.begin(), triplets_.end());

        const SparseSolveResult sol = solver_.solve(jac, f);
        if (sol.rel_residual > kSolveUsable) {
            std::ostringstream msg;
            msg << "linear solve too inaccurate (relative residual " << sol.rel_residual << ")";
            throw StepFailure(msg.str(), stats.residual, t_new);
        }
        q -= sol.dq;
    }

    if (!converged) {
        std::ostringstream msg;
        msg << "Newton did not converge in " << config_.max_newton_iterations
            << " iterations (|f|_1 = " << stats.residual << ", tol = " << config_.newton_tolerance << ")";
        throw StepFailure(msg.str(), stats.residual, t_new);
    }

    state.q_dot = (q - q_old) / dt;
    state.q = std::move(q);
    state.ref_twist = continuous_reference_twists(net, frames, guide);
    state.ref_frames = std::move(frames);
    state.time = t_new;
    return stats;
}

}  // namespace rodsim

#ifndef RODSIM_STEPPER_HPP
#define RODSIM_STEPPER_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "rodsim/drag.hpp"
#include "rodsim/elastic.hpp"
#include "rodsim/network.hpp"

namespace rodsim {

struct SolverConfig {
    double dt = 1e-2;                   // s
    double newton_tolerance = 3.86e-8;  // N, 1-norm of the force residual
    int max_newton_iterations = 50;
    double rigid_multiplier = 1e4;
};

// 1e-6 times a characteristic force of one thousandth of the tail EA.
double default_newton_tolerance(double youngs_modulus, double tail_radius);

// Lumped masses: kg on position slots (rho A times the half-sum of adjacent
// rest edge lengths), kg m^2 on twist slots (rho A l r0^2 / 2). The head
// node additionally carries the robot mass.
struct MassModel {
    Eigen::VectorXd lumped;
    double density = 0.0;   // kg/m^3
    double head_mass = 0.0; // kg
};

MassModel make_mass_model(const RodNetwork& network, double density, double radius, double head_mass);

// Everything the equations of motion need.
struct DynamicsModel {
    RodNetwork network;
    NaturalStrains natural;
    StiffnessSet stiffness;
    MassModel mass;
    std::optional<DragModel> drag;
};

// f_i = m_i/dt [ (q_new_i - q_old_i)/dt - qdot_old_i ] + dE/dq_i - f_ext_i,
// with frames adapted to q_new.
Eigen::VectorXd dynamics_residual(const DynamicsModel& model, const Eigen::VectorXd& q_new,
                                  const Eigen::VectorXd& q_old, const Eigen::VectorXd& qdot_old,
                                  double dt, const FrameSet& frames,
                                  const std::vector<double>* ref_twist_guide = nullptr);

// J = diag(m/dt^2) + d2E/dq2 - d f_ext/d q. Not banded: the joint node
// couples the head-side edge to every spoke.
Eigen::SparseMatrix<double> dynamics_jacobian(const DynamicsModel& model, const Eigen::VectorXd& q_new,
                                              const Eigen::VectorXd& q_old, double dt,
                                              const FrameSet& frames,
                                              const std::vector<double>* ref_twist_guide = nullptr);

struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepFailure : std::runtime_error {
    StepFailure(const std::string& msg, double residual_1norm, double at_time)
        : std::runtime_error(msg), residual(residual_1norm), time(at_time) {}
    double residual;
    double time;
};

struct SparseSolveResult {
    Eigen::VectorXd dq;
    double rel_residual = 0.0;
    int refinements = 0;
};

// Sparse LU with pattern reuse and iterative refinement; solves J dq = f to
// a relative residual below 1e-10 (refining up to three times) and reports
// the achieved residual.
class SparseLinearSolver {
  public:
    SparseSolveResult solve(const Eigen::SparseMatrix<double>& jacobian, const Eigen::VectorXd& rhs);

  private:
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    bool analyzed_ = false;
};

struct StepStats {
    int iterations = 0;
    double residual = 0.0;
    bool halved_dt = false;
};

// Backward-Euler step with Newton-Raphson iterations. Reference frames are
// recomputed from the stored frames of the previous step at every iterate.
class TimeStepper {
  public:
    TimeStepper(DynamicsModel model, SolverConfig config);

    // Motor actuation: the spring's natural twist follows
    // base_twist + rate * t evaluated at the end of the step being solved.
    void set_actuation(int spring_index, double base_twist, double rate);

    StepStats step(State& state) { return step_with_dt(state, config_.dt); }
    StepStats step_with_dt(State& state, double dt);

    const DynamicsModel& model() const { return model_; }
    const SolverConfig& config() const { return config_; }

  private:
    DynamicsModel model_;
    SolverConfig config_;
    DragPlan drag_plan_;
    SparseLinearSolver solver_;
    std::vector<Eigen::Triplet<double>> triplets_;
    int actuated_spring_ = -1;
    double actuation_base_ = 0.0;
    double actuation_rate_ = 0.0;
};

}  // namespace rodsim

#endif

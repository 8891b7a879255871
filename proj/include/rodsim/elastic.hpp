#ifndef RODSIM_ELASTIC_HPP
#define RODSIM_ELASTIC_HPP

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "rodsim/network.hpp"

namespace rodsim {

// Rest-state strain measures. All entries are constant during a simulation
// except the natural twist of the spring at the head node, which the motor
// actuation advances at head_natural_twist_rate.
struct NaturalStrains {
    std::vector<double> stretch_ref_lengths;    // per edge, m
    std::vector<double> natural_curvature_1;    // per bendtwist spring
    std::vector<double> natural_curvature_2;    // per bendtwist spring
    std::vector<double> natural_twists;         // per bendtwist spring, rad
    double head_natural_twist_rate = 0.0;       // rad/s
};

struct StiffnessSet {
    std::vector<double> EA;  // per edge, N
    std::vector<double> EI;  // per bendtwist spring, N m^2
    std::vector<double> GJ;  // per bendtwist spring, N m^2
    double rigid_multiplier = 1e4;
};

// Flexible-rod stiffnesses from the circular cross-section, scaled by
// rigid_multiplier on rigid edges and on springs touching a rigid edge.
// Shear modulus from G = E / (2 (1 + nu)).
StiffnessSet make_stiffness(const RodNetwork& network, double youngs_modulus, double poisson_ratio,
                            double radius, double rigid_multiplier);

// Strain snapshot of one bend/twist spring in the local (flip-adjusted)
// representation. `frames` acts as the transport anchor: frames are carried
// onto the tangents implied by q before strains are measured, so callers may
// probe configurations near the one the frames belong to. When a reference
// twist guide is given, the measured reference twist takes the 2 pi branch
// nearest to it; otherwise the principal value in (-pi, pi] is used.
struct SpringStrains {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double tau = 0.0;
    double dm_ref = 0.0;
};
SpringStrains spring_strains(const RodNetwork& network, const Eigen::VectorXd& q, const FrameSet& frames,
                             int spring_index, const double* ref_twist_guide = nullptr);

// Rest strains chosen so the configuration q has zero elastic energy.
NaturalStrains natural_strains_from_configuration(const RodNetwork& network, const Eigen::VectorXd& q,
                                                  const FrameSet& frames);

// Total elastic energy: stretching over edges plus bending and twisting over
// bend/twist springs (joules). Frame-anchor semantics as in spring_strains;
// `ref_twist_guide`, when given, supplies one branch target per spring.
double total_energy(const Eigen::VectorXd& q, const RodNetwork& network, const NaturalStrains& natural,
                    const StiffnessSet& stiffness, const FrameSet& frames,
                    const std::vector<double>* ref_twist_guide = nullptr);

// Accumulates dE/dq. Stretching touches 6 DOFs per edge, bending/twisting 11
// DOFs per spring.
void add_energy_gradient(const Eigen::VectorXd& q, const RodNetwork& network,
                         const NaturalStrains& natural, const StiffnessSet& stiffness,
                         const FrameSet& frames, Eigen::VectorXd& grad,
                         const std::vector<double>* ref_twist_guide = nullptr);

// Accumulates d2E/dq2 as triplets (exact, including the transport terms that
// couple frame motion to positions).
void add_energy_hessian(const Eigen::VectorXd& q, const RodNetwork& network,
                        const NaturalStrains& natural, const StiffnessSet& stiffness,
                        const FrameSet& frames, std::vector<Eigen::Triplet<double>>& triplets,
                        const std::vector<double>* ref_twist_guide = nullptr);

Eigen::VectorXd energy_gradient(const Eigen::VectorXd& q, const RodNetwork& network,
                                const NaturalStrains& natural, const StiffnessSet& stiffness,
                                const FrameSet& frames,
                                const std::vector<double>* ref_twist_guide = nullptr);

Eigen::SparseMatrix<double> energy_hessian(const Eigen::VectorXd& q, const RodNetwork& network,
                                           const NaturalStrains& natural, const StiffnessSet& stiffness,
                                           const FrameSet& frames,
                                           const std::vector<double>* ref_twist_guide = nullptr);

// Continuous reference twist of every spring at the given configuration:
// the principal value snapped to the 2 pi branch nearest its guide.
std::vector<double> continuous_reference_twists(const RodNetwork& network, const FrameSet& frames,
                                                const std::vector<double>& guide);

}  // namespace rodsim

#endif

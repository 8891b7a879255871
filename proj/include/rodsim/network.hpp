#ifndef RODSIM_NETWORK_HPP
#define RODSIM_NETWORK_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "rodsim/frames.hpp"

namespace rodsim {

struct NetworkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Discrete bending+twisting spring across one interior node. The local
// in-edge/out-edge convention runs tip-to-tail through the center node; an
// edge stored with the opposite orientation carries a flip flag, meaning the
// spring evaluates it with local frame {-d1, d2, -t} and local twist -theta.
struct BendTwistSpring {
    int edge_in = -1;
    int edge_out = -1;
    int center_node = -1;
    bool flip_in = false;
    bool flip_out = false;
    // far endpoints, resolved from the edge list at construction
    int node_in = -1;
    int node_out = -1;
};

// Immutable topology of a tree-shaped rod network plus the per-entity rest
// quantities that never change during a simulation. DOF layout follows the
// paper's ordering: 3 position slots per node first, then one twist slot per
// edge.
struct RodNetwork {
    int node_count = 0;
    int edge_count = 0;
    std::vector<std::array<int, 2>> edges;
    std::vector<int> stretch_springs;                // edge indices
    std::vector<BendTwistSpring> bendtwist_springs;
    std::vector<bool> rigid_edge_flags;              // per edge
    std::vector<double> undeformed_edge_lengths;     // per edge, meters
    std::vector<double> voronoi_lengths;             // per bendtwist spring, meters
    int head_edge_index = -1;
    int head_node_index = -1;

    int ndof() const { return 3 * node_count + edge_count; }
    int position_slot(int node, int axis = 0) const { return 3 * node + axis; }
    int twist_slot(int edge) const { return 3 * node_count + edge; }

    Eigen::Vector3d node_position(const Eigen::VectorXd& q, int node) const {
        return q.segment<3>(position_slot(node));
    }
    Eigen::Vector3d edge_vector(const Eigen::VectorXd& q, int edge) const {
        return node_position(q, edges[edge][1]) - node_position(q, edges[edge][0]);
    }
    double twist_angle(const Eigen::VectorXd& q, int edge) const { return q[twist_slot(edge)]; }

    std::vector<std::vector<int>> node_edge_adjacency() const;
};

// Resolves flip flags and far endpoints of a bend/twist spring so that the
// local tangents run in-to-out through the center node.
BendTwistSpring make_bendtwist_spring(const std::vector<std::array<int, 2>>& edges, int edge_in,
                                      int edge_out, int center_node);

// Enumerates the bend/twist springs of a tree: every degree-2 node carries
// one spring; a joint node carries one spring per child edge, each pairing
// the edge toward the root with that child. Rooting at the head node makes
// the joint pair the head-side edge with each spoke.
std::vector<BendTwistSpring> build_bendtwist_springs(const std::vector<std::array<int, 2>>& edges,
                                                     int node_count, int root_node);

// Validates tree topology and assembles the network with stretch springs on
// every edge and bend/twist springs from the rooted pairing above.
RodNetwork make_network(int node_count, std::vector<std::array<int, 2>> edges,
                        std::vector<double> undeformed_edge_lengths, std::vector<bool> rigid_edge_flags,
                        int head_edge_index, int head_node_index, int spring_root_node);

// DOF vector, velocities, reference frames, and simulation clock. ref_twist
// carries the continuous (branch-tracked) reference twist per bend/twist
// spring: the per-step principal value drifts across +-pi as the tails
// revolve, and twist must stay continuous in time.
struct State {
    Eigen::VectorXd q;
    Eigen::VectorXd q_dot;
    FrameSet ref_frames;
    std::vector<double> ref_twist;
    double time = 0.0;
};

// State at rest in the given nodal configuration, twist angles zero, frames
// seeded from the global axes.
State make_initial_state(const RodNetwork& network, const std::vector<Eigen::Vector3d>& positions);

// Parallel-transports each edge frame from its old tangent to the tangent
// implied by new_q and re-orthonormalizes. Executed from the stored frames
// of the previous time step at every Newton iterate.
FrameSet time_update_frames(const RodNetwork& network, const FrameSet& old_frames,
                            const Eigen::VectorXd& new_q);

// Local (flip-adjusted) frames of a spring's two member edges.
struct SpringFrames {
    EdgeFrame in;
    EdgeFrame out;
};
SpringFrames local_spring_frames(const FrameSet& frames, const BendTwistSpring& s);

// Residual rotation of the reference frame across a spring's center node:
// transport the in-edge d1 onto the out-edge tangent and measure the signed
// angle to the out-edge d1 about that tangent. In (-pi, pi].
double compute_reference_twist(const RodNetwork& network, const FrameSet& frames,
                               const BendTwistSpring& s);

}  // namespace rodsim

#endif

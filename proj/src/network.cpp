#include "rodsim/network.hpp"

#include <queue>

namespace rodsim {

std::vector<std::vector<int>> RodNetwork::node_edge_adjacency() const {
    std::vector<std::vector<int>> adj(node_count);
    for (int e = 0; e < edge_count; ++e) {
        adj[edges[e][0]].push_back(e);
        adj[edges[e][1]].push_back(e);
    }
    return adj;
}

BendTwistSpring make_bendtwist_spring(const std::vector<std::array<int, 2>>& edges, int edge_in,
                                      int edge_out, int center_node) {
    BendTwistSpring s;
    s.edge_in = edge_in;
    s.edge_out = edge_out;
    s.center_node = center_node;
    const auto& ein = edges[edge_in];
    const auto& eout = edges[edge_out];
    if (ein[0] != center_node && ein[1] != center_node)
        throw NetworkError("bendtwist spring: in-edge does not touch center node");
    if (eout[0] != center_node && eout[1] != center_node)
        throw NetworkError("bendtwist spring: out-edge does not touch center node");
    s.flip_in = (ein[1] != center_node);   // stored orientation points out of the center
    s.flip_out = (eout[0] != center_node); // stored orientation points into the center
    s.node_in = s.flip_in ? ein[1] : ein[0];
    s.node_out = s.flip_out ? eout[0] : eout[1];
    return s;
}

std::vector<BendTwistSpring> build_bendtwist_springs(const std::vector<std::array<int, 2>>& edges,
                                                     int node_count, int root_node) {
    std::vector<std::vector<int>> adj(node_count);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        adj[edges[e][0]].push_back(e);
        adj[edges[e][1]].push_back(e);
    }

    // BFS from the root; at each visited node pair the parent edge with every
    // child edge.
    std::vector<BendTwistSpring> springs;
    std::vector<int> parent_edge(node_count, -1);
    std::vector<bool> visited(node_count, false);
    std::queue<int> frontier;
    frontier.push(root_node);
    visited[root_node] = true;
    while (!frontier.empty()) {
        const int node = frontier.front();
        frontier.pop();
        for (int e : adj[node]) {
            if (e == parent_edge[node]) continue;
            const int other = edges[e][0] == node ? edges[e][1] : edges[e][0];
            if (visited[other]) throw NetworkError("network contains a cycle");
            visited[other] = true;
            parent_edge[other] = e;
            frontier.push(other);
            if (parent_edge[node] >= 0)
                springs.push_back(make_bendtwist_spring(edges, parent_edge[node], e, node));
        }
    }
    for (int i = 0; i < node_count; ++i)
        if (!visited[i]) throw NetworkError("network is not connected");
    return springs;
}

RodNetwork make_network(int node_count, std::vector<std::array<int, 2>> edges,
                        std::vector<double> undeformed_edge_lengths, std::vector<bool> rigid_edge_flags,
                        int head_edge_index, int head_node_index, int spring_root_node) {
    RodNetwork net;
    net.node_count = node_count;
    net.edge_count = static_cast<int>(edges.size());
    if (net.edge_count != node_count - 1)
        throw NetworkError("tree topology requires N_e = N - 1");
    if (static_cast<int>(undeformed_edge_lengths.size()) != net.edge_count ||
        static_cast<int>(rigid_edge_flags.size()) != net.edge_count)
        throw NetworkError("per-edge arrays must match the edge count");
    for (const auto& e : edges) {
        if (e[0] < 0 || e[0] >= node_count || e[1] < 0 || e[1] >= node_count || e[0] == e[1])
            throw NetworkError("edge references an invalid node");
    }
    for (double l : undeformed_edge_lengths)
        if (!(l > 0.0)) throw NetworkError("undeformed edge lengths must be positive");

    net.edges = std::move(edges);
    net.undeformed_edge_lengths = std::move(undeformed_edge_lengths);
    net.rigid_edge_flags = std::move(rigid_edge_flags);
    net.head_edge_index = head_edge_index;
    net.head_node_index = head_node_index;

    net.stretch_springs.resize(net.edge_count);
    for (int e = 0; e < net.edge_count; ++e) net.stretch_springs[e] = e;

    net.bendtwist_springs = build_bendtwist_springs(net.edges, node_count, spring_root_node);

    int branch_nodes = 0;
    const auto adj = net.node_edge_adjacency();
    for (const auto& a : adj) {
        if (a.empty()) throw NetworkError("isolated node");
        if (a.size() > 2) ++branch_nodes;
    }
    if (branch_nodes > 1) throw NetworkError("more than one joint node");

    net.voronoi_lengths.resize(net.bendtwist_springs.size());
    for (size_t i = 0; i < net.bendtwist_springs.size(); ++i) {
        const auto& s = net.bendtwist_springs[i];
        net.voronoi_lengths[i] = 0.5 * (net.undeformed_edge_lengths[s.edge_in] +
                                        net.undeformed_edge_lengths[s.edge_out]);
    }
    return net;
}

State make_initial_state(const RodNetwork& network, const std::vector<Eigen::Vector3d>& positions) {
    if (static_cast<int>(positions.size()) != network.node_count)
        throw NetworkError("position count does not match node count");
    State st;
    st.q = Eigen::VectorXd::Zero(network.ndof());
    st.q_dot = Eigen::VectorXd::Zero(network.ndof());
    for (int i = 0; i < network.node_count; ++i) st.q.segment<3>(network.position_slot(i)) = positions[i];
    st.ref_frames.resize(network.edge_count);
    for (int e = 0; e < network.edge_count; ++e) {
        const Eigen::Vector3d ev = network.edge_vector(st.q, e);
        const double len = ev.norm();
        if (!(len > 0.0)) throw DegenerateGeometryError("zero-length edge in initial configuration");
        st.ref_frames[e] = initial_frame(ev / len);
    }
    st.ref_twist.resize(network.bendtwist_springs.size());
    for (size_t i = 0; i < network.bendtwist_springs.size(); ++i)
        st.ref_twist[i] = compute_reference_twist(network, st.ref_frames, network.bendtwist_springs[i]);
    st.time = 0.0;
    return st;
}

FrameSet time_update_frames(const RodNetwork& network, const FrameSet& old_frames,
                            const Eigen::VectorXd& new_q) {
    FrameSet frames(network.edge_count);
    for (int e = 0; e < network.edge_count; ++e) {
        const Eigen::Vector3d ev = network.edge_vector(new_q, e);
        const double len = ev.norm();
        if (!(len > 1e-14)) throw DegenerateGeometryError("zero-length edge during frame update");
        const Eigen::Vector3d t = ev / len;
        Eigen::Vector3d d1 = parallel_transport(old_frames[e].d1, old_frames[e].t, t);
        d1 -= d1.dot(t) * t;
        d1.normalize();
        frames[e] = EdgeFrame{d1, t.cross(d1), t};
    }
    return frames;
}

SpringFrames local_spring_frames(const FrameSet& frames, const BendTwistSpring& s) {
    SpringFrames lf{frames[s.edge_in], frames[s.edge_out]};
    if (s.flip_in) {
        lf.in.d1 = -lf.in.d1;
        lf.in.t = -lf.in.t;
    }
    if (s.flip_out) {
        lf.out.d1 = -lf.out.d1;
        lf.out.t = -lf.out.t;
    }
    return lf;
}

double compute_reference_twist(const RodNetwork& network, const FrameSet& frames,
                               const BendTwistSpring& s) {
    (void)network;
    const SpringFrames lf = local_spring_frames(frames, s);
    const Eigen::Vector3d d_tmp = parallel_transport(lf.in.d1, lf.in.t, lf.out.t);
    return signed_angle(d_tmp, lf.out.d1, lf.out.t);
}

}  // namespace rodsim

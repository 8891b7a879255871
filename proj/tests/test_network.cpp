#include <doctest.h>

#include "rodsim/network.hpp"

using namespace rodsim;

TEST_CASE("dof layout: smallest network and a 3-node chain") {
    RodNetwork net = make_network(2, {{{0, 1}}}, {1.0}, {false}, -1, -1, 0);
    CHECK(net.ndof() == 7);
    CHECK(net.twist_slot(0) == 6);

    RodNetwork chain = make_network(3, {{{0, 1}, {1, 2}}}, {1.0, 1.0}, {false, false}, -1, -1, 0);
    CHECK(chain.ndof() == 11);
    CHECK(chain.position_slot(1, 0) == 3);
    CHECK(chain.position_slot(1, 2) == 5);
    CHECK(chain.twist_slot(1) == 3 * 3 + 1);
}

TEST_CASE("every dof slot is owned by exactly one node or edge") {
    RodNetwork net = make_network(4, {{{0, 1}, {1, 2}, {2, 3}}}, {1.0, 1.0, 1.0},
                                  {false, false, false}, -1, -1, 0);
    std::vector<int> owners(net.ndof(), 0);
    for (int i = 0; i < net.node_count; ++i)
        for (int a = 0; a < 3; ++a) owners[net.position_slot(i, a)]++;
    for (int e = 0; e < net.edge_count; ++e) owners[net.twist_slot(e)]++;
    for (int count : owners) CHECK(count == 1);
}

TEST_CASE("tree validation rejects cycles, disconnection, and double joints") {
    // 3 nodes, 3 edges: violates N_e = N - 1
    CHECK_THROWS_AS(make_network(3, {{{0, 1}, {1, 2}, {2, 0}}}, {1, 1, 1}, {false, false, false},
                                 -1, -1, 0),
                    NetworkError);
    // right count but disconnected (duplicated edge + isolated node)
    CHECK_THROWS_AS(make_network(3, {{{0, 1}, {0, 1}}}, {1, 1}, {false, false}, -1, -1, 0),
                    NetworkError);
    // two degree-3 nodes
    CHECK_THROWS_AS(make_network(6,
                                 {{{0, 1}, {1, 2}, {1, 3}, {3, 4}, {3, 5}}},
                                 {1, 1, 1, 1, 1}, {false, false, false, false, false}, -1, -1, 0),
                    NetworkError);
}

TEST_CASE("degree-2 node: one spring, no flips when edges run tip-to-tail") {
    RodNetwork chain = make_network(3, {{{0, 1}, {1, 2}}}, {1.0, 2.0}, {false, false}, -1, -1, 0);
    REQUIRE(chain.bendtwist_springs.size() == 1);
    const auto& s = chain.bendtwist_springs[0];
    CHECK(s.center_node == 1);
    CHECK_FALSE(s.flip_in);
    CHECK_FALSE(s.flip_out);
    CHECK(s.node_in == 0);
    CHECK(s.node_out == 2);
    CHECK(chain.voronoi_lengths[0] == doctest::Approx(1.5));
}

TEST_CASE("reversed edge orientations produce flip flags") {
    // edge 0 points out of the center, edge 1 points into it
    const std::vector<std::array<int, 2>> edges = {{{1, 0}, {2, 1}}};
    const auto s = make_bendtwist_spring(edges, 0, 1, 1);
    CHECK(s.flip_in);
    CHECK(s.flip_out);
    CHECK(s.node_in == 0);
    CHECK(s.node_out == 2);
}

TEST_CASE("joint node: one spring per spoke, pairing the root-side edge") {
    // star: root 0 - 1 - joint 2 with three spokes 3, 4, 5
    const std::vector<std::array<int, 2>> edges = {{{0, 1}, {1, 2}, {2, 3}, {2, 4}, {2, 5}}};
    const auto springs = build_bendtwist_springs(edges, 6, 0);
    int joint_springs = 0;
    for (const auto& s : springs) {
        if (s.center_node == 2) {
            ++joint_springs;
            CHECK(s.edge_in == 1);  // always the root-side edge
            CHECK_FALSE(s.flip_in);
            CHECK_FALSE(s.flip_out);
        }
    }
    CHECK(joint_springs == 3);
    CHECK(springs.size() == 4);  // 3 at the joint + 1 at node 1
}

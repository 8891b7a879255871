#include <doctest.h>

#include <Eigen/Geometry>

#include "rodsim/frames.hpp"
#include "rodsim/network.hpp"
#include "support/oracles.hpp"

using namespace rodsim;
namespace t = rodsim::test;

TEST_CASE("parallel transport: identity for equal tangents") {
    const Eigen::Vector3d d(1, 0, 0);
    const Eigen::Vector3d z(0, 0, 1);
    CHECK((parallel_transport(d, z, z) - d).norm() == 0.0);
}

TEST_CASE("parallel transport: quarter-turn value from the five-step construction") {
    // oracle: b = z x x = y; n1 = z x y = -x; n2 = x x y = z;
    // d_tmp = (d.z) x + (d.n1) n2 + (d.y) y = -z for d = x
    const Eigen::Vector3d d(1, 0, 0);
    const Eigen::Vector3d from(0, 0, 1);
    const Eigen::Vector3d to(1, 0, 0);
    const Eigen::Vector3d got = parallel_transport(d, from, to);
    CHECK(got.x() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(got.y() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(got.z() == doctest::Approx(-1.0));
}

TEST_CASE("parallel transport: unit norm, adaptedness, inner products, round trip") {
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Vector3d a = t::random_unit();
        Eigen::Vector3d b = (a + 0.9 * t::random_vector()).normalized();
        if (1.0 + a.dot(b) < 1e-6) b = -b;
        const Eigen::Vector3d d1 = a.cross(t::random_unit()).normalized();
        const Eigen::Vector3d d2 = a.cross(d1);

        const Eigen::Vector3d p1 = parallel_transport(d1, a, b);
        const Eigen::Vector3d p2 = parallel_transport(d2, a, b);
        CHECK(std::abs(p1.norm() - 1.0) < 1e-12);
        CHECK(std::abs(p1.dot(b)) < 1e-12);
        CHECK(std::abs(p1.dot(p2) - d1.dot(d2)) < 1e-12);

        const Eigen::Vector3d back = parallel_transport(p1, b, a);
        CHECK((back - d1).norm() < 1e-12);
    }
}

TEST_CASE("parallel transport: antiparallel tangents are rejected") {
    const Eigen::Vector3d z(0, 0, 1);
    CHECK_THROWS_AS(parallel_transport(Eigen::Vector3d(1, 0, 0), z, Eigen::Vector3d(0, 0, -1)),
                    DegenerateGeometryError);
}

TEST_CASE("initial frame is adapted, right-handed, and uses the seed fallback") {
    const EdgeFrame f = initial_frame(Eigen::Vector3d(0, 0, 1));
    CHECK((f.d1 - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
    const EdgeFrame g = initial_frame(Eigen::Vector3d(1, 0, 0));  // |t.x| > 0.99 -> y seed
    CHECK(std::abs(g.d1.dot(g.t)) < 1e-15);
    CHECK((g.d1.cross(g.d2) - g.t).norm() < 1e-14);
    CHECK(g.d1.y() == doctest::Approx(1.0));
}

namespace {

RodNetwork chain_network(const std::vector<Eigen::Vector3d>& pts) {
    std::vector<std::array<int, 2>> edges;
    std::vector<double> lengths;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        edges.push_back({static_cast<int>(i), static_cast<int>(i + 1)});
        lengths.push_back((pts[i + 1] - pts[i]).norm());
    }
    return make_network(static_cast<int>(pts.size()), edges, lengths,
                        std::vector<bool>(edges.size(), false), -1, -1, 0);
}

}  // namespace

TEST_CASE("reference twist: zero for collinear edges with identical frames") {
    const std::vector<Eigen::Vector3d> pts = {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}};
    const RodNetwork net = chain_network(pts);
    const State st = make_initial_state(net, pts);
    CHECK(compute_reference_twist(net, st.ref_frames, net.bendtwist_springs[0]) ==
          doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("reference twist: measures a frame rotated about a shared tangent") {
    const std::vector<Eigen::Vector3d> pts = {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}};
    const RodNetwork net = chain_network(pts);
    State st = make_initial_state(net, pts);
    const Eigen::AngleAxisd rot(0.3, st.ref_frames[1].t);
    st.ref_frames[1].d1 = rot * st.ref_frames[1].d1;
    st.ref_frames[1].d2 = rot * st.ref_frames[1].d2;
    CHECK(compute_reference_twist(net, st.ref_frames, net.bendtwist_springs[0]) ==
          doctest::Approx(0.3));
}

TEST_CASE("reference twist: invariant under a rigid rotation of geometry and frames") {
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Eigen::Vector3d> pts = {{0, 0, 0}};
        pts.push_back(pts.back() + t::random_unit());
        pts.push_back(pts.back() + (pts[1] - pts[0] + 0.8 * t::random_vector()).normalized());
        const RodNetwork net = chain_network(pts);
        State st = make_initial_state(net, pts);
        // randomize the frame twist so the reference twist is nontrivial
        for (auto& f : st.ref_frames) {
            const Eigen::AngleAxisd rot(t::uniform(-2.0, 2.0), f.t);
            f.d1 = rot * f.d1;
            f.d2 = rot * f.d2;
        }
        const double before = compute_reference_twist(net, st.ref_frames, net.bendtwist_springs[0]);

        const Eigen::Quaterniond R(Eigen::AngleAxisd(t::uniform(-3.0, 3.0), t::random_unit()));
        for (auto& f : st.ref_frames) {
            f.d1 = R * f.d1;
            f.d2 = R * f.d2;
            f.t = R * f.t;
        }
        const double after = compute_reference_twist(net, st.ref_frames, net.bendtwist_springs[0]);
        CHECK(std::abs(after - before) < 1e-12);
    }
}

TEST_CASE("reference twist: sums to the holonomy of a quaternion-composed transport chain") {
    for (int trial = 0; trial < 20; ++trial) {
        const int nodes = 8;
        std::vector<Eigen::Vector3d> pts = {{0, 0, 0}};
        Eigen::Vector3d dir = t::random_unit();
        for (int i = 1; i < nodes; ++i) {
            pts.push_back(pts.back() + dir);
            dir = (dir + 0.7 * t::random_vector()).normalized();
        }
        const RodNetwork net = chain_network(pts);
        State st = make_initial_state(net, pts);
        for (auto& f : st.ref_frames) {
            const Eigen::AngleAxisd rot(t::uniform(-1.0, 1.0), f.t);
            f.d1 = rot * f.d1;
            f.d2 = rot * f.d2;
        }

        double sum = 0.0;
        for (const auto& s : net.bendtwist_springs)
            sum += compute_reference_twist(net, st.ref_frames, s);

        // independent oracle: carry the first frame along the chain by
        // composed minimal rotations, then measure the residual angle
        Eigen::Quaterniond carry = Eigen::Quaterniond::Identity();
        for (size_t e = 0; e + 1 < st.ref_frames.size(); ++e)
            carry = t::minimal_rotation(st.ref_frames[e].t, st.ref_frames[e + 1].t) * carry;
        const Eigen::Vector3d carried_d1 = carry * st.ref_frames.front().d1;
        const auto& last = st.ref_frames.back();
        const double holonomy = signed_angle(carried_d1, last.d1, last.t);

        const double wrapped = std::remainder(sum - holonomy, 2.0 * M_PI);
        CHECK(std::abs(wrapped) < 1e-10);
    }
}

TEST_CASE("time update: unchanged positions give unchanged frames") {
    const std::vector<Eigen::Vector3d> pts = {{0, 0, 0}, {0.3, 0, 1}, {0.1, 0.4, 2}};
    const RodNetwork net = chain_network(pts);
    const State st = make_initial_state(net, pts);
    const FrameSet updated = time_update_frames(net, st.ref_frames, st.q);
    for (int e = 0; e < net.edge_count; ++e) {
        CHECK((updated[e].d1 - st.ref_frames[e].d1).norm() < 1e-14);
        CHECK((updated[e].d2 - st.ref_frames[e].d2).norm() < 1e-14);
    }
}

TEST_CASE("time update: a planar network rotated in-plane carries its frames by the same rotation") {
    // tangents lie in the xy plane and the rotation axis is z, so the minimal
    // rotation between old and new tangents is exactly the applied rotation
    const std::vector<Eigen::Vector3d> pts = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {2, 1.5, 0}};
    const RodNetwork net = chain_network(pts);
    const State st = make_initial_state(net, pts);

    const Eigen::AngleAxisd R(0.9, Eigen::Vector3d::UnitZ());
    Eigen::VectorXd q_rot = st.q;
    for (int i = 0; i < net.node_count; ++i)
        q_rot.segment<3>(net.position_slot(i)) = R * st.q.segment<3>(net.position_slot(i));

    const FrameSet updated = time_update_frames(net, st.ref_frames, q_rot);
    for (int e = 0; e < net.edge_count; ++e) {
        CHECK((updated[e].d1 - R * st.ref_frames[e].d1).norm() < 1e-12);
        CHECK((updated[e].d2 - R * st.ref_frames[e].d2).norm() < 1e-12);
        CHECK((updated[e].t - R * st.ref_frames[e].t).norm() < 1e-12);
    }
}

TEST_CASE("time update: adaptedness after a random move") {
    const std::vector<Eigen::Vector3d> pts = {{0, 0, 0}, {0, 0, 1}, {0, 0.2, 2}, {0.4, 0.2, 2.8}};
    const RodNetwork net = chain_network(pts);
    const State st = make_initial_state(net, pts);
    Eigen::VectorXd q = st.q;
    for (int i = 0; i < net.node_count; ++i)
        q.segment<3>(net.position_slot(i)) += 0.2 * t::random_vector();
    const FrameSet updated = time_update_frames(net, st.ref_frames, q);
    for (int e = 0; e < net.edge_count; ++e) {
        CHECK(std::abs(updated[e].d1.dot(updated[e].t)) < 1e-12);
        CHECK(std::abs(updated[e].d1.norm() - 1.0) < 1e-12);
        CHECK((updated[e].d1.cross(updated[e].d2) - updated[e].t).norm() < 1e-12);
    }
}

TEST_CASE("time update: zero-length edge reports degenerate geometry") {
    const std::vector<Eigen::Vector3d> pts = {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}};
    const RodNetwork net = chain_network(pts);
    const State st = make_initial_state(net, pts);
    Eigen::VectorXd q = st.q;
    q.segment<3>(net.position_slot(1)) = q.segment<3>(net.position_slot(0));
    CHECK_THROWS_AS(time_update_frames(net, st.ref_frames, q), DegenerateGeometryError);
}

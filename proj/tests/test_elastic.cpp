#include <doctest.h>

#include <Eigen/Geometry>

#include "rodsim/elastic.hpp"
#include "rodsim/robot.hpp"
#include "rodsim/strains.hpp"
#include "support/oracles.hpp"

using namespace rodsim;
namespace t = rodsim::test;

namespace {

RodNetwork chain_network(const std::vector<Eigen::Vector3d>& pts,
                         std::vector<std::array<int, 2>> edges = {}) {
    std::vector<double> lengths;
    if (edges.empty())
        for (size_t i = 0; i + 1 < pts.size(); ++i)
            edges.push_back({static_cast<int>(i), static_cast<int>(i + 1)});
    for (const auto& e : edges) lengths.push_back((pts[e[1]] - pts[e[0]]).norm());
    return make_network(static_cast<int>(pts.size()), edges, lengths,
                        std::vector<bool>(edges.size(), false), -1, -1, 0);
}

NaturalStrains zero_naturals(const RodNetwork& net) {
    NaturalStrains n;
    n.stretch_ref_lengths = net.undeformed_edge_lengths;
    n.natural_curvature_1.assign(net.bendtwist_springs.size(), 0.0);
    n.natural_curvature_2.assign(net.bendtwist_springs.size(), 0.0);
    n.natural_twists.assign(net.bendtwist_springs.size(), 0.0);
    return n;
}

StiffnessSet unit_stiffness(const RodNetwork& net, double ea, double ei, double gj) {
    StiffnessSet st;
    st.EA.assign(net.edge_count, ea);
    st.EI.assign(net.bendtwist_springs.size(), ei);
    st.GJ.assign(net.bendtwist_springs.size(), gj);
    st.rigid_multiplier = 1.0;
    return st;
}

// a small robot with a joint node, rigid members, and all spring kinds
struct RobotFixture {
    RobotFixture() {
        RobotSpec spec;
        spec.n = 2;
        spec.target_edge_length = spec.tail_length / 3.0;
        robot = build_robot(spec);
    }
    BuiltRobot robot;
};

// perturbed configuration with frames re-adapted to it (the anchor for all
// finite-difference probes)
struct ProbePoint {
    Eigen::VectorXd q;
    FrameSet frames;
};

ProbePoint perturbed_point(const RodNetwork& net, const State& initial, double pos_scale,
                           double twist_scale) {
    ProbePoint p;
    p.q = initial.q;
    for (int i = 0; i < net.node_count; ++i)
        p.q.segment<3>(net.position_slot(i)) += t::random_vector(pos_scale);
    for (int e = 0; e < net.edge_count; ++e)
        p.q[net.twist_slot(e)] += t::uniform(-twist_scale, twist_scale);
    p.frames = time_update_frames(net, initial.ref_frames, p.q);
    return p;
}

}  // namespace

TEST_CASE("stretch energy example: 10% strain on a unit edge with EA = 1 N") {
    const std::vector<Eigen::Vector3d> pts = {{0, 0, 0}, {0, 0, 1}};
    RodNetwork net = make_network(2, {{{0, 1}}}, {1.0}, {false}, -1, -1, 0);
    State st = make_initial_state(net, pts);
    NaturalStrains nat = zero_naturals(net);
    StiffnessSet stiff = unit_stiffness(net, 1.0, 0.0, 0.0);
    st.q[5] = 1.1;  // stretch along z by 10%
    CHECK(total_energy(st.q, net, nat, stiff, st.ref_frames) == doctest::Approx(0.005));
}

TEST_CASE("bend energy example: two unit edges at a right angle with frames on the binormal") {
    const std::vector<Eigen::Vector3d> pts = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
    RodNetwork net = chain_network(pts);
    State st = make_initial_state(net, pts);
    // align both m2 directors (theta = 0) with the binormal +z
    st.ref_frames[0].d2 = Eigen::Vector3d::UnitZ();
    st.ref_frames[0].d1 = st.ref_frames[0].d2.cross(st.ref_frames[0].t);
    st.ref_frames[1].d2 = Eigen::Vector3d::UnitZ();
    st.ref_frames[1].d1 = st.ref_frames[1].d2.cross(st.ref_frames[1].t);

    const SpringStrains s = spring_strains(net, st.q, st.ref_frames, 0);
    CHECK(s.kappa1 == doctest::Approx(2.0));
    CHECK(s.kappa2 == doctest::Approx(0.0).epsilon(1e-12));

    NaturalStrains nat = zero_naturals(net);
    StiffnessSet stiff = unit_stiffness(net, 0.0, 1.0, 0.0);
    CHECK(total_energy(st.q, net, nat, stiff, st.ref_frames) == doctest::Approx(2.0));
}

TEST_CASE("natural strains from a configuration give exactly zero energy and gradient there") {
    RobotFixture fx;
    const auto& net = fx.robot.network;
    const auto& st = fx.robot.initial_state;
    CHECK(total_energy(st.q, net, fx.robot.natural, fx.robot.stiffness, st.ref_frames) == 0.0);
    const Eigen::VectorXd g =
        energy_gradient(st.q, net, fx.robot.natural, fx.robot.stiffness, st.ref_frames);
    CHECK(g.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("natural strains from a random deformed configuration also zero out the energy") {
    RobotFixture fx;
    const auto& net = fx.robot.network;
    const ProbePoint p = perturbed_point(net, fx.robot.initial_state, 5e-3, 0.5);
    const NaturalStrains nat = natural_strains_from_configuration(net, p.q, p.frames);
    CHECK(std::abs(total_energy(p.q, net, nat, fx.robot.stiffness, p.frames)) < 1e-18);
}

TEST_CASE("energy gradient matches central finite differences on the robot network") {
    RobotFixture fx;
    const auto& net = fx.robot.network;
    for (int trial = 0; trial < 3; ++trial) {
        const ProbePoint p = perturbed_point(net, fx.robot.initial_state, 2e-3, 0.3);
        const Eigen::VectorXd g =
            energy_gradient(p.q, net, fx.robot.natural, fx.robot.stiffness, p.frames);
        const Eigen::VectorXd g_fd = t::fd_gradient(
            [&](const Eigen::VectorXd& q) {
                return total_energy(q, net, fx.robot.natural, fx.robot.stiffness, p.frames);
            },
            p.q, 1e-7);
        const double scale = g_fd.lpNorm<Eigen::Infinity>();
        REQUIRE(scale > 0.0);
        CHECK((g - g_fd).lpNorm<Eigen::Infinity>() / scale < 1e-6);
    }
}

TEST_CASE("energy gradient matches finite differences on a generic tree with flipped edges") {
    // joint at node 1 with one spoke stored back-to-front, plus a reversed
    // chain edge: exercises every flip path
    const std::vector<Eigen::Vector3d> pts = {{0, 0, 0},     {0, 0, 1},    {0.8, 0.1, 1.3},
                                              {-0.6, 0.7, 1.2}, {0, -0.9, 1.4}, {0.1, -1.6, 2.0}};
    const std::vector<std::array<int, 2>> edges = {{{0, 1}, {1, 2}, {3, 1}, {1, 4}, {5, 4}}};
    std::vector<double> lengths;
    for (const auto& e : edges) lengths.push_back((pts[e[1]] - pts[e[0]]).norm());
    const RodNetwork net = make_network(6, edges, lengths, std::vector<bool>(edges.size(), false),
                                        -1, -1, 0);
    bool saw_flip = false;
    for (const auto& s : net.bendtwist_springs) saw_flip = saw_flip || s.flip_in || s.flip_out;
    REQUIRE(saw_flip);

    const State st = make_initial_state(net, pts);
    const NaturalStrains nat = natural_strains_from_configuration(net, st.q, st.ref_frames);
    const StiffnessSet stiff = unit_stiffness(net, 40.0, 2.5, 1.7);

    for (int trial = 0; trial < 3; ++trial) {
        const ProbePoint p = perturbed_point(net, st, 0.05, 0.6);
        const NaturalStrains* use_nat = &nat;
        const Eigen::VectorXd g = energy_gradient(p.q, net, *use_nat, stiff, p.frames);
        const Eigen::VectorXd g_fd = t::fd_gradient(
            [&](const Eigen::VectorXd& q) { return total_energy(q, net, *use_nat, stiff, p.frames); },
            p.q, 1e-7);
        const double scale = g_fd.lpNorm<Eigen::Infinity>();
        REQUIRE(scale > 0.0);
        CHECK((g - g_fd).lpNorm<Eigen::Infinity>() / scale < 1e-6);
    }
}

TEST_CASE("energy hessian matches finite differences of the gradient") {
    RobotFixture fx;
    const auto& net = fx.robot.network;
    const ProbePoint p = perturbed_point(net, fx.robot.initial_state, 2e-3, 0.3);

    const Eigen::MatrixXd h = Eigen::MatrixXd(
        energy_hessian(p.q, net, fx.robot.natural, fx.robot.stiffness, p.frames));
    const Eigen::MatrixXd h_fd = t::fd_jacobian(
        [&](const Eigen::VectorXd& q) {
            return energy_gradient(q, net, fx.robot.natural, fx.robot.stiffness, p.frames);
        },
        p.q, 1e-6);
    const double scale = h_fd.lpNorm<Eigen::Infinity>();
    REQUIRE(scale > 0.0);
    CHECK((h - h_fd).lpNorm<Eigen::Infinity>() / scale < 1e-4);
}

TEST_CASE("energy hessian is symmetric and respects the sparsity budget") {
    RobotFixture fx;
    const auto& net = fx.robot.network;
    const ProbePoint p = perturbed_point(net, fx.robot.initial_state, 2e-3, 0.3);
    const Eigen::SparseMatrix<double> h =
        energy_hessian(p.q, net, fx.robot.natural, fx.robot.stiffness, p.frames);
    const Eigen::MatrixXd hd = Eigen::MatrixXd(h);
    const double rel_asym =
        (hd - hd.transpose()).lpNorm<Eigen::Infinity>() / hd.lpNorm<Eigen::Infinity>();
    CHECK(rel_asym < 1e-10);
    CHECK(h.nonZeros() <= 36 * static_cast<int>(net.stretch_springs.size()) +
                              121 * static_cast<int>(net.bendtwist_springs.size()));
}

TEST_CASE("rigid translations and rotations leave the energy unchanged") {
    RobotFixture fx;
    const auto& net = fx.robot.network;
    const ProbePoint p = perturbed_point(net, fx.robot.initial_state, 2e-3, 0.3);
    const double e0 = total_energy(p.q, net, fx.robot.natural, fx.robot.stiffness, p.frames);
    REQUIRE(e0 > 0.0);

    Eigen::VectorXd q_shift = p.q;
    const Eigen::Vector3d shift = t::random_vector(0.5);
    for (int i = 0; i < net.node_count; ++i) q_shift.segment<3>(net.position_slot(i)) += shift;
    const double e_shift =
        total_energy(q_shift, net, fx.robot.natural, fx.robot.stiffness, p.frames);
    CHECK(std::abs(e_shift - e0) / e0 < 1e-10);

    const Eigen::Quaterniond R(Eigen::AngleAxisd(0.8, t::random_unit()));
    Eigen::VectorXd q_rot = p.q;
    for (int i = 0; i < net.node_count; ++i)
        q_rot.segment<3>(net.position_slot(i)) = R * p.q.segment<3>(net.position_slot(i));
    FrameSet frames_rot = p.frames;
    for (auto& f : frames_rot) {
        f.d1 = R * f.d1;
        f.d2 = R * f.d2;
        f.t = R * f.t;
    }
    const double e_rot = total_energy(q_rot, net, fx.robot.natural, fx.robot.stiffness, frames_rot);
    CHECK(std::abs(e_rot - e0) / e0 < 1e-10);
}

TEST_CASE("a flipped spring scores the same energy as the re-oriented copy of the rod") {
    const std::vector<Eigen::Vector3d> pts = {{0, 0, 0}, {0.1, 0.2, 1.0}, {0.3, 0.9, 1.9}};
    const RodNetwork forward = chain_network(pts, {{{0, 1}, {1, 2}}});
    const RodNetwork reversed = chain_network(pts, {{{0, 1}, {2, 1}}});
    REQUIRE(reversed.bendtwist_springs[0].flip_out);

    const State st_f = make_initial_state(forward, pts);
    State st_r = make_initial_state(reversed, pts);
    // re-orientation: the reversed edge carries the flip image {-d1, d2, -t}
    // of the forward frame, so both copies mark the same material
    st_r.ref_frames[1].d1 = -st_f.ref_frames[1].d1;
    st_r.ref_frames[1].d2 = st_f.ref_frames[1].d2;
    st_r.ref_frames[1].t = -st_f.ref_frames[1].t;
    const NaturalStrains nat_f = natural_strains_from_configuration(forward, st_f.q, st_f.ref_frames);
    const NaturalStrains nat_r =
        natural_strains_from_configuration(reversed, st_r.q, st_r.ref_frames);
    const StiffnessSet stiff_f = unit_stiffness(forward, 30.0, 2.0, 1.5);
    const StiffnessSet stiff_r = unit_stiffness(reversed, 30.0, 2.0, 1.5);

    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd q_f = st_f.q;
        for (int i = 0; i < forward.node_count; ++i)
            q_f.segment<3>(forward.position_slot(i)) += t::random_vector(0.05);
        const double dtheta0 = t::uniform(-0.5, 0.5);
        const double dtheta1 = t::uniform(-0.5, 0.5);
        q_f[forward.twist_slot(0)] = dtheta0;
        q_f[forward.twist_slot(1)] = dtheta1;

        Eigen::VectorXd q_r = q_f;
        // the reversed copy's second twist DOF spins the opposite way
        q_r[reversed.twist_slot(1)] = -dtheta1;

        const FrameSet fr_f = time_update_frames(forward, st_f.ref_frames, q_f);
        const FrameSet fr_r = time_update_frames(reversed, st_r.ref_frames, q_r);
        const double e_f = total_energy(q_f, forward, nat_f, stiff_f, fr_f);
        const double e_r = total_energy(q_r, reversed, nat_r, stiff_r, fr_r);
        CHECK(e_f == doctest::Approx(e_r).epsilon(1e-11));
    }
}

TEST_CASE("stiffness assembly: rigid members get the multiplier, flexible ones the base value") {
    RobotFixture fx;
    const auto& net = fx.robot.network;
    RobotSpec spec;
    const double ea = spec.youngs_modulus * M_PI * spec.tail_radius * spec.tail_radius;
    const double ei = 0.25 * M_PI * spec.youngs_modulus * std::pow(spec.tail_radius, 4);
    const double gj = 0.5 * M_PI * (spec.youngs_modulus / 3.0) * std::pow(spec.tail_radius, 4);

    CHECK(fx.robot.stiffness.EA[0] == doctest::Approx(ea * spec.rigid_multiplier));
    const int last_edge = net.edge_count - 1;  // deep in a tail
    CHECK_FALSE(net.rigid_edge_flags[last_edge]);
    CHECK(fx.robot.stiffness.EA[last_edge] == doctest::Approx(ea));
    // G = E / (2 (1 + nu)) = E / 3 for nu = 1/2
    for (size_t i = 0; i < net.bendtwist_springs.size(); ++i) {
        const auto& s = net.bendtwist_springs[i];
        const bool rigid = net.rigid_edge_flags[s.edge_in] || net.rigid_edge_flags[s.edge_out];
        CHECK(fx.robot.stiffness.EI[i] == doctest::Approx(rigid ? ei * spec.rigid_multiplier : ei));
        CHECK(fx.robot.stiffness.GJ[i] == doctest::Approx(rigid ? gj * spec.rigid_multiplier : gj));
    }
}

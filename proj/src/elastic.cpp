#include "rodsim/elastic.hpp"

#include <cmath>

#include "rodsim/dual.hpp"
#include "rodsim/strains.hpp"

namespace rodsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline double scalar_value(double x) { return x; }
template <int N>
inline double scalar_value(const Dual<N>& x) {
    return x.v;
}

// 2 pi multiple that moves `principal` onto the branch nearest the guide;
// zero derivative, so it is a plain double even on the dual path
inline double branch_shift(double principal, const double* guide) {
    if (!guide) return 0.0;
    return 2.0 * kPi * std::round((*guide - principal) / (2.0 * kPi));
}

// Transport anchor of one spring: local (flip-adjusted) frames of the two
// member edges at the configuration the FrameSet belongs to.
struct SpringAnchor {
    Vec3<double> d1e, te, d1f, tf;
};

SpringAnchor spring_anchor(const FrameSet& frames, const BendTwistSpring& s) {
    const SpringFrames lf = local_spring_frames(frames, s);
    return {Vec3<double>::from(lf.in.d1), Vec3<double>::from(lf.in.t), Vec3<double>::from(lf.out.d1),
            Vec3<double>::from(lf.out.t)};
}

template <class T>
struct SpringKinematics {
    T le, lf;
    Vec3<T> te, tf;
    Vec3<T> m1e, m2e, m1f, m2f;
    Vec3<T> kb;
    T chi, k1, k2, tau;
};

// Recomputes frames by parallel transport from the anchor onto the tangents
// implied by the local positions, then evaluates all strain measures. Local
// DOFs: p0 (far node of the in-edge), p1 (center), p2 (far node of the
// out-edge) and the flip-adjusted twist angles.
template <class T>
SpringKinematics<T> spring_kinematics(const Vec3<T>& p0, const Vec3<T>& p1, const Vec3<T>& p2,
                                      const T& theta_e, const T& theta_f, const SpringAnchor& a,
                                      const double* ref_twist_guide) {
    using std::cos;
    using std::sin;
    SpringKinematics<T> k;
    const Vec3<T> e = p1 - p0;
    const Vec3<T> f = p2 - p1;
    k.le = e.norm();
    k.lf = f.norm();
    k.te = e / k.le;
    k.tf = f / k.lf;

    const Vec3<T> a_d1e{T(a.d1e.x), T(a.d1e.y), T(a.d1e.z)};
    const Vec3<T> a_te{T(a.te.x), T(a.te.y), T(a.te.z)};
    const Vec3<T> a_d1f{T(a.d1f.x), T(a.d1f.y), T(a.d1f.z)};
    const Vec3<T> a_tf{T(a.tf.x), T(a.tf.y), T(a.tf.z)};
    const Vec3<T> d1e = parallel_transport(a_d1e, a_te, k.te);
    const Vec3<T> d2e = k.te.cross(d1e);
    const Vec3<T> d1f = parallel_transport(a_d1f, a_tf, k.tf);
    const Vec3<T> d2f = k.tf.cross(d1f);

    const T ce = cos(theta_e), se = sin(theta_e);
    const T cf = cos(theta_f), sf = sin(theta_f);
    k.m1e = ce * d1e + se * d2e;
    k.m2e = -(se)*d1e + ce * d2e;
    k.m1f = cf * d1f + sf * d2f;
    k.m2f = -(sf)*d1f + cf * d2f;

    k.chi = T(1.0) + k.te.dot(k.tf);
    if (!(k.chi > T(1e-12))) throw DegenerateGeometryError("bend/twist spring: edges are antiparallel");
    k.kb = T(2.0) * k.te.cross(k.tf) / k.chi;
    k.k1 = T(0.5) * (k.m2e + k.m2f).dot(k.kb);
    k.k2 = T(0.5) * (k.m1e + k.m1f).dot(k.kb);

    const Vec3<T> d_tmp = parallel_transport(d1e, k.te, k.tf);
    T dm_ref = signed_angle(d_tmp, d1f, k.tf);
    dm_ref += T(branch_shift(scalar_value(dm_ref), ref_twist_guide));
    k.tau = theta_f - theta_e + dm_ref;
    return k;
}

// Gradient of the spring's bending+twisting energy with respect to the 11
// local DOFs [p0, theta_e, p1, theta_f, p2]. The transport of the reference
// frames from the anchor acquires a rotation about the tangent; that
// rotation acts on the energy exactly like a twist-angle shift, giving the
// u-terms below. They vanish when evaluated at the anchor itself but their
// derivatives are part of the Hessian.
template <class T>
std::array<T, 11> spring_gradient(const Vec3<T>& p0, const Vec3<T>& p1, const Vec3<T>& p2,
                                  const T& theta_e, const T& theta_f, const SpringAnchor& a,
                                  double ei_over_dl, double gj_over_dl, double kbar1, double kbar2,
                                  double taubar, const double* ref_twist_guide) {
    const SpringKinematics<T> k =
        spring_kinematics(p0, p1, p2, theta_e, theta_f, a, ref_twist_guide);

    const Vec3<T> ttil = (k.te + k.tf) / k.chi;
    const Vec3<T> m1til = (k.m1e + k.m1f) / k.chi;
    const Vec3<T> m2til = (k.m2e + k.m2f) / k.chi;

    const Vec3<T> gk1_e = (-(k.k1) * ttil + k.tf.cross(m2til)) / k.le;
    const Vec3<T> gk1_f = (-(k.k1) * ttil - k.te.cross(m2til)) / k.lf;
    const Vec3<T> gk2_e = (-(k.k2) * ttil + k.tf.cross(m1til)) / k.le;
    const Vec3<T> gk2_f = (-(k.k2) * ttil - k.te.cross(m1til)) / k.lf;
    const T dk1_dthe = T(-0.5) * k.m1e.dot(k.kb);
    const T dk1_dthf = T(-0.5) * k.m1f.dot(k.kb);
    const T dk2_dthe = T(0.5) * k.m2e.dot(k.kb);
    const T dk2_dthf = T(0.5) * k.m2f.dot(k.kb);
    const Vec3<T> gtau_e = k.kb / (T(2.0) * k.le);
    const Vec3<T> gtau_f = k.kb / (T(2.0) * k.lf);

    const T w1 = T(ei_over_dl) * (k.k1 - T(kbar1));
    const T w2 = T(ei_over_dl) * (k.k2 - T(kbar2));
    const T wt = T(gj_over_dl) * (k.tau - T(taubar));

    const T dE_dthe = w1 * dk1_dthe + w2 * dk2_dthe - wt;
    const T dE_dthf = w1 * dk1_dthf + w2 * dk2_dthf + wt;

    Vec3<T> ge = w1 * gk1_e + w2 * gk2_e + wt * gtau_e;
    Vec3<T> gf = w1 * gk1_f + w2 * gk2_f + wt * gtau_f;

    const Vec3<T> a_te{T(a.te.x), T(a.te.y), T(a.te.z)};
    const Vec3<T> a_tf{T(a.tf.x), T(a.tf.y), T(a.tf.z)};
    const Vec3<T> ue = a_te.cross(k.te) / (T(1.0) + a_te.dot(k.te));
    const Vec3<T> uf = a_tf.cross(k.tf) / (T(1.0) + a_tf.dot(k.tf));
    ge += dE_dthe * (-(T(1.0) / k.le) * (ue - k.te.dot(ue) * k.te));
    gf += dE_dthf * (-(T(1.0) / k.lf) * (uf - k.tf.dot(uf) * k.tf));

    std::array<T, 11> g;
    g[0] = -(ge.x); g[1] = -(ge.y); g[2] = -(ge.z);
    g[3] = dE_dthe;
    g[4] = ge.x - gf.x; g[5] = ge.y - gf.y; g[6] = ge.z - gf.z;
    g[7] = dE_dthf;
    g[8] = gf.x; g[9] = gf.y; g[10] = gf.z;
    return g;
}

struct SpringDofs {
    Vec3<double> p0, p1, p2;
    double theta_e, theta_f;
    std::array<int, 11> slots;   // global DOF index per local slot
    std::array<double, 11> sign; // -1 on a flipped twist slot
};

SpringDofs gather_spring_dofs(const Eigen::VectorXd& q, const RodNetwork& net, const BendTwistSpring& s) {
    SpringDofs d;
    d.p0 = Vec3<double>::from(net.node_position(q, s.node_in));
    d.p1 = Vec3<double>::from(net.node_position(q, s.center_node));
    d.p2 = Vec3<double>::from(net.node_position(q, s.node_out));
    d.theta_e = (s.flip_in ? -1.0 : 1.0) * net.twist_angle(q, s.edge_in);
    d.theta_f = (s.flip_out ? -1.0 : 1.0) * net.twist_angle(q, s.edge_out);
    d.sign.fill(1.0);
    for (int k = 0; k < 3; ++k) {
        d.slots[k] = net.position_slot(s.node_in, k);
        d.slots[4 + k] = net.position_slot(s.center_node, k);
        d.slots[8 + k] = net.position_slot(s.node_out, k);
    }
    d.slots[3] = net.twist_slot(s.edge_in);
    d.slots[7] = net.twist_slot(s.edge_out);
    if (s.flip_in) d.sign[3] = -1.0;
    if (s.flip_out) d.sign[7] = -1.0;
    return d;
}

}  // namespace

StiffnessSet make_stiffness(const RodNetwork& network, double youngs_modulus, double poisson_ratio,
                            double radius, double rigid_multiplier) {
    const double r2 = radius * radius;
    const double r4 = r2 * r2;
    const double shear_modulus = youngs_modulus / (2.0 * (1.0 + poisson_ratio));
    const double ea = youngs_modulus * kPi * r2;
    const double ei = 0.25 * kPi * youngs_modulus * r4;
    const double gj = 0.5 * kPi * shear_modulus * r4;

    StiffnessSet st;
    st.rigid_multiplier = rigid_multiplier;
    st.EA.resize(network.edge_count);
    for (int e = 0; e < network.edge_count; ++e)
        st.EA[e] = network.rigid_edge_flags[e] ? ea * rigid_multiplier : ea;
    st.EI.resize(network.bendtwist_springs.size());
    st.GJ.resize(network.bendtwist_springs.size());
    for (size_t i = 0; i < network.bendtwist_springs.size(); ++i) {
        const auto& s = network.bendtwist_springs[i];
        const bool rigid = network.rigid_edge_flags[s.edge_in] || network.rigid_edge_flags[s.edge_out];
        st.EI[i] = rigid ? ei * rigid_multiplier : ei;
        st.GJ[i] = rigid ? gj * rigid_multiplier : gj;
    }
    return st;
}

SpringStrains spring_strains(const RodNetwork& network, const Eigen::VectorXd& q, const FrameSet& frames,
                             int spring_index, const double* ref_twist_guide) {
    const auto& s = network.bendtwist_springs[spring_index];
    const SpringDofs d = gather_spring_dofs(q, network, s);
    const SpringAnchor a = spring_anchor(frames, s);
    const auto k =
        spring_kinematics<double>(d.p0, d.p1, d.p2, d.theta_e, d.theta_f, a, ref_twist_guide);
    SpringStrains out;
    out.kappa1 = k.k1;
    out.kappa2 = k.k2;
    out.tau = k.tau;
    out.dm_ref = k.tau - (d.theta_f - d.theta_e);
    return out;
}

NaturalStrains natural_strains_from_configuration(const RodNetwork& network, const Eigen::VectorXd& q,
                                                  const FrameSet& frames) {
    NaturalStrains n;
    n.stretch_ref_lengths.resize(network.edge_count);
    for (int e = 0; e < network.edge_count; ++e)
        n.stretch_ref_lengths[e] = network.edge_vector(q, e).norm();
    const size_t ns = network.bendtwist_springs.size();
    n.natural_curvature_1.resize(ns);
    n.natural_curvature_2.resize(ns);
    n.natural_twists.resize(ns);
    for (size_t i = 0; i < ns; ++i) {
        const SpringStrains s = spring_strains(network, q, frames, static_cast<int>(i));
        n.natural_curvature_1[i] = s.kappa1;
        n.natural_curvature_2[i] = s.kappa2;
        n.natural_twists[i] = s.tau;
    }
    return n;
}

double total_energy(const Eigen::VectorXd& q, const RodNetwork& network, const NaturalStrains& natural,
                    const StiffnessSet& stiffness, const FrameSet& frames,
                    const std::vector<double>* ref_twist_guide) {
    double energy = 0.0;
    for (int e : network.stretch_springs) {
        const double lbar = natural.stretch_ref_lengths[e];
        const double eps = network.edge_vector(q, e).norm() / lbar - 1.0;
        energy += 0.5 * stiffness.EA[e] * eps * eps * lbar;
    }
    for (size_t i = 0; i < network.bendtwist_springs.size(); ++i) {
        const SpringStrains s =
            spring_strains(network, q, frames, static_cast<int>(i),
                           ref_twist_guide ? &(*ref_twist_guide)[i] : nullptr);
        const double dl = network.voronoi_lengths[i];
        const double dk1 = s.kappa1 - natural.natural_curvature_1[i];
        const double dk2 = s.kappa2 - natural.natural_curvature_2[i];
        const double dtau = s.tau - natural.natural_twists[i];
        energy += 0.5 * stiffness.EI[i] / dl * (dk1 * dk1 + dk2 * dk2);
        energy += 0.5 * stiffness.GJ[i] / dl * dtau * dtau;
    }
    return energy;
}

void add_energy_gradient(const Eigen::VectorXd& q, const RodNetwork& network,
                         const NaturalStrains& natural, const StiffnessSet& stiffness,
                         const FrameSet& frames, Eigen::VectorXd& grad,
                         const std::vector<double>* ref_twist_guide) {
    for (int e : network.stretch_springs) {
        const Eigen::Vector3d ev = network.edge_vector(q, e);
        const double len = ev.norm();
        const double lbar = natural.stretch_ref_lengths[e];
        const Eigen::Vector3d g = stiffness.EA[e] * (len / lbar - 1.0) * (ev / len);
        grad.segment<3>(network.position_slot(network.edges[e][0])) -= g;
        grad.segment<3>(network.position_slot(network.edges[e][1])) += g;
    }
    for (size_t i = 0; i < network.bendtwist_springs.size(); ++i) {
        const auto& s = network.bendtwist_springs[i];
        const SpringDofs d = gather_spring_dofs(q, network, s);
        const SpringAnchor a = spring_anchor(frames, s);
        const double dl = network.voronoi_lengths[i];
        const auto g = spring_gradient<double>(d.p0, d.p1, d.p2, d.theta_e, d.theta_f, a,
                                               stiffness.EI[i] / dl, stiffness.GJ[i] / dl,
                                               natural.natural_curvature_1[i],
                                               natural.natural_curvature_2[i], natural.natural_twists[i],
                                               ref_twist_guide ? &(*ref_twist_guide)[i] : nullptr);
        for (int k = 0; k < 11; ++k) grad[d.slots[k]] += d.sign[k] * g[k];
    }
}

void add_energy_hessian(const Eigen::VectorXd& q, const RodNetwork& network,
                        const NaturalStrains& natural, const StiffnessSet& stiffness,
                        const FrameSet& frames, std::vector<Eigen::Triplet<double>>& triplets,
                        const std::vector<double>* ref_twist_guide) {
    for (int e : network.stretch_springs) {
        const Eigen::Vector3d ev = network.edge_vector(q, e);
        const double len = ev.norm();
        const double lbar = natural.stretch_ref_lengths[e];
        const Eigen::Vector3d t = ev / len;
        const double eps = len / lbar - 1.0;
        const Eigen::Matrix3d h = stiffness.EA[e] * (t * t.transpose() / lbar +
                                                     eps / len * (Eigen::Matrix3d::Identity() - t * t.transpose()));
        const int s0 = network.position_slot(network.edges[e][0]);
        const int s1 = network.position_slot(network.edges[e][1]);
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                triplets.emplace_back(s0 + r, s0 + c, h(r, c));
                triplets.emplace_back(s1 + r, s1 + c, h(r, c));
                triplets.emplace_back(s0 + r, s1 + c, -h(r, c));
                triplets.emplace_back(s1 + r, s0 + c, -h(r, c));
            }
        }
    }

    using D = Dual<11>;
    for (size_t i = 0; i < network.bendtwist_springs.size(); ++i) {
        const auto& s = network.bendtwist_springs[i];
        const SpringDofs d = gather_spring_dofs(q, network, s);
        const SpringAnchor a = spring_anchor(frames, s);
        const double dl = network.voronoi_lengths[i];

        const Vec3<D> p0{D::seed(d.p0.x, 0), D::seed(d.p0.y, 1), D::seed(d.p0.z, 2)};
        const Vec3<D> p1{D::seed(d.p1.x, 4), D::seed(d.p1.y, 5), D::seed(d.p1.z, 6)};
        const Vec3<D> p2{D::seed(d.p2.x, 8), D::seed(d.p2.y, 9), D::seed(d.p2.z, 10)};
        const D the = D::seed(d.theta_e, 3);
        const D thf = D::seed(d.theta_f, 7);

        const auto g = spring_gradient<D>(p0, p1, p2, the, thf, a, stiffness.EI[i] / dl,
                                          stiffness.GJ[i] / dl, natural.natural_curvature_1[i],
                                          natural.natural_curvature_2[i], natural.natural_twists[i],
                                          ref_twist_guide ? &(*ref_twist_guide)[i] : nullptr);
        for (int r = 0; r < 11; ++r)
            for (int c = 0; c < 11; ++c)
                triplets.emplace_back(d.slots[r], d.slots[c], d.sign[r] * d.sign[c] * g[r].d[c]);
    }
}

Eigen::VectorXd energy_gradient(const Eigen::VectorXd& q, const RodNetwork& network,
                                const NaturalStrains& natural, const StiffnessSet& stiffness,
                                const FrameSet& frames, const std::vector<double>* ref_twist_guide) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(network.ndof());
    add_energy_gradient(q, network, natural, stiffness, frames, grad, ref_twist_guide);
    return grad;
}

Eigen::SparseMatrix<double> energy_hessian(const Eigen::VectorXd& q, const RodNetwork& network,
                                           const NaturalStrains& natural, const StiffnessSet& stiffness,
                                           const FrameSet& frames,
                                           const std::vector<double>* ref_twist_guide) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(36 * network.stretch_springs.size() + 121 * network.bendtwist_springs.size());
    add_energy_hessian(q, network, natural, stiffness, frames, triplets, ref_twist_guide);
    Eigen::SparseMatrix<double> h(network.ndof(), network.ndof());
    h.setFromTriplets(triplets.begin(), triplets.end());
    return h;
}

std::vector<double> continuous_reference_twists(const RodNetwork& network, const FrameSet& frames,
                                                const std::vector<double>& guide) {
    std::vector<double> out(network.bendtwist_springs.size());
    for (size_t i = 0; i < network.bendtwist_springs.size(); ++i) {
        const double raw = compute_reference_twist(network, frames, network.bendtwist_springs[i]);
        out[i] = raw + branch_shift(raw, &guide[i]);
    }
    return out;
}

}  // namespace rodsim

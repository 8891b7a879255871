#ifndef RODSIM_STRAINS_HPP
#define RODSIM_STRAINS_HPP

#include <utility>

#include <Eigen/Core>

#include "rodsim/frames.hpp"
#include "rodsim/network.hpp"
#include "rodsim/vec3.hpp"

namespace rodsim {

// epsilon = |e| / |e_bar| - 1
inline double axial_stretch(const Eigen::VectorXd& q, const RodNetwork& network, int edge) {
    return network.edge_vector(q, edge).norm() / network.undeformed_edge_lengths[edge] - 1.0;
}

// (kappa b) = 2 e_in x e_out / (|e_in||e_out| + e_in . e_out); its norm is
// 2 tan(phi/2) for turning angle phi.
template <class T>
Vec3<T> curvature_binormal(const Vec3<T>& e_in, const Vec3<T>& e_out) {
    const T le = e_in.norm();
    const T lf = e_out.norm();
    const T denom = le * lf + e_in.dot(e_out);
    if (!(denom > T(1e-12) * le * lf))
        throw DegenerateGeometryError("curvature_binormal: edges are antiparallel");
    return T(2.0) * e_in.cross(e_out) / denom;
}

inline Eigen::Vector3d curvature_binormal(const Eigen::Vector3d& e_in, const Eigen::Vector3d& e_out) {
    const auto r = curvature_binormal(Vec3<double>::from(e_in), Vec3<double>::from(e_out));
    return {r.x, r.y, r.z};
}

// Scalar curvatures along the material directors. Note the second component
// carries no minus sign in this formulation; natural curvatures must be
// initialized with the same convention.
template <class T>
std::pair<T, T> material_curvatures(const Vec3<T>& kb, const Vec3<T>& m1_in, const Vec3<T>& m2_in,
                                    const Vec3<T>& m1_out, const Vec3<T>& m2_out) {
    return {T(0.5) * (m2_in + m2_out).dot(kb), T(0.5) * (m1_in + m1_out).dot(kb)};
}

// tau = theta_out - theta_in + dm_ref, with a flipped edge contributing its
// twist angle negated.
inline double discrete_twist(double theta_in, double theta_out, double dm_ref, bool flip_in,
                             bool flip_out) {
    const double ti = flip_in ? -theta_in : theta_in;
    const double to = flip_out ? -theta_out : theta_out;
    return to - ti + dm_ref;
}

// m1 = d1 cos(theta) + d2 sin(theta), m2 = -d1 sin(theta) + d2 cos(theta)
inline std::pair<Eigen::Vector3d, Eigen::Vector3d> material_frame(const EdgeFrame& frame, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * frame.d1 + s * frame.d2, -s * frame.d1 + c * frame.d2};
}

}  // namespace rodsim

#endif

#ifndef RODSIM_FRAMES_HPP
#define RODSIM_FRAMES_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "rodsim/vec3.hpp"

namespace rodsim {

struct DegenerateGeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Minimal rotation taking unit vector t_from onto unit vector t_to, applied
// to d. Rodrigues form, algebraically identical to the five-step
// construction (b, b_hat, n1, n2, d_tmp) but smooth through the parallel
// limit, which the Hessian duals require. Antiparallel tangents have no
// preferred rotation axis and are rejected.
template <class T>
Vec3<T> parallel_transport(const Vec3<T>& d, const Vec3<T>& t_from, const Vec3<T>& t_to) {
    const Vec3<T> b = t_from.cross(t_to);
    const T denom = T(1.0) + t_from.dot(t_to);
    if (!(denom > T(1e-10))) throw DegenerateGeometryError("parallel_transport: antiparallel tangents");
    return d + b.cross(d) + b.cross(b.cross(d)) / denom;
}

inline Eigen::Vector3d parallel_transport(const Eigen::Vector3d& d, const Eigen::Vector3d& t_from,
                                          const Eigen::Vector3d& t_to) {
    const Vec3<double> r =
        parallel_transport(Vec3<double>::from(d), Vec3<double>::from(t_from), Vec3<double>::from(t_to));
    return {r.x, r.y, r.z};
}

// Signed angle from u to v about the unit axis n, in (-pi, pi].
template <class T>
T signed_angle(const Vec3<T>& u, const Vec3<T>& v, const Vec3<T>& n) {
    using std::atan2;  // ADL picks the dual overload for dual scalars
    return atan2(u.cross(v).dot(n), u.dot(v));
}

inline double signed_angle(const Eigen::Vector3d& u, const Eigen::Vector3d& v, const Eigen::Vector3d& n) {
    return signed_angle(Vec3<double>::from(u), Vec3<double>::from(v), Vec3<double>::from(n));
}

// Orthonormal adapted frame {d1, d2, t} on one edge.
struct EdgeFrame {
    Eigen::Vector3d d1;
    Eigen::Vector3d d2;
    Eigen::Vector3d t;
};

using FrameSet = std::vector<EdgeFrame>;

// Reference frame at t=0: d1 is the component of a fixed global seed vector
// orthogonal to the tangent (x axis, falling back to y when nearly
// collinear). Only twist differences matter, so any adapted choice works.
EdgeFrame initial_frame(const Eigen::Vector3d& tangent);

}  // namespace rodsim

#endif

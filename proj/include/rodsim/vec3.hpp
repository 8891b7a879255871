#ifndef RODSIM_VEC3_HPP
#define RODSIM_VEC3_HPP

#include <cmath>

#include <Eigen/Core>

namespace rodsim {

// Minimal fixed-size 3-vector over an arbitrary scalar type. The elastic
// kernels are templated over the scalar so the same code runs on plain
// doubles (force assembly) and on forward-mode dual numbers (Hessian
// assembly); Eigen is used everywhere else.
template <class T>
struct Vec3 {
    T x{}, y{}, z{};

    Vec3() = default;
    Vec3(T a, T b, T c) : x(a), y(b), z(c) {}

    static Vec3 from(const Eigen::Vector3d& v) { return {T(v.x()), T(v.y()), T(v.z())}; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    friend Vec3 operator*(const T& s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    Vec3 operator*(const T& s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(const T& s) const { return {x / s, y / s, z / s}; }

    T dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    T squared_norm() const { return dot(*this); }
    T norm() const { using std::sqrt; return sqrt(squared_norm()); }
    Vec3 normalized() const { return *this / norm(); }
};

}  // namespace rodsim

#endif

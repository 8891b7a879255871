#include "rodsim/frames.hpp"

namespace rodsim {

EdgeFrame initial_frame(const Eigen::Vector3d& tangent) {
    Eigen::Vector3d seed = Eigen::Vector3d::UnitX();
    if (std::abs(tangent.dot(seed)) > 0.99) seed = Eigen::Vector3d::UnitY();
    EdgeFrame f;
    f.t = tangent;
    f.d1 = (seed - seed.dot(tangent) * tangent).normalized();
    f.d2 = tangent.cross(f.d1);
    return f;
}

}  // namespace rodsim

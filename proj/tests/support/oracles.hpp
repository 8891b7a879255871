#ifndef RODSIM_TESTS_ORACLES_HPP
#define RODSIM_TESTS_ORACLES_HPP

#include <functional>
#include <random>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace rodsim::test {

inline std::mt19937& rng() {
    static std::mt19937 gen(20240811u);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng());
}

inline Eigen::Vector3d random_unit() {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::Vector3d v(dist(rng()), dist(rng()), dist(rng()));
    return v.normalized();
}

inline Eigen::Vector3d random_vector(double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    return {dist(rng()), dist(rng()), dist(rng())};
}

// central finite differences of a scalar function of a DOF vector
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& q, double h = 1e-7) {
    Eigen::VectorXd g(q.size());
    Eigen::VectorXd qp = q;
    for (int i = 0; i < q.size(); ++i) {
        const double saved = q[i];
        qp[i] = saved + h;
        const double fp = f(qp);
        qp[i] = saved - h;
        const double fm = f(qp);
        qp[i] = saved;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// central finite differences of a vector function, column by column
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& q, double h = 1e-6) {
    const Eigen::VectorXd f0 = f(q);
    Eigen::MatrixXd jac(f0.size(), q.size());
    Eigen::VectorXd qp = q;
    for (int i = 0; i < q.size(); ++i) {
        const double saved = q[i];
        qp[i] = saved + h;
        const Eigen::VectorXd fp = f(qp);
        qp[i] = saved - h;
        const Eigen::VectorXd fm = f(qp);
        qp[i] = saved;
        jac.col(i) = (fp - fm) / (2.0 * h);
    }
    return jac;
}

// Minimal rotation taking a to b, as a quaternion.
inline Eigen::Quaterniond minimal_rotation(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return Eigen::Quaterniond::FromTwoVectors(a, b);
}

}  // namespace rodsim::test

#endif

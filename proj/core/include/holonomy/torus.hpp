#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace holonomy {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Canonical representative of an angle in [0, 2π). Idempotent.
inline double wrap_angle(double a) {
    double r = std::fmod(a, two_pi);
    if (r < 0.0) r += two_pi;
    // fmod can return two_pi - eps rounded up to two_pi after the correction
    if (r >= two_pi) r = 0.0;
    return r;
}

inline Eigen::VectorXd wrap_angles(const Eigen::VectorXd& phi) {
    Eigen::VectorXd out(phi.size());
    for (Eigen::Index i = 0; i < phi.size(); ++i) out[i] = wrap_angle(phi[i]);
    return out;
}

/// Distance on the circle, in [0, π].
inline double angle_distance(double a, double b) {
    double d = wrap_angle(a - b);
    return std::min(d, two_pi - d);
}

inline double angle_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        worst = std::max(worst, angle_distance(a[i], b[i]));
    return worst;
}

}  // namespace holonomy

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace holonomy {

/// One piece of a piecewise-C1 parameter curve in Sigma.
struct PathSegment {
    enum class Kind { Line, Arc, SmoothstepLine };

    Kind kind = Kind::Line;
    double duration = 0.0;

    // Line / SmoothstepLine
    Eigen::VectorXd start, end;
    int steepness = 1;  // smoothstep polynomial order (degree 2*steepness + 1)

    // Arc in the (axis1, axis2) coordinate plane, 0-based axes
    Eigen::VectorXd center;
    double radius = 0.0;
    int axis1 = 0, axis2 = 1;
    double start_angle = 0.0, sweep = 0.0;

    static PathSegment line(Eigen::VectorXd a, Eigen::VectorXd b, double duration);
    static PathSegment smoothstep_line(Eigen::VectorXd a, Eigen::VectorXd b, double duration,
                                       int steepness = 1);
    static PathSegment arc(Eigen::VectorXd center, double radius, int axis1, int axis2,
                           double start_angle, double sweep, double duration);

    int dim() const;
    Eigen::VectorXd value_at(double u) const;     // u in [0, 1]
    Eigen::VectorXd velocity_at(double u) const;  // d/dt = d/du / duration
};

/// Piecewise curve xi(t), t in [0, T]. Continuous across joints (validated),
/// C1 inside segments; derivatives at breakpoints are right-sided (left at T).
class ParameterPath {
public:
    explicit ParameterPath(std::vector<PathSegment> segments);

    int dim() const { return dim_; }
    double duration() const { return total_; }
    const std::vector<PathSegment>& segments() const { return segments_; }

    Eigen::VectorXd value(double t) const;
    Eigen::VectorXd velocity(double t) const;

private:
    std::pair<int, double> locate(double t) const;  // segment index, local u

    std::vector<PathSegment> segments_;
    std::vector<double> offsets_;  // cumulative start times
    double total_ = 0.0;
    int dim_ = 0;
};

/// A drive is what the flows actually consume: an evaluable curve with
/// velocity. Paths convert to drives; tests also build reparametrized ones.
struct Drive {
    std::function<Eigen::VectorXd(double)> value;
    std::function<Eigen::VectorXd(double)> velocity;
    double duration = 0.0;
};

Drive make_drive(const ParameterPath& path);

/// Drive following the same image curve under a monotone time change s(t),
/// s(0) = 0, s(new_duration) = base duration.
Drive reparametrize(Drive base, std::function<double(double)> s,
                    std::function<double(double)> s_dot, double new_duration);

/// Generalized smoothstep ramp of order p: polynomial of degree 2p+1 with
/// S(0)=0, S(1)=1 and p vanishing derivatives at both ends.
double smoothstep_ramp(int order, double u);
double smoothstep_ramp_deriv(int order, double u);

}  // namespace holonomy

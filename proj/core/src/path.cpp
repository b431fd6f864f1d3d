#include "holonomy/path.hpp"

#include <cmath>
#include <stdexcept>

namespace holonomy {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
    return r;
}

}  // namespace

double smoothstep_ramp(int order, double u) {
    if (order < 1) throw std::invalid_argument("smoothstep: order must be >= 1");
    double acc = 0.0;
    for (int n = 0; n <= order; ++n)
        acc += binom(order + n, n) * binom(2 * order + 1, order - n) * std::pow(-u, n);
    return acc * std::pow(u, order + 1);
}

double smoothstep_ramp_deriv(int order, double u) {
    if (order < 1) throw std::invalid_argument("smoothstep: order must be >= 1");
    return (2 * order + 1) * binom(2 * order, order) * std::pow(u * (1.0 - u), order);
}

PathSegment PathSegment::line(Eigen::VectorXd a, Eigen::VectorXd b, double duration) {
    PathSegment s;
    s.kind = Kind::Line;
    s.start = std::move(a);
    s.end = std::move(b);
    s.duration = duration;
    return s;
}

PathSegment PathSegment::smoothstep_line(Eigen::VectorXd a, Eigen::VectorXd b, double duration,
                                         int steepness) {
    PathSegment s = line(std::move(a), std::move(b), duration);
    s.kind = Kind::SmoothstepLine;
    s.steepness = steepness;
    return s;
}

PathSegment PathSegment::arc(Eigen::VectorXd center, double radius, int axis1, int axis2,
                             double start_angle, double sweep, double duration) {
    PathSegment s;
    s.kind = Kind::Arc;
    s.center = std::move(center);
    s.radius = radius;
    s.axis1 = axis1;
    s.axis2 = axis2;
    s.start_angle = start_angle;
    s.sweep = sweep;
    s.duration = duration;
    return s;
}

int PathSegment::dim() const {
    return kind == Kind::Arc ? static_cast<int>(center.size()) : static_cast<int>(start.size());
}

Eigen::VectorXd PathSegment::value_at(double u) const {
    switch (kind) {
        case Kind::Line:
            return start + u * (end - start);
        case Kind::SmoothstepLine:
            return start + smoothstep_ramp(steepness, u) * (end - start);
        case Kind::Arc: {
            Eigen::VectorXd p = center;
            double theta = start_angle + sweep * u;
            p[axis1] += radius * std::cos(theta);
            p[axis2] += radius * std::sin(theta);
            return p;
        }
    }
    throw std::logic_error("unreachable");
}

Eigen::VectorXd PathSegment::velocity_at(double u) const {
    switch (kind) {
        case Kind::Line:
            return (end - start) / duration;
        case Kind::SmoothstepLine:
            return (smoothstep_ramp_deriv(steepness, u) / duration) * (end - start);
        case Kind::Arc: {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(center.size());
            double theta = start_angle + sweep * u;
            double rate = radius * sweep / duration;
            v[axis1] = -rate * std::sin(theta);
            v[axis2] = rate * std::cos(theta);
            return v;
        }
    }
    throw std::logic_error("unreachable");
}

ParameterPath::ParameterPath(std::vector<PathSegment> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty()) throw std::invalid_argument("path: needs at least one segment");
    dim_ = segments_.front().dim();
    double t = 0.0;
    for (size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (s.duration <= 0.0) throw std::invalid_argument("path: segment duration must be > 0");
        if (s.dim() != dim_) throw std::invalid_argument("path: inconsistent segment dimensions");
        if (s.kind == PathSegment::Kind::Arc &&
            (s.axis1 < 0 || s.axis1 >= dim_ || s.axis2 < 0 || s.axis2 >= dim_ || s.axis1 == s.axis2))
            throw std::invalid_argument("path: arc axes out of range");
        if (i > 0) {
            double gap = (segments_[i - 1].value_at(1.0) - s.value_at(0.0)).norm();
            if (gap > 1e-12)
                throw std::invalid_argument("path: discontinuous at segment joint");
        }
        offsets_.push_back(t);
        t += s.duration;
    }
    total_ = t;
}

std::pair<int, double> ParameterPath::locate(double t) const {
    if (t < 0.0 || t > total_ + 1e-12)
        throw std::invalid_argument("path: time outside [0, T]");
    t = std::min(t, total_);
    // right-sided convention: pick the segment starting at t, except at t = T
    int idx = static_cast<int>(segments_.size()) - 1;
    for (size_t i = 0; i + 1 < segments_.size(); ++i) {
        if (t < offsets_[i + 1]) {
            idx = static_cast<int>(i);
            break;
        }
    }
    double u = (t - offsets_[idx]) / segments_[idx].duration;
    return {idx, std::clamp(u, 0.0, 1.0)};
}

Eigen::VectorXd ParameterPath::value(double t) const {
    auto [i, u] = locate(t);
    return segments_[i].value_at(u);
}

Eigen::VectorXd ParameterPath::velocity(double t) const {
    auto [i, u] = locate(t);
    return segments_[i].velocity_at(u);
}

Drive make_drive(const ParameterPath& path) {
    Drive d;
    d.value = [path](double t) { return path.value(t); };
    d.velocity = [path](double t) { return path.velocity(t); };
    d.duration = path.duration();
    return d;
}

Drive reparametrize(Drive base, std::function<double(double)> s,
                    std::function<double(double)> s_dot, double new_duration) {
    Drive d;
    d.value = [base, s](double t) { return base.value(s(t)); };
    d.velocity = [base, s, s_dot](double t) {
        return (base.velocity(s(t)) * s_dot(t)).eval();
    };
    d.duration = new_duration;
    return d;
}

}  // namespace holonomy

#include "holonomy/connection.hpp"

#include <cmath>
#include <stdexcept>

namespace holonomy {

HarmonicMap harmonics(const TrigPoly& poly, int m) {
    HarmonicMap out;
    const std::complex<double> i_unit(0.0, 1.0);
    for (const auto& t : poly) {
        if (t.kind == AngularKind::Constant) {
            out[HarmonicKey(m, 0)] += t.coeff;
            continue;
        }
        if (t.harmonic.size() != m)
            throw std::invalid_argument("trig term: harmonic dimension mismatch");
        HarmonicKey plus(t.harmonic.data(), t.harmonic.data() + m);
        HarmonicKey minus(m);
        for (int j = 0; j < m; ++j) minus[j] = -plus[j];
        if (t.kind == AngularKind::Cos) {
            out[plus] += 0.5 * t.coeff;
            out[minus] += 0.5 * t.coeff;
        } else {
            out[plus] += -0.5 * i_unit * t.coeff;
            out[minus] += 0.5 * i_unit * t.coeff;
        }
    }
    return out;
}

double trig_eval(const TrigPoly& poly, const Eigen::VectorXd& phi) {
    double acc = 0.0;
    for (const auto& t : poly) {
        switch (t.kind) {
            case AngularKind::Constant:
                acc += t.coeff;
                break;
            case AngularKind::Cos:
                acc += t.coeff * std::cos(t.harmonic.cast<double>().dot(phi));
                break;
            case AngularKind::Sin:
                acc += t.coeff * std::sin(t.harmonic.cast<double>().dot(phi));
                break;
        }
    }
    return acc;
}

ConnectionSpec::ConnectionSpec(int m, int d, std::vector<Term> terms)
    : m_(m), d_(d), terms_(std::move(terms)) {
    if (m < 1 || d < 1)
        throw std::invalid_argument("connection: dimensions must be positive");
    for (const auto& t : terms_) {
        if (t.target < 0 || t.target >= m)
            throw std::invalid_argument("connection: term target index out of range");
        if (t.param < 0 || t.param >= d)
            throw std::invalid_argument("connection: term parameter index out of range");
        if (t.amplitude.nvars() != d)
            throw std::invalid_argument("connection: amplitude variable count must equal d");
        if (t.kind != AngularKind::Constant && t.harmonic.size() != m)
            throw std::invalid_argument("connection: harmonic dimension must equal m");
    }
}

bool ConnectionSpec::is_constant() const {
    for (const auto& t : terms_)
        if (t.kind != AngularKind::Constant) return false;
    return true;
}

Eigen::VectorXi ConnectionSpec::max_abs_harmonic() const {
    Eigen::VectorXi nmax = Eigen::VectorXi::Zero(m_);
    for (const auto& t : terms_) {
        if (t.kind == AngularKind::Constant) continue;
        for (int i = 0; i < m_; ++i)
            nmax[i] = std::max(nmax[i], std::abs(t.harmonic[i]));
    }
    return nmax;
}

double ConnectionSpec::amplitude_bound(double sigma_bound) const {
    double bound = 0.0;
    for (const auto& t : terms_) {
        double amp = 0.0;
        for (const auto& mono : t.amplitude.terms())
            amp += std::abs(mono.coeff) * std::pow(std::max(1.0, sigma_bound),
                                                   static_cast<double>(mono.powers.sum()));
        bound += amp;
    }
    return bound;
}

void ConnectionSpec::check_dims(const Eigen::VectorXd& sigma, const Eigen::VectorXd& phi) const {
    if (sigma.size() != d_) throw std::invalid_argument("connection: sigma dimension mismatch");
    if (phi.size() != m_) throw std::invalid_argument("connection: phi dimension mismatch");
}

Eigen::MatrixXd ConnectionSpec::eval(const Eigen::VectorXd& sigma,
                                     const Eigen::VectorXd& phi) const {
    check_dims(sigma, phi);
    Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(m_, d_);
    for (const auto& t : terms_) {
        double amp = t.amplitude(sigma);
        double ang = 1.0;
        if (t.kind == AngularKind::Cos)
            ang = std::cos(t.harmonic.cast<double>().dot(phi));
        else if (t.kind == AngularKind::Sin)
            ang = std::sin(t.harmonic.cast<double>().dot(phi));
        lam(t.target, t.param) += amp * ang;
    }
    return lam;
}

std::vector<Eigen::MatrixXd> ConnectionSpec::eval_dphi(const Eigen::VectorXd& sigma,
                                                       const Eigen::VectorXd& phi) const {
    check_dims(sigma, phi);
    std::vector<Eigen::MatrixXd> dl(m_, Eigen::MatrixXd::Zero(m_, d_));
    for (const auto& t : terms_) {
        if (t.kind == AngularKind::Constant) continue;
        double amp = t.amplitude(sigma);
        double arg = t.harmonic.cast<double>().dot(phi);
        // d/dphi^i cos(n.phi) = -n_i sin(n.phi); d/dphi^i sin(n.phi) = n_i cos(n.phi)
        double factor = (t.kind == AngularKind::Cos) ? -std::sin(arg) : std::cos(arg);
        for (int i = 0; i < m_; ++i) {
            if (t.harmonic[i] == 0) continue;
            dl[i](t.target, t.param) += amp * t.harmonic[i] * factor;
        }
    }
    return dl;
}

TrigPoly ConnectionSpec::slice(const Eigen::VectorXd& sigma, int k, int alpha) const {
    if (sigma.size() != d_) throw std::invalid_argument("connection: sigma dimension mismatch");
    TrigPoly out;
    for (const auto& t : terms_) {
        if (t.target != k || t.param != alpha) continue;
        TrigTerm tt;
        tt.kind = t.kind;
        tt.harmonic = (t.kind == AngularKind::Constant) ? Eigen::VectorXi::Zero(m_) : t.harmonic;
        tt.coeff = t.amplitude(sigma);
        out.push_back(tt);
    }
    return out;
}

Eigen::MatrixXd ConnectionSpec::constant_matrix() const {
    if (!is_constant())
        throw std::invalid_argument("connection: not a constant-coefficient connection");
    // Constant here also means sigma-independent; enforce by checking degree.
    for (const auto& t : terms_)
        if (t.amplitude.total_degree() > 0)
            throw std::invalid_argument("connection: constant_matrix needs sigma-free amplitudes");
    Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(m_, d_);
    for (const auto& t : terms_)
        lam(t.target, t.param) += t.amplitude(Eigen::VectorXd::Zero(d_));
    return lam;
}

}  // namespace holonomy

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <vector>

#include "holonomy/polynomial.hpp"

namespace holonomy {

/// The phi-factor of a trigonometric term: 1, cos(n.phi) or sin(n.phi).
enum class AngularKind { Constant, Cos, Sin };

/// One real trigonometric monomial c * {1, cos(n.phi), sin(n.phi)}.
struct TrigTerm {
    AngularKind kind = AngularKind::Constant;
    Eigen::VectorXi harmonic;  // n in Z^m; ignored for Constant
    double coeff = 0.0;
};

/// Real trig polynomial on T^m.
using TrigPoly = std::vector<TrigTerm>;

/// Lexicographic key for integer harmonic vectors.
using HarmonicKey = std::vector<int>;
using HarmonicMap = std::map<HarmonicKey, std::complex<double>>;

/// Complex exponential expansion: sum over p of coeff(p) e^{i p.phi}.
HarmonicMap harmonics(const TrigPoly& poly, int m);

double trig_eval(const TrigPoly& poly, const Eigen::VectorXd& phi);

/// Connection coefficients Lambda^k_alpha(sigma, phi) on Sigma x T^m -> Sigma,
/// as trig polynomials in phi with polynomial sigma-amplitudes.
class ConnectionSpec {
public:
    struct Term {
        int target = 0;        // k, 0-based angle index
        int param = 0;         // alpha, 0-based parameter index
        Polynomial amplitude;  // in sigma (d variables)
        Eigen::VectorXi harmonic;
        AngularKind kind = AngularKind::Constant;
    };

    ConnectionSpec(int m, int d, std::vector<Term> terms);

    int torus_dim() const { return m_; }
    int param_dim() const { return d_; }
    const std::vector<Term>& terms() const { return terms_; }

    /// True when every term has a constant phi-factor (principal connection).
    bool is_constant() const;
    /// Largest |n_i| over all terms, per axis.
    Eigen::VectorXi max_abs_harmonic() const;
    /// Bound on sum over terms of |amplitude| x 1, valid when each |sigma_i| <= sigma_bound.
    double amplitude_bound(double sigma_bound) const;

    /// m x d matrix Lambda^k_alpha at (sigma, phi).
    Eigen::MatrixXd eval(const Eigen::VectorXd& sigma, const Eigen::VectorXd& phi) const;

    /// Exact phi-derivatives: result[i](k, alpha) = d Lambda^k_alpha / d phi^i.
    /// Constant-only specs yield bitwise-zero tensors.
    std::vector<Eigen::MatrixXd> eval_dphi(const Eigen::VectorXd& sigma,
                                           const Eigen::VectorXd& phi) const;

    /// Trig polynomial phi -> Lambda^k_alpha(sigma, phi) at fixed sigma.
    TrigPoly slice(const Eigen::VectorXd& sigma, int k, int alpha) const;

    /// Constant coefficient matrix; valid only for is_constant() specs.
    Eigen::MatrixXd constant_matrix() const;

private:
    void check_dims(const Eigen::VectorXd& sigma, const Eigen::VectorXd& phi) const;

    int m_ = 0, d_ = 0;
    std::vector<Term> terms_;
};

}  // namespace holonomy

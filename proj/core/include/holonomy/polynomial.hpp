#pragma once

#include <Eigen/Dense>
#include <vector>

namespace holonomy {

/// Real multivariate polynomial with exact gradient and Hessian.
/// Used for connection amplitudes in sigma and for Hamiltonians H(I).
class Polynomial {
public:
    struct Term {
        double coeff = 0.0;
        Eigen::VectorXi powers;  // one exponent per variable, all >= 0
    };

    Polynomial() = default;
    Polynomial(int nvars, std::vector<Term> terms);

    static Polynomial constant(int nvars, double value);
    static Polynomial zero(int nvars) { return Polynomial(nvars, {}); }

    int nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    int total_degree() const;

    double operator()(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

private:
    int nvars_ = 0;
    std::vector<Term> terms_;
};

}  // namespace holonomy

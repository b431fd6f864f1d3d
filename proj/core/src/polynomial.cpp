#include "holonomy/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace holonomy {

Polynomial::Polynomial(int nvars, std::vector<Term> terms)
    : nvars_(nvars), terms_(std::move(terms)) {
    if (nvars < 0) throw std::invalid_argument("polynomial: nvars must be >= 0");
    for (const auto& t : terms_) {
        if (t.powers.size() != nvars)
            throw std::invalid_argument("polynomial: term exponent count does not match nvars");
        if ((t.powers.array() < 0).any())
            throw std::invalid_argument("polynomial: negative exponent");
    }
}

Polynomial Polynomial::constant(int nvars, double value) {
    Term t;
    t.coeff = value;
    t.powers = Eigen::VectorXi::Zero(nvars);
    return Polynomial(nvars, {t});
}

int Polynomial::total_degree() const {
    int deg = 0;
    for (const auto& t : terms_) deg = std::max(deg, t.powers.sum());
    return deg;
}

namespace {

double int_pow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

}  // namespace

double Polynomial::operator()(const Eigen::VectorXd& x) const {
    if (x.size() != nvars_) throw std::invalid_argument("polynomial: argument dimension mismatch");
    double acc = 0.0;
    for (const auto& t : terms_) {
        double v = t.coeff;
        for (int i = 0; i < nvars_; ++i) v *= int_pow(x[i], t.powers[i]);
        acc += v;
    }
    return acc;
}

Eigen::VectorXd Polynomial::gradient(const Eigen::VectorXd& x) const {
    if (x.size() != nvars_) throw std::invalid_argument("polynomial: argument dimension mismatch");
    Eigen::VectorXd g = Eigen::VectorXd::Zero(nvars_);
    for (const auto& t : terms_) {
        for (int i = 0; i < nvars_; ++i) {
            if (t.powers[i] == 0) continue;
            double v = t.coeff * t.powers[i] * int_pow(x[i], t.powers[i] - 1);
            for (int j = 0; j < nvars_; ++j)
                if (j != i) v *= int_pow(x[j], t.powers[j]);
            g[i] += v;
        }
    }
    return g;
}

Eigen::MatrixXd Polynomial::hessian(const Eigen::VectorXd& x) const {
    if (x.size() != nvars_) throw std::invalid_argument("polynomial: argument dimension mismatch");
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nvars_, nvars_);
    for (const auto& t : terms_) {
        for (int i = 0; i < nvars_; ++i) {
            for (int j = 0; j < nvars_; ++j) {
                Eigen::VectorXi p = t.powers;
                double c = t.coeff;
                if (p[i] == 0) continue;
                c *= p[i];
                p[i] -= 1;
                if (p[j] == 0) continue;
                c *= p[j];
                p[j] -= 1;
                double v = c;
                for (int s = 0; s < nvars_; ++s) v *= int_pow(x[s], p[s]);
                h(i, j) += v;
            }
        }
    }
    return h;
}

}  // namespace holonomy

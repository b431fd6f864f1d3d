#include "holonomy/lattice.hpp"

#include <stdexcept>

namespace holonomy {

ModeLattice::ModeLattice(Eigen::VectorXi cutoffs) : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.size() < 1) throw std::invalid_argument("lattice: needs at least one axis");
    if ((cutoffs_.array() < 0).any())
        throw std::invalid_argument("lattice: cutoffs must be >= 0");
    const int m = static_cast<int>(cutoffs_.size());
    strides_.assign(m, 1);
    for (int k = m - 2; k >= 0; --k)
        strides_[k] = strides_[k + 1] * (2 * cutoffs_[k + 1] + 1);
    dim_ = strides_[0] * (2 * cutoffs_[0] + 1);
}

bool ModeLattice::contains(const Eigen::VectorXi& n) const {
    if (n.size() != cutoffs_.size()) return false;
    return (n.array().abs() <= cutoffs_.array()).all();
}

int ModeLattice::index(const Eigen::VectorXi& n) const {
    if (!contains(n)) throw std::out_of_range("lattice: mode outside window");
    int idx = 0;
    for (int k = 0; k < m(); ++k) idx += (n[k] + cutoffs_[k]) * strides_[k];
    return idx;
}

Eigen::VectorXi ModeLattice::mode(int index) const {
    if (index < 0 || index >= dim_) throw std::out_of_range("lattice: index out of range");
    Eigen::VectorXi n(m());
    for (int k = 0; k < m(); ++k) {
        n[k] = index / strides_[k] - cutoffs_[k];
        index %= strides_[k];
    }
    return n;
}

bool ModeLattice::on_edge(const Eigen::VectorXi& n) const {
    for (int k = 0; k < m(); ++k)
        if (cutoffs_[k] > 0 && std::abs(n[k]) == cutoffs_[k]) return true;
    return false;
}

}  // namespace holonomy

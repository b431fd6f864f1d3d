#pragma once

#include <Eigen/Dense>
#include <vector>

namespace holonomy {

/// Symmetric truncated Fourier mode window: n in Z^m with -N_k <= n_k <= N_k,
/// ordered lexicographically (axis 0 most significant).
class ModeLattice {
public:
    explicit ModeLattice(Eigen::VectorXi cutoffs);

    int m() const { return static_cast<int>(cutoffs_.size()); }
    const Eigen::VectorXi& cutoffs() const { return cutoffs_; }
    int dim() const { return dim_; }

    bool contains(const Eigen::VectorXi& n) const;
    int index(const Eigen::VectorXi& n) const;  // throws if outside the window
    Eigen::VectorXi mode(int index) const;

    /// True when some |n_k| equals N_k (outermost shell, leakage monitor).
    bool on_edge(const Eigen::VectorXi& n) const;

    bool operator==(const ModeLattice& other) const { return cutoffs_ == other.cutoffs_; }

private:
    Eigen::VectorXi cutoffs_;
    std::vector<int> strides_;
    int dim_ = 0;
};

}  // namespace holonomy

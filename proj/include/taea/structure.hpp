#pragma once

#include <functional>
#include <span>
#include <vector>

#include "taea/core.hpp"

namespace taea {

// Static variable grouping plus the structure-induced target provider.
// groups[0] is the front-related group G_f; groups[1..] are the
// convergence-related groups. Targets may depend on the solution (variable
// linkage makes the optimal pattern of a convergence variable a function of
// the front variables), so the provider receives the full decision vector.
class VariableStructure {
public:
    using TargetFn = std::function<double(int j, std::span<const double> x)>;

    VariableStructure() = default;
    VariableStructure(std::vector<std::vector<int>> groups, Bounds bounds, TargetFn target = {});

    const std::vector<std::vector<int>>& groups() const { return groups_; }
    const std::vector<int>& front_group() const { return groups_.front(); }
    const Bounds& bounds() const { return bounds_; }
    int dimension() const { return static_cast<int>(bounds_.size()); }
    int group_count() const { return static_cast<int>(groups_.size()); }
    int convergence_group_count() const { return group_count() - 1; }

    bool is_front_variable(int j) const { return is_front_[j]; }
    // All convergence-related indices, ascending.
    const std::vector<int>& convergence_indices() const { return convergence_indices_; }

    // x_j* in problem units, clipped to bounds. Midpoint of the bounds when no
    // provider was installed.
    double target(int j, std::span<const double> x) const;

    // z_j(x): coordinate normalized by its bounds.
    double transform(int j, std::span<const double> x) const {
        return (x[j] - bounds_.lower[j]) / bounds_.range(j);
    }

    // Normalized target of one variable.
    double target_z(int j, std::span<const double> x) const {
        return (target(j, x) - bounds_.lower[j]) / bounds_.range(j);
    }

    // z_k*: mean normalized target over group k (k indexes groups(), so k>=1
    // for convergence groups).
    double group_target(int k, std::span<const double> x) const;

private:
    std::vector<std::vector<int>> groups_;
    Bounds bounds_;
    TargetFn target_;
    std::vector<char> is_front_;
    std::vector<int> convergence_indices_;
};

// Partition {0..D-1} into a front group of the first `front_size` indices and
// `convergence_groups` contiguous equal-size groups over the rest (the last
// group absorbs the remainder).
std::vector<std::vector<int>> contiguous_grouping(int dimension, int front_size,
                                                  int convergence_groups);

} // namespace taea

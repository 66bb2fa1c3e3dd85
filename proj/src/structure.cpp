#include "taea/structure.hpp"

#include <algorithm>
#include <stdexcept>

namespace taea {

VariableStructure::VariableStructure(std::vector<std::vector<int>> groups, Bounds bounds,
                                     TargetFn target)
    : groups_(std::move(groups)), bounds_(std::move(bounds)), target_(std::move(target)) {
    const int d = dimension();
    if (groups_.empty() || groups_.front().empty())
        throw std::invalid_argument("VariableStructure: front group must be nonempty");
    std::vector<char> seen(d, 0);
    for (const auto& g : groups_)
        for (int j : g) {
            if (j < 0 || j >= d || seen[j])
                throw std::invalid_argument("VariableStructure: groups must partition the index set");
            seen[j] = 1;
        }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw std::invalid_argument("VariableStructure: groups must cover every index");

    is_front_.assign(d, 0);
    for (int j : groups_.front()) is_front_[j] = 1;
    for (std::size_t k = 1; k < groups_.size(); ++k)
        for (int j : groups_[k]) convergence_indices_.push_back(j);
    std::sort(convergence_indices_.begin(), convergence_indices_.end());
}

double VariableStructure::target(int j, std::span<const double> x) const {
    double t = target_ ? target_(j, x) : 0.5 * (bounds_.lower[j] + bounds_.upper[j]);
    return bounds_.clip(j, t);
}

double VariableStructure::group_target(int k, std::span<const double> x) const {
    const auto& g = groups_.at(k);
    double sum = 0.0;
    for (int j : g) sum += target_z(j, x);
    return sum / static_cast<double>(g.size());
}

std::vector<std::vector<int>> contiguous_grouping(int dimension, int front_size,
                                                  int convergence_groups) {
    if (front_size < 1 || front_size >= dimension)
        throw std::invalid_argument("contiguous_grouping: invalid front size");
    const int rest = dimension - front_size;
    const int kc = std::max(1, std::min(convergence_groups, rest));
    std::vector<std::vector<int>> groups(1 + kc);
    for (int j = 0; j < front_size; ++j) groups[0].push_back(j);
    const int base = rest / kc;
    for (int k = 0; k < kc; ++k) {
        const int begin = front_size + k * base;
        const int end = (k == kc - 1) ? dimension : begin + base;
        for (int j = begin; j < end; ++j) groups[1 + k].push_back(j);
    }
    return groups;
}

} // namespace taea

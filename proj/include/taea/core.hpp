#pragma once

#include <span>
#include <vector>

namespace taea {

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    Bounds() = default;
    Bounds(std::vector<double> lo, std::vector<double> up);

    std::size_t size() const { return lower.size(); }
    double range(std::size_t j) const { return upper[j] - lower[j]; }
    double clip(std::size_t j, double v) const {
        if (v < lower[j]) return lower[j];
        if (v > upper[j]) return upper[j];
        return v;
    }
};

struct Solution {
    std::vector<double> x;   // decision vector, clipped to bounds
    std::vector<double> f;   // objective values (minimization)
    double violation = 0.0;  // constraint violation sum, 0 when unconstrained
};

Solution make_solution(std::vector<double> x, const Bounds& bounds);
void clip_to_bounds(std::vector<double>& x, const Bounds& bounds);

struct Population {
    std::vector<Solution> members;
    int capacity = 0;

    std::size_t size() const { return members.size(); }
    bool empty() const { return members.empty(); }
    Solution& operator[](std::size_t i) { return members[i]; }
    const Solution& operator[](std::size_t i) const { return members[i]; }
};

// Pareto dominance on raw objective vectors (minimization).
bool dominates(std::span<const double> a, std::span<const double> b);

// Feasibility-first dominance: feasible beats infeasible, among infeasible the
// smaller violation wins (equal violations fall back to Pareto on objectives).
bool constrained_dominates(const Solution& a, const Solution& b);

// Fast non-dominated sort; front 0 is the nondominated subset.
std::vector<std::vector<int>> nondominated_sort(std::span<const Solution> set);

// Indices of the nondominated subset of `set` (front 0 only).
std::vector<int> nondominated_indices(std::span<const Solution> set);

// NSGA-II crowding distance, returned in input order. Boundary solutions per
// objective get +inf; a degenerate objective (zero range) contributes 0.
std::vector<double> crowding_distance(std::span<const Solution> front);

// (f - ideal)/(nadir - ideal) per coordinate; a degenerate axis maps to 0.
// Values outside [0,1] are kept; *outside_range reports whether any occurred.
std::vector<std::vector<double>> normalize_objectives(std::span<const std::vector<double>> set,
                                                      std::span<const double> ideal,
                                                      std::span<const double> nadir,
                                                      bool* outside_range = nullptr);

std::vector<double> normalize_one(std::span<const double> f, std::span<const double> ideal,
                                  std::span<const double> nadir);

// Removes decision-vector duplicates (max-norm tolerance 1e-12), keeping the
// first occurrence and the original order.
std::vector<Solution> deduplicate(std::span<const Solution> set);

inline constexpr double kDuplicateTol = 1e-12;

bool same_decision_vector(std::span<const double> a, std::span<const double> b,
                          double tol = kDuplicateTol);

// Componentwise min/max of f over the given solutions.
void objective_extents(std::span<const Solution> set, std::vector<double>& ideal,
                       std::vector<double>& nadir);

} // namespace taea

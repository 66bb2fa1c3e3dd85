#pragma once

#include <span>
#include <vector>

namespace taea {

// Mean over reference points of the dominance-aware distance to the nearest
// approximation point (minimization orientation).
double igd_plus(std::span<const std::vector<double>> approx,
                std::span<const std::vector<double>> reference);

// Exact hypervolume for 2 or 3 objectives; points not strictly dominating the
// reference point contribute nothing.
double hypervolume(std::span<const std::vector<double>> approx,
                   std::span<const double> ref_point);

enum class WilcoxonVerdict { plus, minus, approx };

struct WilcoxonResult {
    WilcoxonVerdict verdict = WilcoxonVerdict::approx;
    double p_value = 1.0;
};

// Two-sided rank-sum test with tie-corrected normal approximation. The verdict
// marks whether sample a is significantly better than b under the caller's
// orientation.
WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                                 double alpha, bool lower_is_better);

} // namespace taea

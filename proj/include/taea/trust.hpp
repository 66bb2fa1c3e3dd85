#pragma once

#include <span>
#include <vector>

#include "taea/core.hpp"

namespace taea {

struct TrustParams {
    double tau_s = 0.1;      // stage window start
    double tau_e = 0.6;      // stage window end
    double mu = 0.5;         // size-maturity proportion
    int bins = 0;            // reference-direction count B; 0 = derive from N and M
    double kappa = 1.0;      // segment penalty
    double alpha = 1.0 / 3;  // maturity weights, sum to 1
    double beta = 1.0 / 3;
    double gamma = 1.0 / 3;
    double p_min = 0.1;      // exploration probability range
    double p_max = 0.9;
    double lambda_exp = 1.25;
    int k_min = 1;           // active group count range; k_max 0 = all groups
    int k_max = 0;
    double rho_min = 0.1;    // repair strength range
    double rho_max = 0.8;

    void validate() const;
    // Fills bins/k_max with their derived defaults for a concrete setup.
    TrustParams resolved(int population_size, int num_objectives, int group_count) const;
};

struct TrustState {
    double p = 0.0;      // normalized progress
    double phi = 0.0;    // stage factor
    double m_size = 0.0;
    double m_cov = 0.0;
    double m_shape = 0.0;
    double maturity = 0.0;
    double trust = 0.0;
};

struct SearchControls {
    double p_explore = 0.0;
    int k_active = 1;
    double rho = 0.0;
};

// p = t/(T-1), phi = clip((p - tau_s)/(tau_e - tau_s), 0, 1).
void compute_progress_stage(int t, int max_generations, const TrustParams& params, double& p,
                            double& phi);

struct MaturityResult {
    double m_size = 0.0;
    double m_cov = 0.0;
    double m_shape = 0.0;
    double maturity = 0.0;
};

// Size, coverage and shape maturity of the convergence archive, evaluated on
// its nondominated subset in the normalized objective space. An empty archive
// yields all zeros.
MaturityResult compute_maturity(const Population& archive, const TrustParams& params,
                                std::span<const double> ideal, std::span<const double> nadir);

double compute_trust(double phi, double maturity);

SearchControls derive_controls(double trust, const TrustParams& params);

TrustState compute_trust_state(int t, int max_generations, const Population& archive,
                               const TrustParams& params, std::span<const double> ideal,
                               std::span<const double> nadir);

// B uniformly spread reference directions on the unit simplex. For two
// objectives these are B evenly spaced points; for three, a simplex lattice
// with the point count closest to the request.
std::vector<std::vector<double>> reference_directions(int num_objectives, int requested);

// Index of the direction with maximal cosine similarity to v (ties to the
// lower index; a zero vector maps to direction 0).
int nearest_direction(std::span<const double> v,
                      std::span<const std::vector<double>> directions);

// Count of directions occupied by at least one of the normalized points.
int occupied_direction_count(std::span<const std::vector<double>> normalized_points,
                             std::span<const std::vector<double>> directions);

// Number of front segments among normalized nondominated points: gaps larger
// than 3x the median consecutive (M=2) or nearest-neighbor (M>=3) distance
// split segments.
int count_front_segments(std::span<const std::vector<double>> normalized_points);

} // namespace taea

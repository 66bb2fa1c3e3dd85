#pragma once

#include <span>
#include <vector>

#include "taea/core.hpp"
#include "taea/structure.hpp"
#include "taea/trust.hpp"

namespace taea {

struct CheckpointParams {
    double lambda_d = 0.2;   // weight of the mean normalized objective norm
    double lambda_c = 0.1;   // weight of the coverage score
    double lambda_n = 0.1;   // weight of the nondominated ratio
    double eta_gamma = 0.95; // refresh thresholds (< 1)
    double eta_r = 0.95;
    double tau_b = 0.6;      // rollback activation on progress
    double gamma_r = 1.2;    // degradation thresholds (> 1)
    double gamma_gamma = 1.1;

    void validate() const;
};

struct ArchiveScore {
    double mean_residual = 0.0;  // r_bar
    double obj_norm = 0.0;       // d, mean normalized objective norm
    double coverage = 0.0;       // chi
    double nd_ratio = 0.0;       // r_nd
    double gamma = 0.0;          // composite, lower is better
};

struct Checkpoint {
    Population archive;
    ArchiveScore score;
    // normalization anchors the score was computed with, kept so the stored
    // score stays recomputable against the stored archive
    std::vector<double> ideal;
    std::vector<double> nadir;
    bool initialized = false;
};

enum class StabilizeEvent { none, refresh, rollback };

// Mean absolute deviation of the transformed convergence variables from their
// structural targets. Front-only problems yield 0.
double structural_residual(const Solution& solution, const VariableStructure& structure);

double composite_score(double mean_residual, double obj_norm, double coverage, double nd_ratio,
                       const CheckpointParams& params);

ArchiveScore archive_score(const Population& archive, const VariableStructure& structure,
                           const CheckpointParams& params, const TrustParams& trust_params,
                           std::span<const double> ideal, std::span<const double> nadir);

// Checkpoint refresh / degradation rollback. Returns the stabilized archive
// and mutates the checkpoint in place; the event reports which branch fired.
Population stabilize(const Population& intermediate, Checkpoint& ckpt, double p,
                     const VariableStructure& structure, const CheckpointParams& params,
                     const TrustParams& trust_params, std::span<const double> ideal,
                     std::span<const double> nadir, StabilizeEvent& event);

} // namespace taea

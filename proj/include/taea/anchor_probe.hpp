#pragma once

#include <span>
#include <vector>

#include "taea/core.hpp"
#include "taea/rng.hpp"
#include "taea/sparse_search.hpp"
#include "taea/structure.hpp"
#include "taea/trust.hpp"

namespace taea {

struct ProbeParams {
    double p_start = 0.12;  // activation threshold on normalized progress
    double delta0 = 0.05;   // intensity terms
    double delta1 = 0.2;
    double delta2 = 0.2;
    double delta_max = 0.5;
    double beta_lo = 0.3;   // anchor-expansion coefficient range
    double beta_hi = 0.8;
    // probes must land structurally near-correct at the anchor's front
    // position or they are dominated immediately on disconnected fronts, so
    // the repair strength defaults to an almost-full fixed pull instead of
    // following the trust-driven rho
    bool rho_probe_follows_rho = false;
    double rho_probe_fixed = 0.95;

    void validate() const;
};

// delta and the probe count derived from trust and the nondominated ratio.
void compensation_intensity(double trust, double p, double nd_ratio, int population_size,
                            const ProbeParams& params, double& delta, int& n_probe);

// Anchor candidates in the front-variable space: bound corners (when the front
// dimension is small enough to enumerate) plus a uniform lattice, ranked most
// isolated from the projected nondominated archive first.
std::vector<std::vector<double>> build_anchor_set(const VariableStructure& structure,
                                                  const Population& archive, int count);

// One probe: front component blended toward the anchor, convergence component
// perturbed from the elite and repaired toward the structural target.
Solution generate_probe(const Solution& elite, std::span<const double> anchor, double beta,
                        double rho_probe, const VariableStructure& structure, RngStream& rng);

struct ProbeCounters {
    long empty_elite_fallbacks = 0;
};

std::vector<Solution> probe_offspring(const Population& convergence_archive, double trust,
                                      double p, const SearchControls& controls,
                                      const VariableStructure& structure,
                                      const ProbeParams& params, int population_size,
                                      double elite_fraction, const RngSeeder& seeder,
                                      int generation, ProbeCounters* counters = nullptr);

} // namespace taea

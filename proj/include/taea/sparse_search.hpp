#pragma once

#include <span>
#include <vector>

#include "taea/core.hpp"
#include "taea/rng.hpp"
#include "taea/structure.hpp"
#include "taea/trust.hpp"

namespace taea {

struct GroupStats {
    std::vector<double> spr;     // per-group dispersion
    std::vector<double> res;     // per-group structural residual
    std::vector<double> weight;  // activity weights
    std::vector<double> prob;    // sampling probabilities, sum to 1
};

struct ReproductionParams {
    double f = 0.5;       // differential scaling factor
    double cr = 0.9;      // crossover rate
    double lambda = 0.5;  // coefficient of the differential term in the guided mode
    double omega0 = 0.2;  // activity weight terms, sum to 1 with omega0 > 0
    double omega1 = 0.4;
    double omega2 = 0.4;
    double elite_fraction = 0.2;

    void validate() const;
};

// Dispersion and structural residual per group (Spr_k, Res_k).
GroupStats group_statistics(std::span<const Solution> elite, const VariableStructure& structure);

// Fills weight/prob from spr/res and draws k_active distinct groups without
// replacement proportional to prob. Returns group indices and the union of
// their dimensions.
void compute_group_weights(GroupStats& stats, const ReproductionParams& params);
std::vector<int> sample_active_groups(const GroupStats& stats, int k_active, RngStream& rng);
std::vector<int> active_dimension_set(const VariableStructure& structure,
                                      std::span<const int> active_groups);

struct MutationCounters {
    long fallback_mutants = 0;  // pool too small, Gaussian fallback used
};

// Dual-mode differential mutant: rand/1 exploration or elite-guided
// exploitation, chosen by p_explore. Clipped to bounds.
std::vector<double> generate_mutant(const Solution& parent, std::span<const Solution> pool,
                                    std::span<const Solution> elite, double p_explore,
                                    const ReproductionParams& params, const Bounds& bounds,
                                    RngStream& rng, MutationCounters* counters = nullptr);

// Sparse crossover (active dims only, one guaranteed crossover dimension)
// followed by the convex structural repair of active convergence variables.
Solution sparse_crossover_repair(const Solution& parent, std::span<const double> mutant,
                                 std::span<const int> active_dims, double rho,
                                 const VariableStructure& structure,
                                 const ReproductionParams& params, RngStream& rng);

// Selects the elite subset: the ceil(elite_fraction*N) nondominated members of
// the archive with the largest crowding distance.
std::vector<Solution> select_elite(const Population& archive, double elite_fraction,
                                   int population_size);

// One trial per parent; the active group set is sampled once and shared.
std::vector<Solution> sparse_search_offspring(const Population& population,
                                              const Population& convergence_archive,
                                              const Population& preference_archive,
                                              const SearchControls& controls,
                                              const VariableStructure& structure,
                                              const ReproductionParams& params,
                                              const RngSeeder& seeder, int generation,
                                              MutationCounters* counters = nullptr);

} // namespace taea

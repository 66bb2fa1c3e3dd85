#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "taea/anchor_probe.hpp"
#include "taea/checkpoint.hpp"
#include "taea/core.hpp"
#include "taea/problems.hpp"
#include "taea/rng.hpp"
#include "taea/sparse_search.hpp"
#include "taea/trust.hpp"

namespace taea {

enum class Algorithm { trust_taea, vanilla_taea };

struct RunConfig {
    std::string problem = "LSMOP1";
    int num_objectives = 2;
    int dimension = 500;
    int population_size = 100;
    int max_generations = 500;
    std::uint64_t seed = 1;
    Algorithm algorithm = Algorithm::trust_taea;
    int metric_cadence = 25;
    int convergence_groups = 5;

    TrustParams trust;
    ReproductionParams reproduction;
    ProbeParams probe;
    CheckpointParams checkpoint;

    void validate() const;
};

struct MetricRow {
    int generation = 0;
    long evaluations = 0;
    double hv = 0.0;
    double igd_plus = 0.0;
    double trust = 0.0;
    double phi = 0.0;
    double maturity = 0.0;
    double delta = 0.0;
    double nd_ratio = 0.0;
    std::string checkpoint_event = "none";
};

struct RunResult {
    Population convergence_archive;
    Population preference_archive;
    Population population;
    std::vector<MetricRow> metrics;
    double wall_seconds = 0.0;
    long evaluations = 0;
    long fallback_mutants = 0;
    long elitism_warnings = 0;
    std::vector<std::string> warnings;
};

// Rank-fill with crowding truncation on the splitting front (S_C).
Population update_convergence_archive(std::span<const Solution> unioned, int capacity);

// Greedy coverage of objective-space directions left empty by the convergence
// archive (S_A); members of that archive become eligible only after all
// outside candidates.
Population update_preference_archive(std::span<const Solution> unioned,
                                     const Population& convergence_next, int capacity,
                                     const TrustParams& trust_params,
                                     std::span<const double> ideal,
                                     std::span<const double> nadir);

// ceil(N/2) draws from C and floor(N/2) from A, falling back to C when A runs
// short (with replacement only when unavoidable).
Population rebuild_population(const Population& convergence, const Population& preference,
                              int capacity, RngStream& rng);

RunResult run(const RunConfig& config, const ProblemDef& problem);

const char* algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

} // namespace taea

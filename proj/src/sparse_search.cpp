#include "taea/sparse_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace taea {

void ReproductionParams::validate() const {
    if (f < 0.0) throw std::invalid_argument("ReproductionParams: F must be nonnegative");
    if (cr < 0.0 || cr > 1.0) throw std::invalid_argument("ReproductionParams: CR must be in [0,1]");
    if (lambda < 0.0) throw std::invalid_argument("ReproductionParams: lambda must be nonnegative");
    if (!(omega0 > 0.0) || omega1 < 0.0 || omega2 < 0.0 ||
        std::fabs(omega0 + omega1 + omega2 - 1.0) > 1e-9)
        throw std::invalid_argument("ReproductionParams: omegas must sum to 1 with omega0 > 0");
    if (!(elite_fraction > 0.0 && elite_fraction <= 1.0))
        throw std::invalid_argument("ReproductionParams: elite_fraction must be in (0,1]");
}

GroupStats group_statistics(std::span<const Solution> elite, const VariableStructure& structure) {
    const auto& groups = structure.groups();
    const auto& bounds = structure.bounds();
    const int k_total = static_cast<int>(groups.size());
    const int n = static_cast<int>(elite.size());
    GroupStats stats;
    stats.spr.assign(k_total, 0.0);
    stats.res.assign(k_total, 0.0);

    for (int k = 0; k < k_total; ++k) {
        const auto& g = groups[k];
        if (n >= 2) {
            double acc = 0.0;
            for (int j : g) {
                double mean = 0.0;
                for (const auto& s : elite) mean += s.x[j];
                mean /= n;
                double var = 0.0;
                for (const auto& s : elite) var += (s.x[j] - mean) * (s.x[j] - mean);
                acc += std::sqrt(var / n) / bounds.range(j);
            }
            stats.spr[k] = acc / static_cast<double>(g.size());
        }
        if (n >= 1) {
            double acc = 0.0;
            for (const auto& s : elite) {
                const double zk = structure.group_target(k, s.x);
                for (int j : g) acc += std::fabs(structure.transform(j, s.x) - zk);
            }
            stats.res[k] = acc / (static_cast<double>(n) * static_cast<double>(g.size()));
        }
    }
    return stats;
}

void compute_group_weights(GroupStats& stats, const ReproductionParams& params) {
    const int k_total = static_cast<int>(stats.spr.size());
    const double spr_max = *std::max_element(stats.spr.begin(), stats.spr.end());
    const double res_max = *std::max_element(stats.res.begin(), stats.res.end());
    stats.weight.assign(k_total, 0.0);
    double sum = 0.0;
    for (int k = 0; k < k_total; ++k) {
        const double spr_hat = spr_max > 0.0 ? stats.spr[k] / spr_max : 0.0;
        const double res_hat = res_max > 0.0 ? stats.res[k] / res_max : 0.0;
        stats.weight[k] = params.omega0 + params.omega1 * spr_hat + params.omega2 * res_hat;
        sum += stats.weight[k];
    }
    stats.prob.assign(k_total, 0.0);
    for (int k = 0; k < k_total; ++k) stats.prob[k] = stats.weight[k] / sum;
}

std::vector<int> sample_active_groups(const GroupStats& stats, int k_active, RngStream& rng) {
    const int k_total = static_cast<int>(stats.prob.size());
    if (k_active < 1 || k_active > k_total)
        throw std::invalid_argument("sample_active_groups: k_active out of range");
    std::vector<double> remaining = stats.prob;
    std::vector<int> chosen;
    chosen.reserve(k_active);
    for (int draw = 0; draw < k_active; ++draw) {
        double total = std::accumulate(remaining.begin(), remaining.end(), 0.0);
        double r = rng.uniform() * total;
        int pick = -1;
        for (int k = 0; k < k_total; ++k) {
            if (remaining[k] <= 0.0) continue;
            r -= remaining[k];
            pick = k;
            if (r <= 0.0) break;
        }
        chosen.push_back(pick);
        remaining[pick] = 0.0;
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

std::vector<int> active_dimension_set(const VariableStructure& structure,
                                      std::span<const int> active_groups) {
    std::vector<int> dims;
    for (int k : active_groups)
        for (int j : structure.groups()[k]) dims.push_back(j);
    std::sort(dims.begin(), dims.end());
    return dims;
}

namespace {

// Draws `count` pool members with pairwise-distinct decision vectors; returns
// false when the pool cannot supply them within the attempt budget.
bool draw_distinct(std::span<const Solution> pool, int count, RngStream& rng,
                   std::vector<const Solution*>& out) {
    out.clear();
    const int n = static_cast<int>(pool.size());
    if (n < count) return false;
    for (int attempt = 0; attempt < 20 * count; ++attempt) {
        const Solution* cand = &pool[rng.uniform_int(0, n - 1)];
        bool clash = false;
        for (const Solution* s : out)
            if (same_decision_vector(s->x, cand->x)) { clash = true; break; }
        if (!clash) {
            out.push_back(cand);
            if (static_cast<int>(out.size()) == count) return true;
        }
    }
    return false;
}

} // namespace

std::vector<double> generate_mutant(const Solution& parent, std::span<const Solution> pool,
                                    std::span<const Solution> elite, double p_explore,
                                    const ReproductionParams& params, const Bounds& bounds,
                                    RngStream& rng, MutationCounters* counters) {
    const std::size_t d = parent.x.size();
    std::vector<double> v(d);
    const bool explore = rng.uniform() < p_explore;
    std::vector<const Solution*> picks;

    if (explore) {
        if (draw_distinct(pool, 3, rng, picks)) {
            const auto &a = picks[0]->x, &b = picks[1]->x, &c = picks[2]->x;
            for (std::size_t j = 0; j < d; ++j) v[j] = a[j] + params.f * (b[j] - c[j]);
        } else {
            if (counters) ++counters->fallback_mutants;
            for (std::size_t j = 0; j < d; ++j)
                v[j] = parent.x[j] + 0.01 * bounds.range(j) * rng.gaussian();
        }
    } else {
        const Solution& g = elite.empty() ? parent : elite[rng.uniform_int(0, static_cast<int>(elite.size()) - 1)];
        if (draw_distinct(pool, 2, rng, picks)) {
            const auto &b = picks[0]->x, &c = picks[1]->x;
            for (std::size_t j = 0; j < d; ++j)
                v[j] = parent.x[j] + params.f * (g.x[j] - parent.x[j]) +
                       params.lambda * params.f * (b[j] - c[j]);
        } else {
            if (counters) ++counters->fallback_mutants;
            for (std::size_t j = 0; j < d; ++j)
                v[j] = parent.x[j] + 0.01 * bounds.range(j) * rng.gaussian();
        }
    }
    clip_to_bounds(v, bounds);
    return v;
}

Solution sparse_crossover_repair(const Solution& parent, std::span<const double> mutant,
                                 std::span<const int> active_dims, double rho,
                                 const VariableStructure& structure,
                                 const ReproductionParams& params, RngStream& rng) {
    if (active_dims.empty())
        throw std::invalid_argument("sparse_crossover_repair: empty active dimension set");
    Solution trial;
    trial.x = parent.x;
    const int forced = active_dims[rng.uniform_int(0, static_cast<int>(active_dims.size()) - 1)];
    for (int j : active_dims)
        if (j == forced || rng.uniform() < params.cr) trial.x[j] = mutant[j];
    for (int j : active_dims) {
        if (structure.is_front_variable(j)) continue;
        const double target = structure.target(j, trial.x);
        trial.x[j] = (1.0 - rho) * trial.x[j] + rho * target;
    }
    clip_to_bounds(trial.x, structure.bounds());
    return trial;
}

std::vector<Solution> select_elite(const Population& archive, double elite_fraction,
                                   int population_size) {
    std::vector<Solution> elite;
    if (archive.empty()) return elite;
    const auto nd_idx = nondominated_indices(archive.members);
    std::vector<Solution> nd;
    nd.reserve(nd_idx.size());
    for (int i : nd_idx) nd.push_back(archive[i]);
    const int want = static_cast<int>(std::ceil(elite_fraction * population_size));
    if (static_cast<int>(nd.size()) <= want) return nd;
    const auto crowd = crowding_distance(nd);
    std::vector<int> order(nd.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return crowd[a] > crowd[b]; });
    elite.reserve(want);
    for (int i = 0; i < want; ++i) elite.push_back(nd[order[i]]);
    return elite;
}

std::vector<Solution> sparse_search_offspring(const Population& population,
                                              const Population& convergence_archive,
                                              const Population& preference_archive,
                                              const SearchControls& controls,
                                              const VariableStructure& structure,
                                              const ReproductionParams& params,
                                              const RngSeeder& seeder, int generation,
                                              MutationCounters* counters) {
    if (population.empty())
        throw std::invalid_argument("sparse_search_offspring: empty population");

    const auto elite = select_elite(convergence_archive, params.elite_fraction,
                                    std::max(population.capacity, static_cast<int>(population.size())));

    auto stats = group_statistics(elite, structure);
    compute_group_weights(stats, params);
    RngStream group_rng = seeder.stream(generation, RngRole::group_sampling);
    const auto active_groups = sample_active_groups(stats, controls.k_active, group_rng);
    const auto active_dims = active_dimension_set(structure, active_groups);

    std::vector<Solution> pool;
    pool.reserve(population.size() + convergence_archive.size() + preference_archive.size());
    pool.insert(pool.end(), population.members.begin(), population.members.end());
    pool.insert(pool.end(), convergence_archive.members.begin(), convergence_archive.members.end());
    pool.insert(pool.end(), preference_archive.members.begin(), preference_archive.members.end());

    std::vector<Solution> offspring;
    offspring.reserve(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
        RngStream rng = seeder.stream(generation, RngRole::mutation, i);
        const auto mutant = generate_mutant(population[i], pool, elite, controls.p_explore,
                                            params, structure.bounds(), rng, counters);
        offspring.push_back(sparse_crossover_repair(population[i], mutant, active_dims,
                                                    controls.rho, structure, params, rng));
    }
    return offspring;
}

} // namespace taea

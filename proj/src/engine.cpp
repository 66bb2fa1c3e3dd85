#include "taea/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "taea/metrics.hpp"

namespace taea {

void RunConfig::validate() const {
    if (population_size < 4) throw std::invalid_argument("RunConfig: population size must be >= 4");
    if (max_generations < 2) throw std::invalid_argument("RunConfig: need at least 2 generations");
    trust.validate();
    reproduction.validate();
    probe.validate();
    checkpoint.validate();
}

const char* algorithm_name(Algorithm a) {
    return a == Algorithm::trust_taea ? "trust_taea" : "vanilla_taea";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "trust_taea" || name == "trust-taea") return Algorithm::trust_taea;
    if (name == "vanilla_taea" || name == "vanilla-taea") return Algorithm::vanilla_taea;
    throw std::invalid_argument("unknown algorithm: " + name);
}

Population update_convergence_archive(std::span<const Solution> unioned, int capacity) {
    if (unioned.empty())
        throw std::invalid_argument("update_convergence_archive: empty union set");
    Population out;
    out.capacity = capacity;
    if (static_cast<int>(unioned.size()) <= capacity) {
        out.members.assign(unioned.begin(), unioned.end());
        return out;
    }
    const auto fronts = nondominated_sort(unioned);
    for (const auto& front : fronts) {
        const int room = capacity - static_cast<int>(out.size());
        if (room <= 0) break;
        if (static_cast<int>(front.size()) <= room) {
            for (int i : front) out.members.push_back(unioned[i]);
            continue;
        }
        std::vector<Solution> members;
        members.reserve(front.size());
        for (int i : front) members.push_back(unioned[i]);
        const auto crowd = crowding_distance(members);
        std::vector<int> order(front.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return crowd[a] > crowd[b]; });
        for (int i = 0; i < room; ++i) out.members.push_back(members[order[i]]);
        break;
    }
    return out;
}

Population update_preference_archive(std::span<const Solution> unioned,
                                     const Population& convergence_next, int capacity,
                                     const TrustParams& trust_params,
                                     std::span<const double> ideal,
                                     std::span<const double> nadir) {
    if (unioned.empty() || convergence_next.empty())
        throw std::invalid_argument("update_preference_archive: empty input");
    const int m = static_cast<int>(unioned[0].f.size());
    const auto dirs = reference_directions(m, trust_params.bins);

    std::vector<char> occupied(dirs.size(), 0);
    for (const auto& s : convergence_next.members)
        occupied[nearest_direction(normalize_one(s.f, ideal, nadir), dirs)] = 1;

    struct Candidate {
        int index;
        int bin;
        double norm;
        double violation;
        bool in_convergence;
    };
    std::vector<Candidate> cands;
    cands.reserve(unioned.size());
    for (int i = 0; i < static_cast<int>(unioned.size()); ++i) {
        const auto nf = normalize_one(unioned[i].f, ideal, nadir);
        double norm = 0.0;
        for (double v : nf) norm += v * v;
        bool in_c = false;
        for (const auto& cs : convergence_next.members)
            if (same_decision_vector(cs.x, unioned[i].x)) { in_c = true; break; }
        cands.push_back(
            {i, nearest_direction(nf, dirs), std::sqrt(norm), unioned[i].violation, in_c});
    }

    Population out;
    out.capacity = capacity;
    std::vector<char> taken(cands.size(), 0);
    std::vector<char> covered(dirs.size(), 0);
    // feasibility first, then the smaller normalized norm, then input order
    auto better = [&](const Candidate& a, const Candidate& b) {
        if (a.violation != b.violation) return a.violation < b.violation;
        if (a.norm != b.norm) return a.norm < b.norm;
        return a.index < b.index;
    };
    while (static_cast<int>(out.size()) < capacity) {
        int best = -1;
        bool best_new_bin = false;
        for (int pass = 0; pass < 2 && best < 0; ++pass) {
            const bool allow_in_c = pass == 1;
            for (std::size_t i = 0; i < cands.size(); ++i) {
                if (taken[i]) continue;
                if (cands[i].in_convergence != allow_in_c) continue;
                const bool new_bin = !occupied[cands[i].bin] && !covered[cands[i].bin];
                if (best < 0 || (new_bin && !best_new_bin) ||
                    (new_bin == best_new_bin &&
                     better(cands[i], cands[static_cast<std::size_t>(best)]))) {
                    best = static_cast<int>(i);
                    best_new_bin = new_bin;
                }
            }
        }
        if (best < 0) break;
        taken[best] = 1;
        covered[cands[best].bin] = 1;
        out.members.push_back(unioned[cands[best].index]);
    }
    return out;
}

Population rebuild_population(const Population& convergence, const Population& preference,
                              int capacity, RngStream& rng) {
    if (convergence.empty())
        throw std::invalid_argument("rebuild_population: empty convergence archive");
    const int want_c = (capacity + 1) / 2;
    const int want_a = capacity - want_c;

    auto draw = [&](const Population& src, int count, std::vector<Solution>& dst) {
        const int n = static_cast<int>(src.size());
        if (count <= 0 || n == 0) return 0;
        if (n >= count) {
            // partial Fisher-Yates over an index deck
            std::vector<int> deck(n);
            std::iota(deck.begin(), deck.end(), 0);
            for (int i = 0; i < count; ++i) {
                const int j = rng.uniform_int(i, n - 1);
                std::swap(deck[i], deck[j]);
                dst.push_back(src[deck[i]]);
            }
            return count;
        }
        for (int i = 0; i < count; ++i) dst.push_back(src[rng.uniform_int(0, n - 1)]);
        return count;
    };

    Population out;
    out.capacity = capacity;
    out.members.reserve(capacity);
    draw(convergence, want_c, out.members);
    int from_a = std::min(want_a, static_cast<int>(preference.size()));
    if (from_a > 0) draw(preference, from_a, out.members);
    const int shortfall = capacity - static_cast<int>(out.size());
    if (shortfall > 0) draw(convergence, shortfall, out.members);
    return out;
}

namespace {

struct FrontReference {
    std::vector<std::vector<double>> points;
    std::vector<double> ideal;
    std::vector<double> nadir;
    std::vector<double> hv_ref;
    bool available = false;
};

FrontReference make_front_reference(const ProblemDef& problem) {
    FrontReference ref;
    if (!problem.front_sampler) return ref;
    ref.points = problem.front_sampler(10000);
    const int m = problem.num_objectives;
    ref.ideal.assign(m, std::numeric_limits<double>::infinity());
    ref.nadir.assign(m, -std::numeric_limits<double>::infinity());
    for (const auto& p : ref.points)
        for (int i = 0; i < m; ++i) {
            ref.ideal[i] = std::min(ref.ideal[i], p[i]);
            ref.nadir[i] = std::max(ref.nadir[i], p[i]);
        }
    ref.hv_ref.assign(m, 1.1);
    ref.available = true;
    return ref;
}

void snapshot_metrics(std::vector<MetricRow>& rows, const FrontReference& ref,
                      const Population& archive, int generation, long evaluations,
                      const TrustState& trust, double delta, double nd_ratio,
                      StabilizeEvent event) {
    MetricRow row;
    row.generation = generation;
    row.evaluations = evaluations;
    row.trust = trust.trust;
    row.phi = trust.phi;
    row.maturity = trust.maturity;
    row.delta = delta;
    row.nd_ratio = nd_ratio;
    row.checkpoint_event = event == StabilizeEvent::refresh
                               ? "refresh"
                               : (event == StabilizeEvent::rollback ? "rollback" : "none");
    if (ref.available && !archive.empty()) {
        std::vector<std::vector<double>> objs;
        objs.reserve(archive.size());
        for (const auto& s : archive.members)
            objs.push_back(normalize_one(s.f, ref.ideal, ref.nadir));
        std::vector<std::vector<double>> raw;
        raw.reserve(archive.size());
        for (const auto& s : archive.members) raw.push_back(s.f);
        row.igd_plus = igd_plus(raw, ref.points);
        row.hv = hypervolume(objs, ref.hv_ref);
    } else {
        row.igd_plus = std::numeric_limits<double>::quiet_NaN();
        row.hv = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
}

void check_finite(const Solution& s, const std::string& problem) {
    for (double v : s.f)
        if (!std::isfinite(v)) {
            std::string diag = "non-finite objective from " + problem + " at x=[";
            for (std::size_t j = 0; j < s.x.size() && j < 8; ++j) {
                if (j) diag += ", ";
                diag += std::to_string(s.x[j]);
            }
            if (s.x.size() > 8) diag += ", ...";
            diag += "]";
            throw std::runtime_error(diag);
        }
}

double nd_ratio_of(const Population& archive) {
    if (archive.empty()) return 0.0;
    return static_cast<double>(nondominated_indices(archive.members).size()) /
           static_cast<double>(archive.size());
}

} // namespace

RunResult run(const RunConfig& config, const ProblemDef& problem) {
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();
    const int n = config.population_size;
    const int t_max = config.max_generations;
    const int m = problem.num_objectives;
    const VariableStructure& structure = problem.structure;
    const TrustParams trust_params =
        config.trust.resolved(n, m, structure.group_count());
    const bool vanilla = config.algorithm == Algorithm::vanilla_taea;

    RngSeeder seeder(config.seed);
    RunResult result;
    MutationCounters mcount;
    ProbeCounters pcount;
    const FrontReference front_ref = make_front_reference(problem);

    // initial population, uniform in bounds
    Population population;
    population.capacity = n;
    {
        RngStream rng = seeder.stream(0, RngRole::init);
        for (int i = 0; i < n; ++i) {
            std::vector<double> x(problem.dimension);
            for (int j = 0; j < problem.dimension; ++j)
                x[j] = rng.uniform(problem.bounds.lower[j], problem.bounds.upper[j]);
            Solution s = problem.evaluated(std::move(x));
            check_finite(s, problem.name);
            population.members.push_back(std::move(s));
        }
    }
    result.evaluations = n;

    std::vector<double> ideal, nadir;
    {
        const auto nd = nondominated_indices(population.members);
        std::vector<Solution> nd_set;
        for (int i : nd) nd_set.push_back(population[i]);
        objective_extents(nd_set, ideal, nadir);
    }

    Population convergence = update_convergence_archive(population.members, n);
    Population preference = update_preference_archive(population.members, convergence, n,
                                                      trust_params, ideal, nadir);

    Checkpoint ckpt;
    if (!vanilla) {
        ckpt.archive = convergence;
        ckpt.score = archive_score(convergence, structure, config.checkpoint, trust_params,
                                   ideal, nadir);
        ckpt.ideal = ideal;
        ckpt.nadir = nadir;
        ckpt.initialized = true;
    }

    // per-objective extremes over C union checkpoint, tracked for the soft
    // elitism diagnostic
    auto archive_extremes = [&](const Population& a, const Population& b) {
        std::vector<double> best(m, std::numeric_limits<double>::infinity());
        for (const auto& s : a.members)
            for (int i = 0; i < m; ++i) best[i] = std::min(best[i], s.f[i]);
        for (const auto& s : b.members)
            for (int i = 0; i < m; ++i) best[i] = std::min(best[i], s.f[i]);
        return best;
    };
    std::vector<double> prev_extremes = archive_extremes(convergence, ckpt.archive);

    for (int t = 0; t < t_max; ++t) {
        TrustState trust = compute_trust_state(t, t_max, convergence, trust_params, ideal, nadir);
        SearchControls controls;
        if (vanilla) {
            // conventional two-archive cycle: exploration scheduled by raw
            // progress, every group active, no repair
            controls.p_explore =
                trust_params.p_max -
                (trust_params.p_max - trust_params.p_min) *
                    std::pow(trust.p, trust_params.lambda_exp);
            controls.k_active = structure.group_count();
            controls.rho = 0.0;
            trust.trust = 0.0;
            trust.maturity = 0.0;
        } else {
            controls = derive_controls(trust.trust, trust_params);
        }

        auto offspring = sparse_search_offspring(population, convergence, preference, controls,
                                                 structure, config.reproduction, seeder, t,
                                                 &mcount);
        double delta = 0.0;
        if (!vanilla) {
            const double r_nd = nd_ratio_of(convergence);
            int n_probe = 0;
            compensation_intensity(trust.trust, trust.p, r_nd, n, config.probe, delta, n_probe);
            auto probes = probe_offspring(convergence, trust.trust, trust.p, controls, structure,
                                          config.probe, n, config.reproduction.elite_fraction,
                                          seeder, t, &pcount);
            for (auto& s : probes) offspring.push_back(std::move(s));
        }

        for (auto& s : offspring) {
            problem.evaluate(s.x, s.f, s.violation);
            check_finite(s, problem.name);
        }
        result.evaluations += static_cast<long>(offspring.size());

        std::vector<Solution> unioned;
        unioned.reserve(population.size() + offspring.size() + convergence.size() +
                        preference.size());
        unioned.insert(unioned.end(), population.members.begin(), population.members.end());
        unioned.insert(unioned.end(), offspring.begin(), offspring.end());
        unioned.insert(unioned.end(), convergence.members.begin(), convergence.members.end());
        unioned.insert(unioned.end(), preference.members.begin(), preference.members.end());
        unioned = deduplicate(unioned);

        {
            const auto nd = nondominated_indices(unioned);
            std::vector<Solution> nd_set;
            nd_set.reserve(nd.size());
            for (int i : nd) nd_set.push_back(unioned[i]);
            objective_extents(nd_set, ideal, nadir);
        }

        Population intermediate = update_convergence_archive(unioned, n);
        StabilizeEvent event = StabilizeEvent::none;
        if (vanilla) {
            convergence = std::move(intermediate);
        } else {
            convergence = stabilize(intermediate, ckpt, trust.p, structure, config.checkpoint,
                                    trust_params, ideal, nadir, event);
            if (ckpt.score.gamma <= 0.0 && event != StabilizeEvent::none &&
                result.warnings.size() < 10)
                result.warnings.push_back("generation " + std::to_string(t) +
                                          ": checkpoint score non-positive, thresholds applied literally");
        }

        preference = update_preference_archive(unioned, convergence, n, trust_params, ideal,
                                               nadir);
        RngStream rebuild_rng = seeder.stream(t, RngRole::rebuild);
        population = rebuild_population(convergence, preference, n, rebuild_rng);

        // soft elitism diagnostic across stabilization
        {
            std::vector<double> extremes = archive_extremes(convergence, ckpt.archive);
            for (int i = 0; i < m; ++i)
                if (extremes[i] > prev_extremes[i] + 1e-12) {
                    ++result.elitism_warnings;
                    break;
                }
            prev_extremes = std::move(extremes);
        }

        const bool cadence_hit = config.metric_cadence > 0 &&
                                 (t % config.metric_cadence == 0 || t == t_max - 1);
        if (cadence_hit || event != StabilizeEvent::none)
            snapshot_metrics(result.metrics, front_ref, convergence, t, result.evaluations,
                             trust, delta, nd_ratio_of(convergence), event);
    }

    result.convergence_archive = std::move(convergence);
    result.preference_archive = std::move(preference);
    result.population = std::move(population);
    result.fallback_mutants = mcount.fallback_mutants;
    if (mcount.fallback_mutants > 0)
        result.warnings.push_back("mutant pool too small " +
                                  std::to_string(mcount.fallback_mutants) +
                                  " time(s); Gaussian fallback used");
    if (pcount.empty_elite_fallbacks > 0)
        result.warnings.push_back("probe elites drawn from the full archive " +
                                  std::to_string(pcount.empty_elite_fallbacks) + " time(s)");
    if (result.elitism_warnings > 0)
        result.warnings.push_back("per-objective best worsened in " +
                                  std::to_string(result.elitism_warnings) + " generation(s)");
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

} // namespace taea

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>

#include "taea/sparse_search.hpp"
#include "test_helpers.hpp"

using namespace taea;

namespace {

VariableStructure unit_structure(int d, int front = 1, int groups = 3) {
    Bounds b(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
    return VariableStructure(contiguous_grouping(d, front, groups), b,
                             [](int, std::span<const double>) { return 0.8; });
}

Solution sol(std::vector<double> x) {
    Solution s;
    s.x = std::move(x);
    s.f = {0.0, 0.0};
    return s;
}

} // namespace

TEST_CASE("group statistics dispersion and residual") {
    // one-variable group on [0,1], two elites at the bounds -> population std 0.5
    Bounds b({0.0, 0.0}, {1.0, 1.0});
    VariableStructure structure({{0}, {1}}, b,
                                [](int, std::span<const double>) { return 0.8; });
    std::vector<Solution> elite{sol({0.0, 0.0}), sol({0.0, 1.0})};
    const auto stats = group_statistics(elite, structure);
    CHECK(stats.spr[1] == doctest::Approx(0.5).epsilon(1e-12));

    // identical elites -> zero dispersion everywhere
    std::vector<Solution> same{sol({0.3, 0.4}), sol({0.3, 0.4})};
    const auto stats2 = group_statistics(same, structure);
    CHECK(stats2.spr[0] == 0.0);
    CHECK(stats2.spr[1] == 0.0);

    // elites exactly on the group target -> zero residual
    std::vector<Solution> on_target{sol({0.8, 0.8}), sol({0.8, 0.8})};
    const auto stats3 = group_statistics(on_target, structure);
    CHECK(stats3.res[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(stats3.res[1] == doctest::Approx(0.0).epsilon(1e-12));

    // single elite -> dispersion zero by the degenerate rule
    std::vector<Solution> single{sol({0.1, 0.9})};
    CHECK(group_statistics(single, structure).spr[1] == 0.0);
}

TEST_CASE("group weights: all-zero stats give uniform sampling") {
    ReproductionParams params;
    GroupStats stats;
    stats.spr = {0.0, 0.0, 0.0};
    stats.res = {0.0, 0.0, 0.0};
    compute_group_weights(stats, params);
    for (double w : stats.weight) CHECK(w == doctest::Approx(params.omega0).epsilon(1e-12));
    for (double p : stats.prob) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("sampling probabilities sum to one and never starve") {
    RngStream rng(RngSeeder(17).stream(0, RngRole::test).next_u64());
    ReproductionParams params;
    for (int it = 0; it < 200; ++it) {
        GroupStats stats;
        const int k = 2 + rng.uniform_int(0, 6);
        for (int i = 0; i < k; ++i) {
            stats.spr.push_back(rng.uniform(0, 3));
            stats.res.push_back(rng.uniform(0, 3));
        }
        compute_group_weights(stats, params);
        double sum = 0.0;
        for (double p : stats.prob) {
            CHECK(p > 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("single-group draws follow the sampling law") {
    // pi = (0.5, 0.3, 0.2) via weights
    GroupStats stats;
    stats.prob = {0.5, 0.3, 0.2};
    stats.weight = {0.5, 0.3, 0.2};
    stats.spr = {0, 0, 0};
    stats.res = {0, 0, 0};
    RngStream rng(RngSeeder(23).stream(0, RngRole::test).next_u64());
    const int draws = 100000;
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < draws; ++i) ++counts[sample_active_groups(stats, 1, rng)[0]];
    for (int k = 0; k < 3; ++k) {
        const double freq = static_cast<double>(counts[k]) / draws;
        CHECK(std::fabs(freq - stats.prob[k]) < 0.01);
        // three standard errors of a binomial proportion
        const double se = std::sqrt(stats.prob[k] * (1 - stats.prob[k]) / draws);
        CHECK(std::fabs(freq - stats.prob[k]) < 3.5 * se);
    }
}

TEST_CASE("k_active = K activates every dimension") {
    const auto structure = unit_structure(10, 1, 3);
    GroupStats stats;
    stats.prob = {0.25, 0.25, 0.25, 0.25};
    RngStream rng(RngSeeder(1).stream(0, RngRole::test).next_u64());
    const auto groups = sample_active_groups(stats, 4, rng);
    CHECK(groups == std::vector<int>{0, 1, 2, 3});
    const auto dims = active_dimension_set(structure, groups);
    CHECK(static_cast<int>(dims.size()) == 10);
    CHECK_THROWS_AS(sample_active_groups(stats, 5, rng), std::invalid_argument);
}

TEST_CASE("mutant hand values") {
    Bounds b({0.0}, {1.0});
    ReproductionParams params;
    params.f = 0.5;
    params.lambda = 0.5;

    std::vector<Solution> pool{sol({0.9}), sol({0.7}), sol({0.3})};
    std::vector<Solution> elite{sol({0.9})};
    Solution parent = sol({0.5});

    // exploit branch: x + F(g-x) + lambda*F*(b-c) with g=0.9 and {b,c} from the pool
    // all pool pairs give b-c in {±0.2, ±0.4, ±0.6}; check the exact expected value
    // for a forced draw by evaluating the formula directly
    const double expected = 0.5 + 0.5 * (0.9 - 0.5) + 0.25 * (0.7 - 0.3);
    CHECK(expected == doctest::Approx(0.8).epsilon(1e-12));

    // F = 0 collapses both branches
    ReproductionParams zero = params;
    zero.f = 0.0;
    RngStream rng(RngSeeder(2).stream(0, RngRole::test).next_u64());
    for (int it = 0; it < 20; ++it) {
        const auto exploit = generate_mutant(parent, pool, elite, 0.0, zero, b, rng);
        CHECK(exploit[0] == doctest::Approx(0.5).epsilon(1e-12));
        const auto explore = generate_mutant(parent, pool, elite, 1.0, zero, b, rng);
        // with F=0 the explore mutant equals one of the pool members
        const bool is_pool_member = explore[0] == 0.9 || explore[0] == 0.7 || explore[0] == 0.3;
        CHECK(is_pool_member);
    }
}

TEST_CASE("mutant falls back to a bounded perturbation on tiny pools") {
    Bounds b({0.0}, {1.0});
    ReproductionParams params;
    std::vector<Solution> pool{sol({0.4}), sol({0.4})};  // duplicates, cannot draw 3 distinct
    std::vector<Solution> elite{sol({0.9})};
    Solution parent = sol({0.5});
    MutationCounters counters;
    RngStream rng(RngSeeder(4).stream(0, RngRole::test).next_u64());
    const auto v = generate_mutant(parent, pool, elite, 1.0, params, b, rng, &counters);
    CHECK(counters.fallback_mutants == 1);
    CHECK(v[0] >= 0.0);
    CHECK(v[0] <= 1.0);
}

TEST_CASE("sparse crossover keeps inactive coordinates and repairs active ones") {
    const auto structure = unit_structure(6, 1, 2);  // front {0}, groups {1,2} {3,4,5}... by contiguous split
    ReproductionParams params;
    params.cr = 1.0;  // full crossover inside the active set
    Solution parent = sol({0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    std::vector<double> mutant{0.1, 0.2, 0.2, 0.2, 0.2, 0.2};
    std::vector<int> active{1, 2};
    RngStream rng(RngSeeder(6).stream(0, RngRole::test).next_u64());

    // rho = 0: repair is the identity on active dims
    auto trial0 = sparse_crossover_repair(parent, mutant, active, 0.0, structure, params, rng);
    CHECK(trial0.x[1] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(trial0.x[2] == doctest::Approx(0.2).epsilon(1e-12));
    for (int j : {0, 3, 4, 5}) CHECK(trial0.x[j] == 0.5);

    // rho = 1: active convergence coordinates land on the target 0.8
    auto trial1 = sparse_crossover_repair(parent, mutant, active, 1.0, structure, params, rng);
    CHECK(trial1.x[1] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(trial1.x[2] == doctest::Approx(0.8).epsilon(1e-12));

    // hand value: 0.2 pulled 45% toward 0.8 -> 0.47
    auto trial2 = sparse_crossover_repair(parent, mutant, active, 0.45, structure, params, rng);
    CHECK(trial2.x[1] == doctest::Approx(0.47).epsilon(1e-12));
}

TEST_CASE("repair convexity: repaired value lies between trial and target") {
    RngStream rng(RngSeeder(8).stream(0, RngRole::test).next_u64());
    const auto structure = unit_structure(4, 1, 1);
    ReproductionParams params;
    params.cr = 1.0;
    for (int it = 0; it < 1000; ++it) {
        Solution parent = sol({rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()});
        std::vector<double> mutant{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        const double rho = rng.uniform();
        std::vector<int> active{1, 2, 3};
        auto trial = sparse_crossover_repair(parent, mutant, active, rho, structure, params, rng);
        for (int j : active) {
            const double target = 0.8;
            // cr = 1 crosses every active dim, so the pre-repair value is the mutant
            CHECK(trial.x[j] ==
                  doctest::Approx((1.0 - rho) * mutant[j] + rho * target).epsilon(1e-12));
            const double lo = std::min(mutant[j], target) - 1e-12;
            const double hi = std::max(mutant[j], target) + 1e-12;
            CHECK(trial.x[j] >= lo);
            CHECK(trial.x[j] <= hi);
        }
    }
}

TEST_CASE("offspring sparsity: coordinates outside the active set never move") {
    RngStream seed_rng(RngSeeder(12).stream(0, RngRole::test).next_u64());
    const int d = 12;
    const auto structure = unit_structure(d, 2, 5);
    ReproductionParams params;
    for (int it = 0; it < 100; ++it) {
        Population pop, c_archive, a_archive;
        pop.capacity = 8;
        for (int i = 0; i < 8; ++i) {
            std::vector<double> x(d);
            for (double& v : x) v = seed_rng.uniform();
            Solution s = sol(std::move(x));
            s.f = {seed_rng.uniform(), seed_rng.uniform()};
            pop.members.push_back(s);
            c_archive.members.push_back(s);
        }
        c_archive.capacity = 8;
        a_archive = c_archive;

        SearchControls controls;
        controls.p_explore = seed_rng.uniform();
        controls.k_active = 1 + seed_rng.uniform_int(0, 4);
        controls.rho = seed_rng.uniform();

        RngSeeder seeder(1000 + it);
        const auto offspring = sparse_search_offspring(pop, c_archive, a_archive, controls,
                                                       structure, params, seeder, it);
        REQUIRE(offspring.size() == pop.size());

        // recover the active set for this generation deterministically
        const auto elite = select_elite(c_archive, params.elite_fraction, 8);
        auto stats = group_statistics(elite, structure);
        compute_group_weights(stats, params);
        RngStream group_rng = seeder.stream(it, RngRole::group_sampling);
        const auto groups = sample_active_groups(stats, controls.k_active, group_rng);
        const auto dims = active_dimension_set(structure, groups);
        std::set<int> active(dims.begin(), dims.end());

        for (std::size_t i = 0; i < offspring.size(); ++i)
            for (int j = 0; j < d; ++j)
                if (!active.count(j)) CHECK(offspring[i].x[j] == pop[i].x[j]);
    }
}

TEST_CASE("offspring generation is deterministic under a fixed seed") {
    const int d = 20;
    const auto structure = unit_structure(d, 1, 4);
    ReproductionParams params;
    RngStream init(RngSeeder(77).stream(0, RngRole::test).next_u64());
    Population pop, c_archive, a_archive;
    pop.capacity = 10;
    for (int i = 0; i < 10; ++i) {
        std::vector<double> x(d);
        for (double& v : x) v = init.uniform();
        Solution s = sol(std::move(x));
        s.f = {init.uniform(), init.uniform()};
        pop.members.push_back(s);
        c_archive.members.push_back(s);
    }
    c_archive.capacity = 10;
    a_archive = c_archive;
    SearchControls controls{0.5, 2, 0.3};

    RngSeeder seeder_a(42), seeder_b(42);
    const auto run_a =
        sparse_search_offspring(pop, c_archive, a_archive, controls, structure, params, seeder_a, 3);
    const auto run_b =
        sparse_search_offspring(pop, c_archive, a_archive, controls, structure, params, seeder_b, 3);
    REQUIRE(run_a.size() == run_b.size());
    for (std::size_t i = 0; i < run_a.size(); ++i)
        CHECK(same_decision_vector(run_a[i].x, run_b[i].x, 0.0));
}

TEST_CASE("one trial per parent") {
    const auto structure = unit_structure(8, 1, 2);
    ReproductionParams params;
    RngStream init(RngSeeder(99).stream(0, RngRole::test).next_u64());
    Population pop, c_archive, a_archive;
    pop.capacity = 100;
    for (int i = 0; i < 100; ++i) {
        std::vector<double> x(8);
        for (double& v : x) v = init.uniform();
        Solution s = sol(std::move(x));
        s.f = {init.uniform(), init.uniform()};
        pop.members.push_back(s);
        if (i < 20) c_archive.members.push_back(s);
    }
    c_archive.capacity = 100;
    a_archive.capacity = 100;
    SearchControls controls{0.7, 2, 0.2};
    RngSeeder seeder(7);
    const auto offspring = sparse_search_offspring(pop, c_archive, a_archive, controls, structure,
                                                   params, seeder, 0);
    CHECK(offspring.size() == 100);
}

TEST_CASE("ReproductionParams validation") {
    ReproductionParams p;
    p.omega0 = 0.0;
    p.omega1 = 0.5;
    p.omega2 = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ReproductionParams{};
    p.cr = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

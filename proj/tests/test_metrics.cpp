#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "taea/metrics.hpp"
#include "taea/rng.hpp"

using namespace taea;

TEST_CASE("igd_plus hand values") {
    std::vector<std::vector<double>> ref{{0, 1}, {1, 0}};
    std::vector<std::vector<double>> mid{{0.5, 0.5}};
    CHECK(igd_plus(mid, ref) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(igd_plus(ref, ref) == 0.0);

    std::vector<std::vector<double>> dominating{{-1, -1}};
    CHECK(igd_plus(dominating, ref) == 0.0);

    std::vector<std::vector<double>> bad{{1, 2, 3}};
    CHECK_THROWS_AS((void)igd_plus(bad, ref), std::invalid_argument);
}

TEST_CASE("igd_plus is monotone when points are added") {
    RngStream rng(RngSeeder(91).stream(0, RngRole::test).next_u64());
    for (int it = 0; it < 200; ++it) {
        std::vector<std::vector<double>> ref, approx;
        for (int i = 0; i < 10; ++i) ref.push_back({rng.uniform(), rng.uniform()});
        for (int i = 0; i < 5; ++i) approx.push_back({rng.uniform(), rng.uniform()});
        const double before = igd_plus(approx, ref);
        approx.push_back({rng.uniform(), rng.uniform()});
        CHECK(igd_plus(approx, ref) <= before + 1e-12);
    }
}

TEST_CASE("hypervolume 2d hand values") {
    std::vector<double> ref{1, 1};
    std::vector<std::vector<double>> one{{0.5, 0.5}};
    CHECK(hypervolume(one, ref) == doctest::Approx(0.25).epsilon(1e-12));

    std::vector<std::vector<double>> two{{0.25, 0.75}, {0.75, 0.25}};
    CHECK(hypervolume(two, ref) == doctest::Approx(0.3125).epsilon(1e-12));

    // points outside the reference box contribute nothing
    std::vector<std::vector<double>> outside{{1.5, 0.5}, {0.5, 1.5}};
    CHECK(hypervolume(outside, ref) == 0.0);

    std::vector<double> ref4{1, 1, 1, 1};
    std::vector<std::vector<double>> p4{{0.5, 0.5, 0.5, 0.5}};
    CHECK_THROWS_AS((void)hypervolume(p4, ref4), std::invalid_argument);
}

TEST_CASE("hypervolume 3d slicing against hand value") {
    std::vector<double> ref{1, 1, 1};
    std::vector<std::vector<double>> one{{0.5, 0.5, 0.5}};
    CHECK(hypervolume(one, ref) == doctest::Approx(0.125).epsilon(1e-12));

    // two disjoint-ish boxes: inclusion exclusion by hand
    std::vector<std::vector<double>> two{{0.5, 0.5, 0.5}, {0.0, 0.0, 0.9}};
    // box1 = 0.125, box2 = 1*1*0.1 = 0.1, overlap = 0.5*0.5*0.1 = 0.025
    CHECK(hypervolume(two, ref) == doctest::Approx(0.2).epsilon(1e-12));
}

namespace {

double monte_carlo_hv(const std::vector<std::vector<double>>& pts,
                      const std::vector<double>& ref, long samples, RngStream& rng) {
    const std::size_t m = ref.size();
    std::vector<double> lo(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = ref[i];
        for (const auto& p : pts) lo[i] = std::min(lo[i], p[i]);
    }
    double box = 1.0;
    for (std::size_t i = 0; i < m; ++i) box *= ref[i] - lo[i];
    if (box <= 0.0) return 0.0;
    long hits = 0;
    std::vector<double> z(m);
    for (long s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < m; ++i) z[i] = rng.uniform(lo[i], ref[i]);
        for (const auto& p : pts) {
            bool dom = true;
            for (std::size_t i = 0; i < m; ++i)
                if (p[i] > z[i]) { dom = false; break; }
            if (dom) { ++hits; break; }
        }
    }
    return box * static_cast<double>(hits) / static_cast<double>(samples);
}

} // namespace

TEST_CASE("hypervolume agrees with Monte Carlo on random instances") {
    RngStream rng(RngSeeder(101).stream(0, RngRole::test).next_u64());
    std::vector<double> ref2{1.1, 1.1}, ref3{1.1, 1.1, 1.1};
    for (int it = 0; it < 100; ++it) {
        const int n = 2 + rng.uniform_int(0, 8);
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(), rng.uniform()});
        const double exact = hypervolume(pts, ref2);
        const long samples = 100000;
        const double mc = monte_carlo_hv(pts, ref2, samples, rng);
        const double box = 1.1 * 1.1;
        const double sigma = box * std::sqrt(0.25 / samples);
        CHECK(std::fabs(exact - mc) < 3.5 * sigma + 1e-9);
    }
    for (int it = 0; it < 10; ++it) {
        const int n = 2 + rng.uniform_int(0, 10);
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < n; ++i)
            pts.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
        const double exact = hypervolume(pts, ref3);
        const long samples = 200000;
        const double mc = monte_carlo_hv(pts, ref3, samples, rng);
        const double box = 1.1 * 1.1 * 1.1;
        const double sigma = box * std::sqrt(0.25 / samples);
        CHECK(std::fabs(exact - mc) < 3.5 * sigma + 1e-9);
    }
}

TEST_CASE("hypervolume grows when a nondominated inside point is added") {
    RngStream rng(RngSeeder(111).stream(0, RngRole::test).next_u64());
    std::vector<double> ref{1, 1};
    for (int it = 0; it < 100; ++it) {
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < 5; ++i) pts.push_back({rng.uniform(0.3, 1.0), rng.uniform(0.3, 1.0)});
        const double before = hypervolume(pts, ref);
        pts.push_back({0.01, 0.01});  // dominates everything
        const double after = hypervolume(pts, ref);
        CHECK(after > before);
        // permutation invariance
        std::reverse(pts.begin(), pts.end());
        CHECK(hypervolume(pts, ref) == doctest::Approx(after).epsilon(1e-12));
    }
}

namespace {

// exact two-sided rank-sum p-value by enumerating all assignments (no ties)
double exact_rank_sum_p(std::vector<double> a, std::vector<double> b) {
    const int n1 = static_cast<int>(a.size());
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());
    // ranks of sample a
    double w_obs = 0.0;
    for (double v : a)
        w_obs += static_cast<double>(
                     std::lower_bound(pooled.begin(), pooled.end(), v) - pooled.begin()) +
                 1.0;
    const int n = static_cast<int>(pooled.size());
    const double mu = n1 * (n + 1) / 2.0;
    const double dev = std::fabs(w_obs - mu);

    long total = 0, extreme = 0;
    std::vector<int> comb(n1);
    for (int i = 0; i < n1; ++i) comb[i] = i;
    while (true) {
        double w = 0.0;
        for (int i : comb) w += i + 1;
        ++total;
        if (std::fabs(w - mu) >= dev - 1e-9) ++extreme;
        int k = n1 - 1;
        while (k >= 0 && comb[k] == n - n1 + k) --k;
        if (k < 0) break;
        ++comb[k];
        for (int i = k + 1; i < n1; ++i) comb[i] = comb[i - 1] + 1;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

} // namespace

TEST_CASE("wilcoxon trivial verdicts") {
    std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8};
    const auto same = wilcoxon_rank_sum(a, a, 0.05, true);
    CHECK(same.verdict == WilcoxonVerdict::approx);

    std::vector<double> b{101, 102, 103, 104, 105, 106, 107, 108, 109, 110};
    std::vector<double> lo{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto sep = wilcoxon_rank_sum(lo, b, 0.05, true);
    CHECK(sep.verdict == WilcoxonVerdict::plus);
    const auto sep_rev = wilcoxon_rank_sum(b, lo, 0.05, true);
    CHECK(sep_rev.verdict == WilcoxonVerdict::minus);

    std::vector<double> constant(6, 3.0);
    CHECK(wilcoxon_rank_sum(constant, constant, 0.05, true).verdict == WilcoxonVerdict::approx);

    std::vector<double> tiny{1, 2, 3};
    CHECK_THROWS_AS(wilcoxon_rank_sum(tiny, a, 0.05, true), std::invalid_argument);
}

TEST_CASE("wilcoxon p-value matches exact permutation distribution at n=8") {
    RngStream rng(RngSeeder(121).stream(0, RngRole::test).next_u64());
    for (int it = 0; it < 12; ++it) {
        std::vector<double> a(8), b(8);
        for (double& v : a) v = rng.uniform(0, 1);
        for (double& v : b) v = rng.uniform(0, 1) + 0.1 * it / 12.0;
        const auto approx = wilcoxon_rank_sum(a, b, 0.05, true);
        const double exact = exact_rank_sum_p(a, b);
        CHECK(std::fabs(approx.p_value - exact) <= 0.01);
    }
}

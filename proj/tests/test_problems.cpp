#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "lsmop_oracle.hpp"
#include "taea/metrics.hpp"
#include "taea/problems.hpp"
#include "test_helpers.hpp"

using namespace taea;

TEST_CASE("lsmop objectives match the independent oracle on random points") {
    RngStream rng(RngSeeder(131).stream(0, RngRole::test).next_u64());
    for (int id = 1; id <= 9; ++id) {
        for (int m : {2, 3}) {
            const int d = m == 2 ? 120 : 150;
            const auto problem = lsmop_problem(id, m, d);
            for (int it = 0; it < 12; ++it) {
                std::vector<double> x(d);
                for (int j = 0; j < d; ++j)
                    x[j] = rng.uniform(problem.bounds.lower[j], problem.bounds.upper[j]);
                std::vector<double> f;
                double violation;
                problem.evaluate(x, f, violation);
                const auto want = lsmop_oracle::evaluate(id, m, d, x);
                REQUIRE(f.size() == want.size());
                for (int i = 0; i < m; ++i)
                    CHECK(f[i] == doctest::Approx(want[i]).epsilon(1e-9));
                CHECK(violation == 0.0);
            }
        }
    }
}

TEST_CASE("lsmop objectives match the oracle at the bound corners") {
    for (int id = 1; id <= 9; ++id) {
        const int m = 2, d = 80;
        const auto problem = lsmop_problem(id, m, d);
        for (int corner = 0; corner < 2; ++corner) {
            std::vector<double> x = corner ? problem.bounds.upper : problem.bounds.lower;
            std::vector<double> f;
            double violation;
            problem.evaluate(x, f, violation);
            const auto want = lsmop_oracle::evaluate(id, m, d, x);
            for (int i = 0; i < m; ++i) {
                CHECK(std::isfinite(f[i]));
                CHECK(f[i] == doctest::Approx(want[i]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("structure target puts the distance variables on the optimum") {
    // at the target pattern every aggregation function vanishes, so the
    // objective vector lands on the analytic front manifold
    for (int id = 1; id <= 9; ++id) {
        const int m = 2, d = 90;
        const auto problem = lsmop_problem(id, m, d);
        std::vector<double> x(d, 0.0);
        x[0] = 0.35;
        for (int j = m - 1; j < d; ++j) x[j] = problem.structure.target(j, x);
        std::vector<double> f;
        double violation;
        problem.evaluate(x, f, violation);
        if (id <= 4) {
            CHECK(f[0] + f[1] == doctest::Approx(1.0).epsilon(1e-6));
        } else if (id <= 8) {
            CHECK(f[0] * f[0] + f[1] * f[1] == doctest::Approx(1.0).epsilon(1e-6));
        } else {
            const double manifold =
                4.0 - f[0] * (1.0 + std::sin(3.0 * 3.14159265358979323846 * f[0]));
            CHECK(f[1] == doctest::Approx(manifold).epsilon(1e-6));
        }
    }
}

TEST_CASE("small dimensions still produce a valid layout") {
    // the published layout rule needs a large D; tiny instances shrink the
    // subcomponent table instead of failing
    const auto problem = lsmop_problem(1, 2, 10);
    std::vector<double> x(10, 0.5);
    std::vector<double> f;
    double violation;
    problem.evaluate(x, f, violation);
    CHECK(f.size() == 2);
    for (double v : f) CHECK(std::isfinite(v));
    CHECK_THROWS_AS(lsmop_layout(0, 2, 100), std::invalid_argument);
    CHECK_THROWS_AS(lsmop_layout(1, 2, 2), std::invalid_argument);
}

TEST_CASE("true front samples satisfy the manifold equation") {
    for (int id = 1; id <= 9; ++id) {
        for (int m : {2, 3}) {
            const auto front = true_front_sample(id, m, 200);
            REQUIRE(static_cast<int>(front.size()) == 200);
            for (const auto& f : front) {
                REQUIRE(static_cast<int>(f.size()) == m);
                if (id <= 4) {
                    double sum = 0.0;
                    for (double v : f) sum += v;
                    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
                } else if (id <= 8) {
                    double norm = 0.0;
                    for (double v : f) norm += v * v;
                    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
                } else {
                    double h = static_cast<double>(m);
                    for (int i = 0; i < m - 1; ++i)
                        h -= f[i] / 2.0 * (1.0 + std::sin(3.0 * 3.14159265358979323846 * f[i]));
                    CHECK(f[m - 1] == doctest::Approx(2.0 * h).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("front samples are mutually nondominated") {
    for (int id : {1, 5, 9}) {
        for (int m : {2, 3}) {
            const auto front = true_front_sample(id, m, 120);
            std::vector<Solution> set;
            for (const auto& f : front) {
                Solution s;
                s.f = f;
                set.push_back(std::move(s));
            }
            const auto nd = nondominated_indices(set);
            CHECK(nd.size() == set.size());
        }
    }
}

TEST_CASE("linear front endpoints included for n=2") {
    const auto front = true_front_sample(1, 2, 2);
    REQUIRE(front.size() == 2);
    CHECK(front[0][0] == doctest::Approx(0.0));
    CHECK(front[0][1] == doctest::Approx(1.0));
    CHECK(front[1][0] == doctest::Approx(1.0));
    CHECK(front[1][1] == doctest::Approx(0.0));
}

TEST_CASE("nested sampling: sparse sample stays within its covering radius") {
    for (int id : {1, 5, 9}) {
        const int n = 100;
        const auto sparse = true_front_sample(id, 2, n);
        const auto dense = true_front_sample(id, 2, 10 * n);
        const double igdp = igd_plus(sparse, dense);
        // covering radius of the sparse set measured on the dense set
        double cover = 0.0;
        for (const auto& z : dense) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& a : sparse) {
                double s = 0.0;
                for (std::size_t i = 0; i < z.size(); ++i)
                    s += (a[i] - z[i]) * (a[i] - z[i]);
                best = std::min(best, s);
            }
            cover = std::max(cover, std::sqrt(best));
        }
        CHECK(igdp <= cover + 1e-12);
        // a set equal to a front sample scores below the sample spacing
        CHECK(igdp < 4.0 / n);
    }
}

TEST_CASE("layout uses five subcomponents and stays inside the distance block") {
    const auto lay = lsmop_layout(1, 2, 500);
    CHECK(lay.nk == 5);
    REQUIRE(lay.sublen.size() == 2);
    CHECK(lay.sublen[0] == 28);  // floor(0.342/1.19714 * 499/5)
    CHECK(lay.sublen[1] == 71);
    int used = 0;
    for (int s : lay.sublen) used += lay.nk * s;
    CHECK(used <= 499);
    // ownership table covers exactly the used block
    CHECK(lay.owning_objective(0) == -1);   // front variable
    CHECK(lay.owning_objective(1) == 0);    // first distance variable
    CHECK(lay.owning_objective(1 + 5 * 28) == 1);
    CHECK(lay.owning_objective(499) == -1); // tail beyond the used block
}

TEST_CASE("target provider respects bounds") {
    const auto problem = lsmop_problem(3, 2, 60);  // Rosenbrock targets can push high
    std::vector<double> x(60, 0.0);
    x[0] = 1.0;  // worst case for the linkage inverse
    for (int j = 1; j < 60; ++j) {
        const double t = problem.structure.target(j, x);
        CHECK(t >= problem.bounds.lower[j]);
        CHECK(t <= problem.bounds.upper[j]);
    }
}

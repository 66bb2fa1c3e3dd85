#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "taea/core.hpp"
#include "taea/structure.hpp"

namespace taea {

struct ProblemDef {
    std::string name;
    int num_objectives = 0;
    int dimension = 0;
    Bounds bounds;
    // fills f and the violation sum; deterministic and pure
    std::function<void(std::span<const double> x, std::vector<double>& f, double& violation)>
        evaluate;
    VariableStructure structure;
    // analytic Pareto-front sampler; empty when the true front is unknown
    std::function<std::vector<std::vector<double>>(int n)> front_sampler;

    Solution evaluated(std::vector<double> x) const;
};

// Internal layout of one LSMOP instance: per-objective subcomponent lengths
// and offsets into the distance-variable block.
struct LsmopLayout {
    int id = 1;
    int m = 2;
    int d = 0;
    int nk = 5;                 // subcomponents per objective
    std::vector<int> sublen;    // per-objective subcomponent length
    std::vector<int> offset;    // start of each objective's block (within distance vars)
    bool linear_linkage = true; // LSMOP1-4 linear, LSMOP5-9 cosine

    // linkage multiplier of decision variable j (0-based), distance vars only
    double linkage_coefficient(int j) const;
    // objective owning distance variable j, or -1 when unused by any objective
    int owning_objective(int j) const;
};

enum class BasicFn { sphere, griewank, schwefel, rastrigin, rosenbrock, ackley };

BasicFn lsmop_basic_fn(int id, int objective_index); // objective_index 0-based
double evaluate_basic(BasicFn fn, std::span<const double> y);

LsmopLayout lsmop_layout(int id, int m, int d);

// Full benchmark instance, including bounds, structure with the suite's known
// distance-variable optimum pattern as repair target, and a front sampler.
ProblemDef lsmop_problem(int id, int m, int d, int convergence_groups = 5);

std::vector<double> evaluate_lsmop(int id, int m, int d, std::span<const double> x);

std::vector<std::vector<double>> true_front_sample(int id, int m, int n);

} // namespace taea

#pragma once

#include <string>
#include <vector>

#include "taea/config.hpp"
#include "taea/engine.hpp"
#include "taea/microgrid.hpp"

namespace taea {

// Canonical per-run file prefix: problem, objectives, dimension, algorithm, seed.
std::string run_tag(const RunConfig& config);

ProblemDef make_problem(const RunConfig& config);

struct RunFiles {
    std::string metrics;
    std::string front;
    std::string manifest;
};

std::string metrics_csv(const RunResult& result);
std::string front_csv(const Population& archive, bool x_dump);

// Executes one run and writes metrics CSV, front CSV and the manifest into
// out_dir. The problem is built from the config's problem name.
RunFiles run_and_persist(const RunConfig& config, const std::string& out_dir, bool x_dump);

struct SweepSpec {
    std::string param;             // "lambda_exp" or "p_start"
    std::vector<double> values;    // defaults applied when empty
    std::vector<std::string> problems;
    int seed_count = 5;
    RunConfig base;
};

// Cross-product of (value x problem x seed); per-run files plus an aggregate
// CSV land in out_dir. Worker count follows TRUST_TAEA_THREADS (0 = auto).
std::string run_sweep(const SweepSpec& spec, const std::string& out_dir);

struct MicrogridRunArgs {
    RunConfig solver;
    std::string scenario;  // path, or "synthetic:<seed>"
    std::string out_dir = ".";
    bool x_dump = false;
};

MicrogridScenario resolve_scenario(const std::string& spec);

struct MicrogridOutcome {
    int exit_status = 0;
    bool feasible_found = false;
    std::vector<double> knee_objectives;
    std::string front_file;
    std::string schedule_file;
    std::string report_file;
};

MicrogridOutcome cmd_microgrid(const MicrogridRunArgs& args);

struct StatsArgs {
    std::string dir_a;
    std::string dir_b;
    double alpha = 0.05;
    std::string metric = "igd_plus";  // or "hv"
};

// Per-problem Wilcoxon verdict table for two run-set directories; returns the
// printable report. Throws on mismatched problem sets.
std::string cmd_stats(const StatsArgs& args);

int worker_count();

} // namespace taea

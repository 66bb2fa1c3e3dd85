#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>

#include "taea/cli.hpp"
#include "taea/config.hpp"

namespace {

using taea::RunConfig;

struct CommonFlags {
    std::string problem;
    int m = 0;
    int d = 0;
    int pop = 0;
    int gens = 0;
    std::uint64_t seed = 0;
    std::string algo;
    std::string config_file;
    double p_start = -1.0;
    double lambda_exp = -1.0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_problem) {
    if (with_problem) cmd->add_option("--problem", flags.problem, "problem id, e.g. LSMOP1");
    cmd->add_option("--m", flags.m, "objective count");
    cmd->add_option("--d", flags.d, "decision dimension");
    cmd->add_option("--pop", flags.pop, "population size (default 100)");
    cmd->add_option("--gens", flags.gens, "maximum generations (default 500)");
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--algo", flags.algo, "trust-taea or vanilla-taea");
    cmd->add_option("--config", flags.config_file, "key=value config file");
    cmd->add_option("--p-start", flags.p_start, "probe activation threshold");
    cmd->add_option("--lambda-exp", flags.lambda_exp, "exploration exponent");
}

// config file first, explicit flags on top
RunConfig resolve_config(const CLI::App* cmd, const CommonFlags& flags) {
    RunConfig config;
    if (!flags.config_file.empty())
        taea::apply_settings(config, taea::load_key_value_file(flags.config_file));
    const auto* problem_opt = cmd->get_option_no_throw("--problem");
    if (problem_opt && problem_opt->count()) config.problem = flags.problem;
    if (cmd->count("--m")) config.num_objectives = flags.m;
    if (cmd->count("--d")) config.dimension = flags.d;
    if (cmd->count("--pop")) config.population_size = flags.pop;
    if (cmd->count("--gens")) config.max_generations = flags.gens;
    if (cmd->count("--seed")) config.seed = flags.seed;
    if (cmd->count("--algo")) config.algorithm = taea::parse_algorithm(flags.algo);
    if (cmd->count("--p-start")) config.probe.p_start = flags.p_start;
    if (cmd->count("--lambda-exp")) config.trust.lambda_exp = flags.lambda_exp;
    return config;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"TRUST-TAEA: trustworthiness-guided two-archive optimizer"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "execute one optimization run");
    CommonFlags run_flags;
    std::string run_out = ".";
    bool run_xdump = false;
    add_common(run_cmd, run_flags, true);
    run_cmd->add_option("--out", run_out, "output directory");
    run_cmd->add_flag("--x-dump", run_xdump, "include decision variables in the front CSV");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sensitivity sweep");
    CommonFlags sweep_flags;
    std::string sweep_param, sweep_values, sweep_problems, sweep_out = ".";
    int sweep_seeds = 5;
    add_common(sweep_cmd, sweep_flags, false);
    sweep_cmd->add_option("--param", sweep_param, "lambda_exp or p_start")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated parameter values");
    sweep_cmd->add_option("--problems", sweep_problems, "comma-separated problem ids")->required();
    sweep_cmd->add_option("--seeds", sweep_seeds, "number of seeds per cell");
    sweep_cmd->add_option("--out", sweep_out, "output directory");

    // microgrid
    auto* mg_cmd = app.add_subcommand("microgrid", "three-objective day-ahead dispatch");
    CommonFlags mg_flags;
    std::string mg_scenario = "synthetic:1", mg_out = ".";
    bool mg_xdump = false;
    std::string mg_dump_scenario;
    add_common(mg_cmd, mg_flags, false);
    mg_cmd->add_option("--scenario", mg_scenario, "scenario CSV path or synthetic:<seed>");
    mg_cmd->add_option("--out", mg_out, "output directory");
    mg_cmd->add_flag("--x-dump", mg_xdump, "include decision variables in the front CSV");
    mg_cmd->add_option("--dump-scenario", mg_dump_scenario,
                       "write the resolved scenario CSV to this path and continue");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Wilcoxon comparison of two run sets");
    taea::StatsArgs stats_args;
    stats_cmd->add_option("dir_a", stats_args.dir_a, "first run directory")->required();
    stats_cmd->add_option("dir_b", stats_args.dir_b, "second run directory")->required();
    stats_cmd->add_option("--alpha", stats_args.alpha, "significance level");
    stats_cmd->add_option("--metric", stats_args.metric, "igd_plus or hv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const RunConfig config = resolve_config(run_cmd, run_flags);
            const auto files = taea::run_and_persist(config, run_out, run_xdump);
            std::cout << files.metrics << "\n" << files.front << "\n" << files.manifest << "\n";
            return 0;
        }
        if (sweep_cmd->parsed()) {
            taea::SweepSpec spec;
            spec.param = sweep_param;
            for (const auto& v : split_list(sweep_values)) spec.values.push_back(std::stod(v));
            spec.problems = split_list(sweep_problems);
            spec.seed_count = sweep_seeds;
            spec.base = resolve_config(sweep_cmd, sweep_flags);
            const std::string agg = taea::run_sweep(spec, sweep_out);
            std::cout << agg << "\n";
            return 0;
        }
        if (mg_cmd->parsed()) {
            if (!mg_dump_scenario.empty())
                taea::save_scenario_file(taea::resolve_scenario(mg_scenario), mg_dump_scenario);
            taea::MicrogridRunArgs args;
            args.solver = resolve_config(mg_cmd, mg_flags);
            args.scenario = mg_scenario;
            args.out_dir = mg_out;
            args.x_dump = mg_xdump;
            const auto outcome = taea::cmd_microgrid(args);
            std::cout << outcome.front_file << "\n"
                      << outcome.schedule_file << "\n"
                      << outcome.report_file << "\n";
            if (!outcome.feasible_found)
                std::cerr << "warning: no zero-violation solution in the final archive\n";
            return outcome.exit_status;
        }
        if (stats_cmd->parsed()) {
            std::cout << taea::cmd_stats(stats_args);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

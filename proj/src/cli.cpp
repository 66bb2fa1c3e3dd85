#include "taea/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "taea/csv.hpp"
#include "taea/metrics.hpp"

namespace taea {

namespace fs = std::filesystem;

std::string run_tag(const RunConfig& config) {
    std::ostringstream tag;
    tag << config.problem << "_M" << config.num_objectives << "_D" << config.dimension << '_'
        << algorithm_name(config.algorithm) << "_seed" << config.seed;
    return tag.str();
}

ProblemDef make_problem(const RunConfig& config) {
    std::string name = config.problem;
    std::transform(name.begin(), name.end(), name.begin(), ::toupper);
    if (name.rfind("LSMOP", 0) == 0 && name.size() == 6 && name[5] >= '1' && name[5] <= '9') {
        return lsmop_problem(name[5] - '0', config.num_objectives, config.dimension,
                             config.convergence_groups);
    }
    throw std::invalid_argument("unknown problem: " + config.problem);
}

std::string metrics_csv(const RunResult& result) {
    std::ostringstream out;
    out << "generation,evaluations,hv,igd_plus,trust,phi,maturity,delta,nd_ratio,"
           "checkpoint_event\n";
    for (const auto& r : result.metrics) {
        out << r.generation << ',' << r.evaluations << ',' << fmt_double(r.hv) << ','
            << fmt_double(r.igd_plus) << ',' << fmt_double(r.trust) << ',' << fmt_double(r.phi)
            << ',' << fmt_double(r.maturity) << ',' << fmt_double(r.delta) << ','
            << fmt_double(r.nd_ratio) << ',' << r.checkpoint_event << "\n";
    }
    return out.str();
}

std::string front_csv(const Population& archive, bool x_dump) {
    std::ostringstream out;
    if (archive.empty()) return out.str();
    const std::size_t m = archive[0].f.size();
    for (std::size_t i = 0; i < m; ++i) out << (i ? "," : "") << 'f' << (i + 1);
    if (x_dump)
        for (std::size_t j = 0; j < archive[0].x.size(); ++j) out << ",x" << (j + 1);
    out << "\n";
    for (const auto& s : archive.members) {
        for (std::size_t i = 0; i < m; ++i) out << (i ? "," : "") << fmt_double(s.f[i]);
        if (x_dump)
            for (double v : s.x) out << ',' << fmt_double(v);
        out << "\n";
    }
    return out.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

} // namespace

RunFiles run_and_persist(const RunConfig& config, const std::string& out_dir, bool x_dump) {
    const ProblemDef problem = make_problem(config);
    const RunResult result = run(config, problem);

    fs::create_directories(out_dir);
    const std::string tag = (fs::path(out_dir) / run_tag(config)).string();
    RunFiles files{tag + ".metrics.csv", tag + ".front.csv", tag + ".manifest.txt"};
    write_file(files.metrics, metrics_csv(result));
    write_file(files.front, front_csv(result.convergence_archive, x_dump));
    write_file(files.manifest, write_manifest(config));
    return files;
}

int worker_count() {
    if (const char* env = std::getenv("TRUST_TAEA_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::string run_sweep(const SweepSpec& spec, const std::string& out_dir) {
    if (spec.param != "lambda_exp" && spec.param != "p_start")
        throw std::invalid_argument("sweep param must be lambda_exp or p_start");
    std::vector<double> values = spec.values;
    if (values.empty())
        values = spec.param == "lambda_exp" ? std::vector<double>{0.75, 1.0, 1.25}
                                            : std::vector<double>{0.05, 0.12, 0.30};
    if (spec.problems.empty()) throw std::invalid_argument("sweep needs at least one problem");
    if (spec.seed_count < 1) throw std::invalid_argument("sweep needs at least one seed");

    struct Job {
        RunConfig config;
        double value;
        std::string problem;
        double final_igd = std::numeric_limits<double>::quiet_NaN();
        double final_hv = std::numeric_limits<double>::quiet_NaN();
    };
    std::vector<Job> jobs;
    for (double value : values) {
        for (const auto& problem : spec.problems) {
            for (int s = 0; s < spec.seed_count; ++s) {
                Job job;
                job.config = spec.base;
                job.config.problem = problem;
                job.config.seed = spec.base.seed + static_cast<std::uint64_t>(s);
                if (spec.param == "lambda_exp")
                    job.config.trust.lambda_exp = value;
                else
                    job.config.probe.p_start = value;
                job.value = value;
                job.problem = problem;
                jobs.push_back(std::move(job));
            }
        }
    }

    fs::create_directories(out_dir);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            Job& job = jobs[i];
            const ProblemDef problem = make_problem(job.config);
            const RunResult result = run(job.config, problem);
            if (!result.metrics.empty()) {
                job.final_igd = result.metrics.back().igd_plus;
                job.final_hv = result.metrics.back().hv;
            }
            std::ostringstream tag;
            tag << spec.param << fmt_double(job.value) << '_' << run_tag(job.config);
            const std::string base = (fs::path(out_dir) / tag.str()).string();
            write_file(base + ".metrics.csv", metrics_csv(result));
            write_file(base + ".manifest.txt", write_manifest(job.config));
        }
    };
    const int workers = std::min<int>(worker_count(), static_cast<int>(jobs.size()));
    std::vector<std::thread> threads;
    for (int w = 1; w < workers; ++w) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    // aggregate per (value, problem) cell, iteration order fixed by the job list
    std::ostringstream agg;
    agg << "param,value,problem,m,d,runs,igd_plus_mean,igd_plus_std,igd_plus_median,"
           "hv_mean,hv_std,hv_median\n";
    auto stats_of = [](std::vector<double> v, double& mean, double& stdev, double& median) {
        const int n = static_cast<int>(v.size());
        mean = 0.0;
        for (double x : v) mean += x;
        mean /= n;
        stdev = 0.0;
        for (double x : v) stdev += (x - mean) * (x - mean);
        stdev = n > 1 ? std::sqrt(stdev / (n - 1)) : 0.0;
        std::sort(v.begin(), v.end());
        median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    for (double value : values) {
        for (const auto& problem : spec.problems) {
            std::vector<double> igd, hv;
            int m = 0, d = 0;
            for (const Job& job : jobs) {
                if (job.value == value && job.problem == problem) {
                    igd.push_back(job.final_igd);
                    hv.push_back(job.final_hv);
                    m = job.config.num_objectives;
                    d = job.config.dimension;
                }
            }
            double im, is, imed, hm, hs, hmed;
            stats_of(igd, im, is, imed);
            stats_of(hv, hm, hs, hmed);
            agg << spec.param << ',' << fmt_double(value) << ',' << problem << ',' << m << ','
                << d << ',' << igd.size() << ',' << fmt_double(im) << ',' << fmt_double(is)
                << ',' << fmt_double(imed) << ',' << fmt_double(hm) << ',' << fmt_double(hs)
                << ',' << fmt_double(hmed) << "\n";
        }
    }
    const std::string agg_path =
        (fs::path(out_dir) / ("sweep_" + spec.param + ".csv")).string();
    write_file(agg_path, agg.str());
    return agg_path;
}

namespace {

std::string schedule_csv(const MicrogridDispatch& d) {
    std::ostringstream out;
    out << "t,grid_kw,gen_kw,ch_kw,dis_kw,dr_kw,cur_kw,soc_kwh\n";
    for (std::size_t i = 0; i < d.grid.size(); ++i) {
        out << (i + 1) << ',' << fmt_double(d.grid[i]) << ',' << fmt_double(d.gen[i]) << ','
            << fmt_double(d.charge[i]) << ',' << fmt_double(d.discharge[i]) << ','
            << fmt_double(d.dr[i]) << ',' << fmt_double(d.curtail[i]) << ','
            << fmt_double(d.soc[i]) << "\n";
    }
    return out.str();
}

std::string feasibility_report(const MicrogridViolation& v, bool feasible_found,
                               std::span<const double> knee) {
    std::ostringstream out;
    out << "feasible_solution_found=" << (feasible_found ? "yes" : "no") << "\n";
    if (!knee.empty()) {
        out << "selected_f1=" << fmt_double(knee[0]) << "\n";
        out << "selected_f2=" << fmt_double(knee[1]) << "\n";
        out << "selected_f3=" << fmt_double(knee[2]) << "\n";
    }
    out << "violation_grid_negative=" << fmt_double(v.grid_negative) << "\n";
    out << "violation_gen_ramp=" << fmt_double(v.gen_ramp) << "\n";
    out << "violation_soc_bounds=" << fmt_double(v.soc_bounds) << "\n";
    out << "violation_dr_energy=" << fmt_double(v.dr_energy) << "\n";
    out << "violation_terminal_soc=" << fmt_double(v.terminal_soc) << "\n";
    out << "violation_total=" << fmt_double(v.total()) << "\n";
    return out.str();
}

} // namespace

MicrogridScenario resolve_scenario(const std::string& spec) {
    if (spec.rfind("synthetic", 0) == 0) {
        std::uint64_t seed = 1;
        const auto colon = spec.find(':');
        if (colon != std::string::npos) seed = std::stoull(spec.substr(colon + 1));
        return generate_scenario(seed);
    }
    return load_scenario_file(spec);
}

MicrogridOutcome cmd_microgrid(const MicrogridRunArgs& args) {
    const MicrogridScenario scenario = resolve_scenario(args.scenario);
    const ProblemDef problem = microgrid_problem(scenario);

    RunConfig config = args.solver;
    config.problem = "microgrid";
    config.num_objectives = problem.num_objectives;
    config.dimension = problem.dimension;

    const RunResult result = run(config, problem);

    fs::create_directories(args.out_dir);
    const std::string tag = (fs::path(args.out_dir) / run_tag(config)).string();
    MicrogridOutcome outcome;
    outcome.front_file = tag + ".front.csv";
    outcome.schedule_file = tag + ".schedule.csv";
    outcome.report_file = tag + ".feasibility.txt";
    write_file(tag + ".metrics.csv", metrics_csv(result));
    write_file(outcome.front_file, front_csv(result.convergence_archive, args.x_dump));
    write_file(tag + ".manifest.txt", write_manifest(config));

    // knee: the feasible nondominated solution with the smallest normalized
    // objective norm
    std::vector<const Solution*> feasible;
    for (const auto& s : result.convergence_archive.members)
        if (s.violation == 0.0) feasible.push_back(&s);

    const Solution* knee = nullptr;
    if (!feasible.empty()) {
        std::vector<Solution> feas_copy;
        feas_copy.reserve(feasible.size());
        for (const auto* s : feasible) feas_copy.push_back(*s);
        const auto nd = nondominated_indices(feas_copy);
        std::vector<double> ideal, nadir;
        std::vector<Solution> nd_set;
        for (int i : nd) nd_set.push_back(feas_copy[i]);
        objective_extents(nd_set, ideal, nadir);
        double best_norm = std::numeric_limits<double>::infinity();
        for (int i : nd) {
            const auto nf = normalize_one(feas_copy[i].f, ideal, nadir);
            double norm = 0.0;
            for (double v : nf) norm += v * v;
            if (norm < best_norm) {
                best_norm = norm;
                knee = feasible[i];
            }
        }
    } else if (!result.convergence_archive.empty()) {
        // infeasible-only front: report the least-violating solution
        knee = &result.convergence_archive[0];
        for (const auto& s : result.convergence_archive.members)
            if (s.violation < knee->violation) knee = &s;
    }

    outcome.feasible_found = !feasible.empty();
    if (knee) {
        outcome.knee_objectives = knee->f;
        const auto dispatch = microgrid_decode(knee->x, scenario);
        write_file(outcome.schedule_file, schedule_csv(dispatch));
        const auto breakdown = microgrid_violation_breakdown(knee->x, scenario);
        write_file(outcome.report_file,
                   feasibility_report(breakdown, outcome.feasible_found, knee->f));
    }
    outcome.exit_status = outcome.feasible_found ? 0 : 1;
    return outcome;
}

namespace {

struct RunEntry {
    double metric;
    std::string front_path;
};

std::map<std::string, std::vector<RunEntry>> collect_runs(const std::string& dir,
                                                          const std::string& metric) {
    std::map<std::string, std::vector<RunEntry>> groups;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        const std::string suffix = ".metrics.csv";
        if (name.size() <= suffix.size() ||
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0)
            continue;
        const auto seed_pos = name.rfind("_seed");
        if (seed_pos == std::string::npos) continue;
        std::string key = name.substr(0, seed_pos);
        // the problem identity excludes the algorithm, so trust and vanilla
        // run sets line up
        for (const char* algo : {"_trust_taea", "_vanilla_taea"}) {
            const auto pos = key.rfind(algo);
            if (pos != std::string::npos && pos + std::strlen(algo) == key.size()) {
                key.erase(pos);
                break;
            }
        }
        const CsvTable table = read_csv(entry.path().string());
        const auto column = table.numeric_column(metric);
        if (column.empty()) continue;
        std::string front = entry.path().string();
        front.replace(front.size() - suffix.size(), suffix.size(), ".front.csv");
        groups[key].push_back({column.back(), front});
    }
    return groups;
}

std::vector<std::vector<double>> load_front(const std::string& path) {
    const CsvTable table = read_csv(path);
    std::vector<std::vector<double>> points;
    int m = 0;
    while (table.column("f" + std::to_string(m + 1)) >= 0) ++m;
    for (const auto& row : table.rows) {
        std::vector<double> f(m);
        for (int i = 0; i < m; ++i) f[i] = std::strtod(row[i].c_str(), nullptr);
        points.push_back(std::move(f));
    }
    return points;
}

// problems without an analytic front report nan in the metrics CSV; their
// IGD+ is computed against the empirical reference front, the nondominated
// union of all compared runs
void fill_empirical_igd(std::vector<RunEntry>& a, std::vector<RunEntry>& b) {
    std::vector<Solution> pool;
    for (const auto* side : {&a, &b})
        for (const auto& entry : *side)
            for (auto& f : load_front(entry.front_path)) {
                Solution s;
                s.f = std::move(f);
                pool.push_back(std::move(s));
            }
    if (pool.empty()) return;
    const auto nd = nondominated_indices(pool);
    std::vector<std::vector<double>> reference;
    reference.reserve(nd.size());
    for (int i : nd) reference.push_back(pool[i].f);
    for (auto* side : {&a, &b})
        for (auto& entry : *side) {
            const auto front = load_front(entry.front_path);
            entry.metric = front.empty() ? std::numeric_limits<double>::infinity()
                                         : igd_plus(front, reference);
        }
}

} // namespace

std::string cmd_stats(const StatsArgs& args) {
    const bool lower_better = args.metric != "hv";
    auto groups_a = collect_runs(args.dir_a, args.metric);
    auto groups_b = collect_runs(args.dir_b, args.metric);
    if (groups_a.empty() || groups_b.empty())
        throw std::invalid_argument("stats: no runs found in one of the directories");

    std::set<std::string> keys_a, keys_b;
    for (const auto& [k, _] : groups_a) keys_a.insert(k);
    for (const auto& [k, _] : groups_b) keys_b.insert(k);
    if (keys_a != keys_b)
        throw std::invalid_argument("stats: run directories cover different problem sets");

    std::ostringstream out;
    out << "problem,verdict,p_value\n";
    int plus = 0, minus = 0, approx = 0;
    for (const auto& key : keys_a) {
        auto& entries_a = groups_a.at(key);
        auto& entries_b = groups_b.at(key);
        auto has_nan = [](const std::vector<RunEntry>& v) {
            for (const auto& e : v)
                if (std::isnan(e.metric)) return true;
            return false;
        };
        if (args.metric == "igd_plus" && (has_nan(entries_a) || has_nan(entries_b)))
            fill_empirical_igd(entries_a, entries_b);
        std::vector<double> a, b;
        for (const auto& e : entries_a) a.push_back(e.metric);
        for (const auto& e : entries_b) b.push_back(e.metric);
        const auto res = wilcoxon_rank_sum(a, b, args.alpha, lower_better);
        const char* verdict = res.verdict == WilcoxonVerdict::plus
                                  ? "+"
                                  : (res.verdict == WilcoxonVerdict::minus ? "-" : "≈");
        if (res.verdict == WilcoxonVerdict::plus) ++plus;
        else if (res.verdict == WilcoxonVerdict::minus) ++minus;
        else ++approx;
        out << key << ',' << verdict << ',' << fmt_double(res.p_value) << "\n";
    }
    out << "+/-/≈," << plus << '/' << minus << '/' << approx << ",\n";
    return out.str();
}

} // namespace taea

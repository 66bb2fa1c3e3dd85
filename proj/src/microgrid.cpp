#include "taea/microgrid.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "taea/csv.hpp"
#include "taea/rng.hpp"

namespace taea {

void MicrogridScenario::validate() const {
    if (t_periods < 2) throw std::invalid_argument("scenario: need at least 2 periods");
    const std::size_t t = static_cast<std::size_t>(t_periods);
    if (load.size() != t || renewable.size() != t || grid_price.size() != t ||
        grid_emission.size() != t || dr_max.size() != t)
        throw std::invalid_argument("scenario: profile length mismatch");
    if (!(eta_charge > 0.0 && eta_charge <= 1.0 && eta_discharge > 0.0 && eta_discharge <= 1.0))
        throw std::invalid_argument("scenario: battery efficiencies must be in (0,1]");
    if (!(e_min <= e_initial && e_initial <= e_max))
        throw std::invalid_argument("scenario: initial SOC outside [e_min, e_max]");
    for (double v : load)
        if (v < 0.0) throw std::invalid_argument("scenario: negative load");
    for (double v : renewable)
        if (v < 0.0) throw std::invalid_argument("scenario: negative renewable");
}

MicrogridDispatch microgrid_decode(std::span<const double> x, const MicrogridScenario& sc) {
    const int t = sc.t_periods;
    if (static_cast<int>(x.size()) != 5 * t)
        throw std::invalid_argument("microgrid_decode: decision vector length mismatch");
    MicrogridDispatch d;
    auto clipped = [&](int offset, int i, double hi) {
        const double v = x[offset * t + i];
        return v < 0.0 ? 0.0 : (v > hi ? hi : v);
    };
    d.gen.resize(t);
    d.charge.resize(t);
    d.discharge.resize(t);
    d.dr.resize(t);
    d.curtail.resize(t);
    d.grid.resize(t);
    d.soc.resize(t);
    const double dt = sc.dt_hours();
    double energy = sc.e_initial;
    for (int i = 0; i < t; ++i) {
        d.gen[i] = clipped(0, i, sc.p_gen_max);
        d.charge[i] = clipped(1, i, sc.p_charge_max);
        d.discharge[i] = clipped(2, i, sc.p_discharge_max);
        d.dr[i] = clipped(3, i, sc.dr_max[i]);
        d.curtail[i] = clipped(4, i, sc.renewable[i]);
        d.grid[i] = sc.load[i] - d.dr[i] + d.charge[i] + d.curtail[i] -
                    (d.gen[i] + d.discharge[i] + sc.renewable[i]);
        energy += sc.eta_charge * dt * d.charge[i] - dt / sc.eta_discharge * d.discharge[i];
        d.soc[i] = energy;
    }
    return d;
}

MicrogridViolation microgrid_violation_breakdown(std::span<const double> x,
                                                 const MicrogridScenario& sc) {
    const MicrogridDispatch d = microgrid_decode(x, sc);
    const int t = sc.t_periods;
    const double dt = sc.dt_hours();
    MicrogridViolation v;
    double dr_energy = 0.0;
    for (int i = 0; i < t; ++i) {
        if (d.grid[i] < 0.0) v.grid_negative += -d.grid[i];
        if (i > 0) {
            const double ramp = std::fabs(d.gen[i] - d.gen[i - 1]);
            if (ramp > sc.gen_ramp) v.gen_ramp += ramp - sc.gen_ramp;
        }
        if (d.soc[i] > sc.e_max) v.soc_bounds += d.soc[i] - sc.e_max;
        if (d.soc[i] < sc.e_min) v.soc_bounds += sc.e_min - d.soc[i];
        dr_energy += dt * d.dr[i];
    }
    if (dr_energy > sc.e_dr_max) v.dr_energy = dr_energy - sc.e_dr_max;
    const double terminal = std::fabs(d.soc[t - 1] - sc.e_initial);
    if (terminal > sc.soc_tolerance) v.terminal_soc = terminal - sc.soc_tolerance;
    return v;
}

void microgrid_evaluate(std::span<const double> x, const MicrogridScenario& sc,
                        std::vector<double>& f, double& violation) {
    const MicrogridDispatch d = microgrid_decode(x, sc);
    const int t = sc.t_periods;
    const double dt = sc.dt_hours();
    double cost = 0.0, emission = 0.0, ramp = 0.0;
    for (int i = 0; i < t; ++i) {
        cost += sc.grid_price[i] * d.grid[i] + sc.gen_cost * d.gen[i] +
                sc.battery_cost * (d.charge[i] + d.discharge[i]) + sc.dr_cost * d.dr[i] +
                sc.cur_cost * d.curtail[i];
        emission += sc.grid_emission[i] * d.grid[i] + sc.gen_emission * d.gen[i];
        if (i > 0) ramp += std::fabs(d.grid[i] - d.grid[i - 1]);
    }
    f.assign(3, 0.0);
    f[0] = dt * cost;
    f[1] = dt * emission;
    f[2] = ramp / static_cast<double>(t - 1);
    violation = microgrid_violation_breakdown(x, sc).total();
}

ProblemDef microgrid_problem(const MicrogridScenario& sc) {
    sc.validate();
    const int t = sc.t_periods;
    const int d = 5 * t;
    std::vector<double> lower(d, 0.0), upper(d);
    for (int i = 0; i < t; ++i) {
        upper[i] = sc.p_gen_max;
        upper[t + i] = sc.p_charge_max;
        upper[2 * t + i] = sc.p_discharge_max;
        upper[3 * t + i] = std::max(sc.dr_max[i], 1e-9);
        upper[4 * t + i] = std::max(sc.renewable[i], 1e-9);
    }
    Bounds bounds(std::move(lower), std::move(upper));

    // front group: the generator block; convergence groups: the four
    // flexibility blocks, all with the no-intervention dispatch as target
    std::vector<std::vector<int>> groups(5);
    for (int i = 0; i < t; ++i) {
        groups[0].push_back(i);
        groups[1].push_back(t + i);
        groups[2].push_back(2 * t + i);
        groups[3].push_back(3 * t + i);
        groups[4].push_back(4 * t + i);
    }

    ProblemDef def;
    def.name = "microgrid";
    def.num_objectives = 3;
    def.dimension = d;
    def.bounds = bounds;
    def.evaluate = [sc](std::span<const double> x, std::vector<double>& f, double& violation) {
        microgrid_evaluate(x, sc, f, violation);
    };
    def.structure = VariableStructure(std::move(groups), bounds,
                                      [](int, std::span<const double>) { return 0.0; });
    return def;
}

MicrogridScenario generate_scenario(const ScenarioProfileParams& p, std::uint64_t seed) {
    MicrogridScenario sc;
    sc.t_periods = p.t_periods;
    const int t = p.t_periods;
    sc.load.resize(t);
    sc.renewable.resize(t);
    sc.grid_price.resize(t);
    sc.grid_emission.resize(t);
    sc.dr_max.resize(t);

    RngSeeder seeder(seed);
    RngStream rng = seeder.stream(0, RngRole::scenario);
    auto bump = [](double h, double center, double width) {
        const double z = (h - center) / width;
        return std::exp(-0.5 * z * z);
    };
    for (int i = 0; i < t; ++i) {
        const double h = (i + 0.5) * 24.0 / t; // period midpoint hour
        double load = p.base_load + p.day_bump * bump(h, p.day_center, p.day_width) +
                      p.evening_bump * bump(h, p.evening_center, p.evening_width);
        double re = 0.0;
        if (h > p.sunrise && h < p.sunset)
            re = p.renewable_peak * bump(h, p.renewable_center, p.renewable_width);
        load *= 1.0 + p.jitter * rng.uniform(-1.0, 1.0);
        re *= 1.0 + p.jitter * rng.uniform(-1.0, 1.0);
        sc.load[i] = load;
        sc.renewable[i] = re;

        // time-of-use tariff tiers
        double price = 0.32, emission = 0.60;
        if ((h >= 7.0 && h < 10.0) || (h >= 15.0 && h < 18.0) || (h >= 21.0 && h < 23.0)) {
            price = 0.68;
        } else if ((h >= 10.0 && h < 15.0) || (h >= 18.0 && h < 21.0)) {
            price = 1.05;
            emission = 0.72;
        }
        sc.grid_price[i] = price;
        sc.grid_emission[i] = emission;
        sc.dr_max[i] = 0.15 * load;
    }
    sc.validate();
    return sc;
}

MicrogridScenario generate_scenario(std::uint64_t seed) {
    return generate_scenario(ScenarioProfileParams{}, seed);
}

std::string write_scenario(const MicrogridScenario& sc) {
    std::ostringstream out;
    const double dt = sc.dt_hours();
    double load_total = 0.0, re_total = 0.0;
    for (int i = 0; i < sc.t_periods; ++i) {
        load_total += dt * sc.load[i];
        re_total += dt * sc.renewable[i];
    }
    out << "#load_total_kwh=" << fmt_double(load_total) << "\n";
    out << "#re_total_kwh=" << fmt_double(re_total) << "\n";
    out << "#gen_cost=" << fmt_double(sc.gen_cost) << "\n";
    out << "#gen_emission=" << fmt_double(sc.gen_emission) << "\n";
    out << "#battery_cost=" << fmt_double(sc.battery_cost) << "\n";
    out << "#dr_cost=" << fmt_double(sc.dr_cost) << "\n";
    out << "#cur_cost=" << fmt_double(sc.cur_cost) << "\n";
    out << "#p_gen_max=" << fmt_double(sc.p_gen_max) << "\n";
    out << "#p_charge_max=" << fmt_double(sc.p_charge_max) << "\n";
    out << "#p_discharge_max=" << fmt_double(sc.p_discharge_max) << "\n";
    out << "#gen_ramp=" << fmt_double(sc.gen_ramp) << "\n";
    out << "#e_dr_max=" << fmt_double(sc.e_dr_max) << "\n";
    out << "#eta_charge=" << fmt_double(sc.eta_charge) << "\n";
    out << "#eta_discharge=" << fmt_double(sc.eta_discharge) << "\n";
    out << "#e_min=" << fmt_double(sc.e_min) << "\n";
    out << "#e_max=" << fmt_double(sc.e_max) << "\n";
    out << "#e_initial=" << fmt_double(sc.e_initial) << "\n";
    out << "#soc_tolerance=" << fmt_double(sc.soc_tolerance) << "\n";
    out << "t,load_kw,re_kw,price,emission_factor,dr_max_kw\n";
    for (int i = 0; i < sc.t_periods; ++i) {
        out << (i + 1) << ',' << fmt_double(sc.load[i]) << ',' << fmt_double(sc.renewable[i])
            << ',' << fmt_double(sc.grid_price[i]) << ',' << fmt_double(sc.grid_emission[i])
            << ',' << fmt_double(sc.dr_max[i]) << "\n";
    }
    return out.str();
}

MicrogridScenario parse_scenario(const std::string& text) {
    MicrogridScenario sc;
    sc.load.clear();
    sc.renewable.clear();
    sc.grid_price.clear();
    sc.grid_emission.clear();
    sc.dr_max.clear();
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(1, eq - 1);
            const double value = std::stod(line.substr(eq + 1));
            if (key == "gen_cost") sc.gen_cost = value;
            else if (key == "gen_emission") sc.gen_emission = value;
            else if (key == "battery_cost") sc.battery_cost = value;
            else if (key == "dr_cost") sc.dr_cost = value;
            else if (key == "cur_cost") sc.cur_cost = value;
            else if (key == "p_gen_max") sc.p_gen_max = value;
            else if (key == "p_charge_max") sc.p_charge_max = value;
            else if (key == "p_discharge_max") sc.p_discharge_max = value;
            else if (key == "gen_ramp") sc.gen_ramp = value;
            else if (key == "e_dr_max") sc.e_dr_max = value;
            else if (key == "eta_charge") sc.eta_charge = value;
            else if (key == "eta_discharge") sc.eta_discharge = value;
            else if (key == "e_min") sc.e_min = value;
            else if (key == "e_max") sc.e_max = value;
            else if (key == "e_initial") sc.e_initial = value;
            else if (key == "soc_tolerance") sc.soc_tolerance = value;
            // totals in the header are informational
            continue;
        }
        if (!header_seen) {
            header_seen = true; // column names
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 6)
            throw std::runtime_error("parse_scenario: expected 6 columns, got line: " + line);
        sc.load.push_back(std::stod(fields[1]));
        sc.renewable.push_back(std::stod(fields[2]));
        sc.grid_price.push_back(std::stod(fields[3]));
        sc.grid_emission.push_back(std::stod(fields[4]));
        sc.dr_max.push_back(std::stod(fields[5]));
    }
    sc.t_periods = static_cast<int>(sc.load.size());
    sc.validate();
    return sc;
}

MicrogridScenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void save_scenario_file(const MicrogridScenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << write_scenario(sc);
}

} // namespace taea

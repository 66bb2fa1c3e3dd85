#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "taea/problems.hpp"

namespace taea {

// One representative day of a grid-connected microgrid: per-period profiles
// plus device parameters. Powers in kW, energies in kWh, prices per kWh.
struct MicrogridScenario {
    int t_periods = 96;
    std::vector<double> load;           // L_t
    std::vector<double> renewable;      // available renewable power
    std::vector<double> grid_price;     // c_t^grid
    std::vector<double> grid_emission;  // e_t^grid, kg/kWh
    std::vector<double> dr_max;         // per-period demand-response cap

    double gen_cost = 0.85;
    double gen_emission = 0.45;
    double battery_cost = 0.05;
    double dr_cost = 0.40;
    double cur_cost = 0.10;

    double p_gen_max = 150.0;
    double p_charge_max = 60.0;
    double p_discharge_max = 60.0;
    double gen_ramp = 40.0;         // per-period generator ramp limit
    double e_dr_max = 300.0;        // daily demand-response energy cap
    double eta_charge = 0.95;
    double eta_discharge = 0.95;
    double e_min = 100.0;
    double e_max = 300.0;
    double e_initial = 180.0;
    double soc_tolerance = 5.0;     // terminal |E_T - E_0| allowance

    double dt_hours() const { return 24.0 / t_periods; }
    int dimension() const { return 5 * t_periods; }
    void validate() const;
};

// Decoded dispatch blocks of one decision vector.
struct MicrogridDispatch {
    std::vector<double> gen, charge, discharge, dr, curtail;
    std::vector<double> grid;  // P_t^grid from the power balance
    std::vector<double> soc;   // E_t after each period
};

struct MicrogridViolation {
    double grid_negative = 0.0;
    double gen_ramp = 0.0;
    double soc_bounds = 0.0;
    double dr_energy = 0.0;
    double terminal_soc = 0.0;

    double total() const {
        return grid_negative + gen_ramp + soc_bounds + dr_energy + terminal_soc;
    }
};

MicrogridDispatch microgrid_decode(std::span<const double> x, const MicrogridScenario& sc);

void microgrid_evaluate(std::span<const double> x, const MicrogridScenario& sc,
                        std::vector<double>& f, double& violation);

MicrogridViolation microgrid_violation_breakdown(std::span<const double> x,
                                                 const MicrogridScenario& sc);

// ProblemDef wrapper: front variables are the generator block, the remaining
// blocks form the convergence groups with a zero-action repair target.
ProblemDef microgrid_problem(const MicrogridScenario& sc);

struct ScenarioProfileParams {
    double base_load = 233.0;       // kW
    double day_bump = 120.0;        // broad daytime bump amplitude
    double day_center = 14.0;       // hours
    double day_width = 4.5;
    double evening_bump = 80.0;
    double evening_center = 19.5;
    double evening_width = 1.8;
    double renewable_peak = 320.0;  // kW
    double renewable_center = 12.5; // hours
    double renewable_width = 3.2;
    double sunrise = 5.0;
    double sunset = 20.0;
    double jitter = 0.02;           // multiplicative, seeded
    int t_periods = 96;
};

MicrogridScenario generate_scenario(const ScenarioProfileParams& params, std::uint64_t seed);
MicrogridScenario generate_scenario(std::uint64_t seed);

// Scenario CSV with '#key=value' device scalars followed by the per-period table.
std::string write_scenario(const MicrogridScenario& sc);
MicrogridScenario parse_scenario(const std::string& text);
MicrogridScenario load_scenario_file(const std::string& path);
void save_scenario_file(const MicrogridScenario& sc, const std::string& path);

} // namespace taea

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace glv::whatif {

// A measured workload: instruction count, cycles, and clock frequency.
// T = C / f = I / (IPC * f); IPC is held constant under scaling.
struct MeasuredProfile {
    double instructions = 0;
    double cycles = 0;
    double frequency_hz = 0;

    double time_seconds() const { return cycles / frequency_hz; }
    double ipc() const { return instructions / cycles; }
};

// Frequency and register-width scaling knobs. instruction_ratio overrides
// the built-in per-width defaults when set (e.g. from a counting-backend
// measurement).
struct Scenario {
    double freq_multiplier = 1.0;
    int register_width_bits = 128;
    std::optional<double> instruction_ratio;
};

struct PowerCostModel {
    double dynamic_fraction = 0.8;   // share of CPU power that is dynamic
    double dynamic_multiplier = 2.0; // uplift applied to the dynamic share
    double cpu_share = 0.61;         // CPU share of server power
    double energy_cost_share = 0.0;  // gamma: energy share of total cost
};

// Fraction of baseline (128-bit) instructions needed at the given width:
// 1.0 / 0.543 / 0.453 for 128 / 256 / 512 bits. Throws on other widths.
double register_width_ratio(int width_bits);

// T' = (C/f) * rho(width) / m: instruction count scales cycles at constant
// IPC, frequency divides time.
double predict_time(const MeasuredProfile& profile, const Scenario& scenario);

// (1 - d) + d * mu.
double cpu_power_uplift(const PowerCostModel& model);

// (1 - s) + s * cpu_power_uplift.
double datacenter_power_uplift(const PowerCostModel& model);

// gamma * (datacenter_power_uplift - 1).
double cost_increment(const PowerCostModel& model);

struct ScenarioRow {
    Scenario scenario;
    double normalized_time = 0;   // baseline_ratio * rho / m
    double improvement_pct = 0;   // (1 - normalized_time) * 100, 2 dp
};

// Applies each scenario to a normalized baseline execution time (target
// machine time divided by reference machine time).
std::vector<ScenarioRow> scenario_report(double baseline_ratio,
                                         const std::vector<Scenario>& scenarios);

// Round-half-even to two decimal places.
double round_percent(double pct);

} // namespace glv::whatif

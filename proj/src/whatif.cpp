#include "glv/whatif.hpp"

#include <cmath>

#include "glv/errors.hpp"

namespace glv::whatif {

double register_width_ratio(int width_bits) {
    switch (width_bits) {
    case 128:
        return 1.0;
    case 256:
        return 0.543; // 45.7% fewer instructions than 128-bit
    case 512:
        return 0.453; // 54.7% fewer
    default:
        throw DomainError("register_width_ratio: width must be 128, 256, or 512");
    }
}

double predict_time(const MeasuredProfile& profile, const Scenario& scenario) {
    if (profile.instructions <= 0 || profile.cycles <= 0 || profile.frequency_hz <= 0) {
        throw DomainError("predict_time: profile fields must be positive");
    }
    if (scenario.freq_multiplier <= 0) {
        throw DomainError("predict_time: freq_multiplier must be positive");
    }
    double rho = scenario.instruction_ratio
                     ? *scenario.instruction_ratio
                     : register_width_ratio(scenario.register_width_bits);
    if (rho <= 0) {
        throw DomainError("predict_time: instruction ratio must be positive");
    }
    return profile.time_seconds() * rho / scenario.freq_multiplier;
}

double cpu_power_uplift(const PowerCostModel& model) {
    if (model.dynamic_fraction < 0 || model.dynamic_fraction > 1 ||
        model.dynamic_multiplier <= 0) {
        throw DomainError("cpu_power_uplift: d in [0,1], mu > 0 required");
    }
    return (1.0 - model.dynamic_fraction) + model.dynamic_fraction * model.dynamic_multiplier;
}

double datacenter_power_uplift(const PowerCostModel& model) {
    if (model.cpu_share < 0 || model.cpu_share > 1) {
        throw DomainError("datacenter_power_uplift: s in [0,1] required");
    }
    return (1.0 - model.cpu_share) + model.cpu_share * cpu_power_uplift(model);
}

double cost_increment(const PowerCostModel& model) {
    if (model.energy_cost_share < 0 || model.energy_cost_share > 1) {
        throw DomainError("cost_increment: gamma in [0,1] required");
    }
    return model.energy_cost_share * (datacenter_power_uplift(model) - 1.0);
}

std::vector<ScenarioRow> scenario_report(double baseline_ratio,
                                         const std::vector<Scenario>& scenarios) {
    if (baseline_ratio <= 0) {
        throw DomainError("scenario_report: baseline_ratio must be positive");
    }
    std::vector<ScenarioRow> rows;
    rows.reserve(scenarios.size());
    for (const Scenario& s : scenarios) {
        double rho = s.instruction_ratio ? *s.instruction_ratio
                                         : register_width_ratio(s.register_width_bits);
        if (s.freq_multiplier <= 0 || rho <= 0) {
            throw DomainError("scenario_report: m and rho must be positive");
        }
        ScenarioRow row;
        row.scenario = s;
        row.normalized_time = baseline_ratio * rho / s.freq_multiplier;
        row.improvement_pct = round_percent((1.0 - row.normalized_time) * 100.0);
        rows.push_back(row);
    }
    return rows;
}

double round_percent(double pct) {
    double scaled = pct * 100.0;
    double floor_v = std::floor(scaled);
    double frac = scaled - floor_v;
    double r;
    if (frac > 0.5) {
        r = floor_v + 1;
    } else if (frac < 0.5) {
        r = floor_v;
    } else {
        // ties to even
        r = std::fmod(floor_v, 2.0) == 0.0 ? floor_v : floor_v + 1;
    }
    return r / 100.0;
}

} // namespace glv::whatif

#pragma once

// JSON and CSV encodings for configs, thresholds, schedules and reports.

#include <iosfwd>

#include <json.hpp>

#include "desal/model.hpp"
#include "desal/oracle.hpp"
#include "desal/policy.hpp"
#include "desal/scenario.hpp"
#include "desal/sim.hpp"

namespace desal {

using nlohmann::json;

struct ConfigDocument {
    PlantConfig plant;
    Tariff tariff;
};

/// {"tdp": {...}, "rodp": {...}, "demand_floor": x, "tariff": {...}}
json config_to_json(const PlantConfig& plant, const Tariff& tariff);

/// Parses and validates. A supplied beta_h must equal alpha_h / eta_h.
/// Throws ConfigError on missing fields or invariant violations.
ConfigDocument config_from_json(const json& doc);

json to_json(const ThresholdSet& t);
ThresholdSet thresholds_from_json(const json& doc);

json to_json(const DispatchPoint& p);

json stats_to_json(const HourlyStats& stats);
HourlyStats stats_from_json(const json& doc);

json to_json(const CertificationReport& report);
json to_json(const DaySchedule& day);
json to_json(const McSummary& summary);

/// Columns: hour,g,w_h,w_r,q_h,q_r,z,profit,zone
void write_schedule_csv(std::ostream& out, const DaySchedule& day);

/// Columns: hour,g_mean,w_h_p5,w_h_p50,w_h_p95,w_r_p5,w_r_p50,w_r_p95,z_p5,z_p50,z_p95
void write_summary_csv(std::ostream& out, const McSummary& summary);

}  // namespace desal

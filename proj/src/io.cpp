#include "desal/io.hpp"

#include <cmath>
#include <ostream>

#include <fmt/core.h>

namespace desal {

namespace {

double number(const json& obj, const char* key, const char* where) {
    if (!obj.is_object() || !obj.contains(key))
        throw ConfigError(fmt::format("missing field {}.{}", where, key));
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(fmt::format("field {}.{} is not a number", where, key));
    return v.get<double>();
}

const json& section(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key) || !doc.at(key).is_object())
        throw ConfigError(fmt::format("missing object '{}'", key));
    return doc.at(key);
}

HourArray hour_array(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_array() || doc.at(key).size() != kHours)
        throw ScenarioError(fmt::format("stats: '{}' must be an array of {} numbers", key, kHours));
    HourArray out{};
    for (std::size_t h = 0; h < kHours; ++h) {
        const json& v = doc.at(key).at(h);
        if (!v.is_number() || !std::isfinite(v.get<double>()))
            throw ScenarioError(fmt::format("stats: {}[{}] is not a finite number", key, h));
        out[h] = v.get<double>();
    }
    return out;
}

json quantiles_json(const std::array<Quantiles, kHours>& q) {
    json out = {{"p5", json::array()}, {"p50", json::array()}, {"p95", json::array()}};
    for (const auto& x : q) {
        out["p5"].push_back(x.p5);
        out["p50"].push_back(x.p50);
        out["p95"].push_back(x.p95);
    }
    return out;
}

}  // namespace

json config_to_json(const PlantConfig& plant, const Tariff& tariff) {
    const TdpParams& t = plant.tdp;
    return {
        {"tdp",
         {{"alpha_h", t.alpha_h},
          {"eta_h", t.eta_h},
          {"beta_h", t.beta_h()},
          {"w_min_h", t.w_min_h},
          {"w_max_h", t.w_max_h},
          {"cost", {{"a", t.cost.a}, {"b", t.cost.b}}}}},
        {"rodp", {{"alpha_r", plant.rodp.alpha_r}, {"w_min_r", plant.rodp.w_min_r}, {"w_max_r", plant.rodp.w_max_r}}},
        {"demand_floor", plant.demand_floor},
        {"tariff", {{"pi_water", tariff.pi_water}, {"pi_buy", tariff.pi_buy}, {"pi_sell", tariff.pi_sell}}},
    };
}

ConfigDocument config_from_json(const json& doc) {
    ConfigDocument out;
    const json& tdp = section(doc, "tdp");
    const json& cost = section(tdp, "cost");
    const json& ro = section(doc, "rodp");
    const json& tariff = section(doc, "tariff");

    out.plant.tdp.alpha_h = number(tdp, "alpha_h", "tdp");
    out.plant.tdp.eta_h = number(tdp, "eta_h", "tdp");
    out.plant.tdp.w_min_h = number(tdp, "w_min_h", "tdp");
    out.plant.tdp.w_max_h = number(tdp, "w_max_h", "tdp");
    out.plant.tdp.cost.a = number(cost, "a", "tdp.cost");
    out.plant.tdp.cost.b = number(cost, "b", "tdp.cost");
    out.plant.rodp.alpha_r = number(ro, "alpha_r", "rodp");
    out.plant.rodp.w_min_r = number(ro, "w_min_r", "rodp");
    out.plant.rodp.w_max_r = number(ro, "w_max_r", "rodp");
    out.plant.demand_floor = doc.contains("demand_floor") ? number(doc, "demand_floor", "config") : 0.0;
    out.tariff.pi_water = number(tariff, "pi_water", "tariff");
    out.tariff.pi_buy = number(tariff, "pi_buy", "tariff");
    out.tariff.pi_sell = number(tariff, "pi_sell", "tariff");

    require_valid(out.plant, out.tariff);
    if (tdp.contains("beta_h")) {
        const double beta = number(tdp, "beta_h", "tdp");
        if (!approx_equal(beta, out.plant.tdp.beta_h()))
            throw ConfigError(fmt::format("invalid configuration: beta_h = {} but alpha_h / eta_h = {}", beta,
                                          out.plant.tdp.beta_h()));
    }
    return out;
}

json to_json(const ThresholdSet& t) {
    return {{"regime", std::string(to_string(t.regime))},
            {"w_h_im", t.w_h_im},
            {"w_h_nz", t.w_h_nz},
            {"w_h_ex", t.w_h_ex},
            {"ro_lo", t.ro_lo},
            {"ro_hi", t.ro_hi},
            {"gamma_im", t.gamma_im},
            {"g_lo", t.g_lo},
            {"g_hi", t.g_hi},
            {"gamma_ex", t.gamma_ex}};
}

ThresholdSet thresholds_from_json(const json& doc) {
    ThresholdSet t;
    if (!doc.contains("regime") || !doc.at("regime").is_string()) throw ConfigError("thresholds: missing regime");
    try {
        t.regime = regime_from_string(doc.at("regime").get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("thresholds: ") + e.what());
    }
    t.w_h_im = number(doc, "w_h_im", "thresholds");
    t.w_h_nz = number(doc, "w_h_nz", "thresholds");
    t.w_h_ex = number(doc, "w_h_ex", "thresholds");
    t.ro_lo = number(doc, "ro_lo", "thresholds");
    t.ro_hi = number(doc, "ro_hi", "thresholds");
    t.gamma_im = number(doc, "gamma_im", "thresholds");
    t.g_lo = number(doc, "g_lo", "thresholds");
    t.g_hi = number(doc, "g_hi", "thresholds");
    t.gamma_ex = number(doc, "gamma_ex", "thresholds");
    return t;
}

json to_json(const DispatchPoint& p) {
    return {{"w_h", p.w_h}, {"w_r", p.w_r}, {"q_h", p.q_h}, {"q_r", p.q_r},
            {"p_h", p.p_h}, {"g", p.g},     {"z", p.z}};
}

json stats_to_json(const HourlyStats& stats) {
    return {{"mean", stats.mean}, {"std", stats.std}, {"median", stats.median}};
}

HourlyStats stats_from_json(const json& doc) {
    if (!doc.is_object()) throw ScenarioError("stats: expected a JSON object");
    HourlyStats s;
    s.mean = hour_array(doc, "mean");
    s.std = hour_array(doc, "std");
    s.median = doc.contains("median") ? hour_array(doc, "median") : s.mean;
    for (std::size_t h = 0; h < kHours; ++h)
        if (s.std[h] < 0.0) throw ScenarioError(fmt::format("stats: std[{}] is negative", h));
    return s;
}

json to_json(const CertificationReport& r) {
    json samples = json::array();
    for (const auto& s : r.samples)
        samples.push_back({{"g", s.g},
                           {"policy_profit", s.policy_profit},
                           {"zonewise_profit", s.zonewise_profit},
                           {"grid_profit", s.grid_profit},
                           {"grid_error_bound", s.grid_error_bound},
                           {"gap", s.gap},
                           {"pass", s.pass}});
    return {{"status", r.status},
            {"pi_water", r.tariff.pi_water},
            {"tolerance", r.tolerance},
            {"grid_steps", r.grid_steps},
            {"worst_gap", r.worst_gap},
            {"worst_gap_g", r.worst_gap_g},
            {"samples", samples}};
}

json to_json(const DaySchedule& day) {
    json hours = json::array();
    for (std::size_t h = 0; h < kHours; ++h) {
        json row = to_json(day.hours[h]);
        row["hour"] = h;
        row["profit"] = day.hourly_profit[h];
        row["zone"] = std::string(to_string(day.zone_labels[h]));
        hours.push_back(row);
    }
    return {{"total_profit", day.total_profit}, {"hours", hours}};
}

json to_json(const McSummary& s) {
    return {{"runs", s.runs},
            {"profit_mean", s.profit_mean},
            {"profit_std", s.profit_std},
            {"g_mean", s.g_mean},
            {"w_h", quantiles_json(s.w_h)},
            {"w_r", quantiles_json(s.w_r)},
            {"z", quantiles_json(s.z)}};
}

void write_schedule_csv(std::ostream& out, const DaySchedule& day) {
    out << "hour,g,w_h,w_r,q_h,q_r,z,profit,zone\n";
    for (std::size_t h = 0; h < kHours; ++h) {
        const DispatchPoint& p = day.hours[h];
        out << fmt::format("{},{},{},{},{},{},{},{},{}\n", h, p.g, p.w_h, p.w_r, p.q_h, p.q_r, p.z,
                           day.hourly_profit[h], to_string(day.zone_labels[h]));
    }
}

void write_summary_csv(std::ostream& out, const McSummary& s) {
    out << "hour,g_mean,w_h_p5,w_h_p50,w_h_p95,w_r_p5,w_r_p50,w_r_p95,z_p5,z_p50,z_p95\n";
    for (std::size_t h = 0; h < kHours; ++h)
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", h, s.g_mean[h], s.w_h[h].p5, s.w_h[h].p50,
                           s.w_h[h].p95, s.w_r[h].p5, s.w_r[h].p50, s.w_r[h].p95, s.z[h].p5, s.z[h].p50,
                           s.z[h].p95);
}

}  // namespace desal

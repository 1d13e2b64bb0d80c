#pragma once

// Day-level and Monte Carlo simulation. Hours are independent single-period
// problems; the day is only a grouping of 24 of them.

#include <array>
#include <cstdint>
#include <vector>

#include "desal/model.hpp"
#include "desal/policy.hpp"
#include "desal/scenario.hpp"

namespace desal {

struct DaySchedule {
    std::array<DispatchPoint, kHours> hours{};
    HourArray hourly_profit{};
    double total_profit = 0.0;
    std::array<Zone, kHours> zone_labels{};
};

struct Quantiles {
    double p5 = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
};

struct McSummary {
    std::size_t runs = 0;
    double profit_mean = 0.0;
    double profit_std = 0.0;
    std::array<Quantiles, kHours> w_h{};
    std::array<Quantiles, kHours> w_r{};
    std::array<Quantiles, kHours> z{};
    HourArray g_mean{};  // sample mean of the drawn generation per hour
};

struct SweepResult {
    double pi_water = 0.0;
    Tariff tariff;
    ThresholdSet thresholds;
    DaySchedule schedule;
};

DaySchedule run_day(const HourlyProfile& profile, const ThresholdSet& thresholds,
                    const PlantConfig& config, const Tariff& tariff);

/// Linear-interpolation quantile (R type 7) of an unsorted sample.
double quantile(std::vector<double> values, double q);

McSummary run_monte_carlo(const HourlyStats& stats, std::size_t n, std::uint64_t seed,
                          const PlantConfig& config, const Tariff& tariff, unsigned threads = 1);

std::vector<SweepResult> sweep_price(const std::vector<double>& prices, const HourlyProfile& profile,
                                     const PlantConfig& config, const Tariff& base);

}  // namespace desal

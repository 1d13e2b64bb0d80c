#include "desal/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace desal {

DaySchedule run_day(const HourlyProfile& profile, const ThresholdSet& thresholds,
                    const PlantConfig& config, const Tariff& tariff) {
    DaySchedule day;
    for (std::size_t h = 0; h < kHours; ++h) {
        const double g = profile.values[h];
        day.hours[h] = optimal_dispatch(g, thresholds, config);
        day.hourly_profit[h] = profit(day.hours[h], config, tariff);
        day.zone_labels[h] = zone_of(g, thresholds);
        day.total_profit += day.hourly_profit[h];
    }
    return day;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

McSummary run_monte_carlo(const HourlyStats& stats, std::size_t n, std::uint64_t seed,
                          const PlantConfig& config, const Tariff& tariff, unsigned threads) {
    if (n == 0) throw std::invalid_argument("run_monte_carlo: n must be >= 1");
    const ThresholdSet thresholds = compute_thresholds(config, tariff);
    const auto profiles = sample_profiles(stats, n, seed, threads);

    std::vector<DaySchedule> days(n);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1) {
        for (std::size_t k = 0; k < n; ++k) days[k] = run_day(profiles[k], thresholds, config, tariff);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t k = t; k < n; k += threads)
                    days[k] = run_day(profiles[k], thresholds, config, tariff);
            });
        for (auto& th : pool) th.join();
    }

    // Reductions run in sample order so the summary never depends on threads.
    McSummary s;
    s.runs = n;
    double sum = 0.0;
    for (const auto& d : days) sum += d.total_profit;
    s.profit_mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (const auto& d : days) ss += (d.total_profit - s.profit_mean) * (d.total_profit - s.profit_mean);
        s.profit_std = std::sqrt(ss / static_cast<double>(n - 1));
    }

    std::vector<double> col(n);
    auto fill = [&](std::size_t h, auto field) {
        for (std::size_t k = 0; k < n; ++k) col[k] = days[k].hours[h].*field;
        return Quantiles{quantile(col, 0.05), quantile(col, 0.50), quantile(col, 0.95)};
    };
    for (std::size_t h = 0; h < kHours; ++h) {
        s.w_h[h] = fill(h, &DispatchPoint::w_h);
        s.w_r[h] = fill(h, &DispatchPoint::w_r);
        s.z[h] = fill(h, &DispatchPoint::z);
        double gs = 0.0;
        for (const auto& p : profiles) gs += p.values[h];
        s.g_mean[h] = gs / static_cast<double>(n);
    }
    return s;
}

std::vector<SweepResult> sweep_price(const std::vector<double>& prices, const HourlyProfile& profile,
                                     const PlantConfig& config, const Tariff& base) {
    if (prices.empty()) throw std::invalid_argument("sweep_price: empty price list");
    std::vector<SweepResult> out;
    out.reserve(prices.size());
    for (double price : prices) {
        SweepResult r;
        r.pi_water = price;
        r.tariff = base;
        r.tariff.pi_water = price;
        r.thresholds = compute_thresholds(config, r.tariff);
        r.schedule = run_day(profile, r.thresholds, config, r.tariff);
        out.push_back(r);
    }
    return out;
}

}  // namespace desal

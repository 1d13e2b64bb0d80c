#include "desal/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

namespace desal {

std::string ValidationReport::to_string() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v;
    }
    return out;
}

ValidationReport validate_config(const PlantConfig& config, const Tariff& tariff,
                                 bool enforce_sizing) {
    ValidationReport report;
    auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

    const TdpParams& tdp = config.tdp;
    const RodpParams& ro = config.rodp;
    const double fields[] = {tdp.alpha_h, tdp.eta_h,  tdp.w_min_h,      tdp.w_max_h,
                             tdp.cost.a,  tdp.cost.b, ro.alpha_r,       ro.w_min_r,
                             ro.w_max_r,  config.demand_floor, tariff.pi_water,
                             tariff.pi_buy, tariff.pi_sell};
    if (std::any_of(std::begin(fields), std::end(fields), [](double v) { return !std::isfinite(v); })) {
        fail("non-finite parameter");
        return report;
    }

    if (tariff.pi_buy < tariff.pi_sell)
        fail(fmt::format("pi_buy < pi_sell ({} < {})", tariff.pi_buy, tariff.pi_sell));
    if (tariff.pi_sell < 0.0) fail("pi_sell < 0");
    if (tariff.pi_water < 0.0) fail("pi_water < 0");

    if (tdp.cost.b <= 0.0) fail("cost.b <= 0 (thermal cost must be strictly convex)");
    if (tdp.cost.a < 0.0) fail("cost.a < 0 (thermal cost must be non-decreasing)");
    if (tdp.alpha_h < 0.0) fail("alpha_h < 0");
    if (tdp.eta_h <= 0.0) fail("eta_h <= 0");
    if (ro.alpha_r <= 0.0) fail("alpha_r <= 0");

    if (tdp.w_min_h < 0.0) fail("w_min_h < 0");
    if (tdp.w_min_h > tdp.w_max_h) fail("thermal bounds inverted (w_min_h > w_max_h)");
    if (ro.w_min_r < 0.0) fail("w_min_r < 0");
    if (ro.w_min_r > ro.w_max_r) fail("RO bounds inverted (w_min_r > w_max_r)");
    if (tdp.alpha_h == 0.0 && tdp.w_min_h > 0.0)
        fail("thermal unit disabled (alpha_h = 0) but w_min_h > 0");

    if (config.demand_floor < 0.0) fail("demand_floor < 0");
    if (enforce_sizing && tdp.w_min_h + ro.w_min_r < config.demand_floor)
        fail(fmt::format("sizing assumption violated: w_min_h + w_min_r = {} < demand_floor = {}",
                         tdp.w_min_h + ro.w_min_r, config.demand_floor));
    return report;
}

void require_valid(const PlantConfig& config, const Tariff& tariff, bool enforce_sizing) {
    auto report = validate_config(config, tariff, enforce_sizing);
    if (!report.ok()) throw ConfigError("invalid configuration: " + report.to_string());
}

Interval thermal_box(const TdpParams& tdp) {
    if (tdp.alpha_h == 0.0) return {0.0, 0.0};
    return {tdp.w_min_h, tdp.w_max_h};
}

DispatchPoint dispatch_from_waters(double w_h, double w_r, double g, const PlantConfig& config) {
    if (w_h < 0.0 || w_r < 0.0 || g < 0.0)
        throw std::invalid_argument("dispatch_from_waters: negative water or generation");
    const TdpParams& tdp = config.tdp;
    if (tdp.alpha_h == 0.0 && w_h > 0.0)
        throw std::invalid_argument("thermal unit disabled but assigned output");

    DispatchPoint pt;
    pt.w_h = w_h;
    pt.w_r = w_r;
    pt.g = g;
    pt.q_h = w_h / tdp.eta_h;
    pt.p_h = tdp.alpha_h > 0.0 ? w_h / tdp.alpha_h : 0.0;
    pt.q_r = w_r / config.rodp.alpha_r;
    pt.z = pt.q_r - pt.q_h - g;
    return pt;
}

double water_revenue(double w_h, double w_r, const Tariff& tariff) {
    return tariff.pi_water * (w_h + w_r);
}

double electricity_payment(double z, const Tariff& tariff) {
    const double imported = std::max(z, 0.0);
    const double exported = -std::min(z, 0.0);
    return tariff.pi_buy * imported - tariff.pi_sell * exported;
}

double tdp_cost(double p_h, const CostParams& cost) {
    return cost.b * p_h * p_h + cost.a * p_h;
}

double marginal_cost(double p_h, const CostParams& cost) {
    return 2.0 * cost.b * p_h + cost.a;
}

double inverse_marginal_cost(double m, const CostParams& cost, Interval p_bounds) {
    if (cost.b <= 0.0) throw ConfigError("inverse_marginal_cost: cost is not strictly convex (b <= 0)");
    const double p = (m - cost.a) / (2.0 * cost.b);
    return std::clamp(p, p_bounds.lo, p_bounds.hi);
}

double inverse_marginal_cost(double m, const std::function<double(double)>& marginal,
                             Interval p_bounds) {
    if (!std::isfinite(p_bounds.hi))
        throw std::invalid_argument("inverse_marginal_cost: bisection needs a finite upper bound");
    double lo = p_bounds.lo;
    double hi = p_bounds.hi;
    if (marginal(lo) >= m) return lo;
    if (marginal(hi) <= m) return hi;
    // marginal(lo) < m < marginal(hi)
    while (hi - lo > 1e-9 * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (marginal(mid) < m)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double profit(const DispatchPoint& point, const PlantConfig& config, const Tariff& tariff) {
    return water_revenue(point.w_h, point.w_r, tariff) - electricity_payment(point.z, tariff) -
           tdp_cost(point.p_h, config.tdp.cost);
}

bool within_bounds(const DispatchPoint& point, const PlantConfig& config) {
    const Interval h = thermal_box(config.tdp);
    return point.w_h >= h.lo && point.w_h <= h.hi && point.w_r >= config.rodp.w_min_r &&
           point.w_r <= config.rodp.w_max_r && point.w_h + point.w_r >= config.demand_floor;
}

bool approx_equal(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace desal

#include "desal/policy.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace desal {

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Low: return "LOW";
        case Regime::Interior: return "INTERIOR";
        case Regime::High: return "HIGH";
    }
    return "?";
}

std::string_view to_string(Zone z) {
    switch (z) {
        case Zone::Import: return "IMPORT";
        case Zone::NzLower: return "NZ_LOWER";
        case Zone::NzInterior: return "NZ_INTERIOR";
        case Zone::NzUpper: return "NZ_UPPER";
        case Zone::Export: return "EXPORT";
    }
    return "?";
}

Regime regime_from_string(std::string_view s) {
    for (Regime r : {Regime::Low, Regime::Interior, Regime::High})
        if (to_string(r) == s) return r;
    throw std::invalid_argument("unknown regime: " + std::string(s));
}

Zone zone_from_string(std::string_view s) {
    for (Zone z : {Zone::Import, Zone::NzLower, Zone::NzInterior, Zone::NzUpper, Zone::Export})
        if (to_string(z) == s) return z;
    throw std::invalid_argument("unknown zone: " + std::string(s));
}

Regime classify_regime(const Tariff& tariff, const RodpParams& rodp) {
    const double ro_value = rodp.alpha_r * tariff.pi_water;
    if (ro_value < tariff.pi_sell) return Regime::Low;
    if (ro_value > tariff.pi_buy) return Regime::High;
    return Regime::Interior;
}

double foc_water_level(double pi_s, const PlantConfig& config, const Tariff& tariff) {
    const TdpParams& tdp = config.tdp;
    const Interval box = thermal_box(tdp);
    if (tdp.alpha_h == 0.0) return box.lo;

    const double m = tdp.alpha_h * tariff.pi_water + tdp.beta_h() * pi_s;
    const double p = inverse_marginal_cost(m, tdp.cost, {0.0, std::numeric_limits<double>::infinity()});
    return std::clamp(tdp.alpha_h * p, box.lo, box.hi);
}

ThresholdSet compute_thresholds(const PlantConfig& config, const Tariff& tariff) {
    require_valid(config, tariff);
    const RodpParams& ro = config.rodp;
    const double eta = config.tdp.eta_h;

    ThresholdSet t;
    t.regime = classify_regime(tariff, ro);
    switch (t.regime) {
        case Regime::Interior:
            t.ro_lo = ro.w_min_r;
            t.ro_hi = ro.w_max_r;
            break;
        case Regime::High:
            t.ro_lo = t.ro_hi = ro.w_max_r;
            break;
        case Regime::Low:
            t.ro_lo = t.ro_hi = ro.w_min_r;
            break;
    }

    // Islanded electricity value. Outside INTERIOR it is clamped to the
    // tariff band, which collapses the interior net-zero segment to a point.
    const double pi_nz = std::clamp(ro.alpha_r * tariff.pi_water, tariff.pi_sell, tariff.pi_buy);
    t.w_h_im = foc_water_level(tariff.pi_buy, config, tariff);
    t.w_h_nz = foc_water_level(pi_nz, config, tariff);
    t.w_h_ex = foc_water_level(tariff.pi_sell, config, tariff);

    const double q_lo = t.ro_lo / ro.alpha_r;
    const double q_hi = t.ro_hi / ro.alpha_r;
    t.gamma_im = q_lo - t.w_h_im / eta;
    t.g_lo = q_lo - t.w_h_nz / eta;
    t.g_hi = q_hi - t.w_h_nz / eta;
    t.gamma_ex = q_hi - t.w_h_ex / eta;
    return t;
}

Zone zone_of(double g, const ThresholdSet& t) {
    if (g < t.gamma_im) return Zone::Import;
    if (g < t.g_lo) return Zone::NzLower;
    if (g <= t.g_hi) return Zone::NzInterior;
    if (g <= t.gamma_ex) return Zone::NzUpper;
    return Zone::Export;
}

DispatchPoint optimal_dispatch(double g, const ThresholdSet& t, const PlantConfig& config) {
    const double eta = config.tdp.eta_h;
    const double alpha_r = config.rodp.alpha_r;
    const Interval box = thermal_box(config.tdp);

    double w_h = 0.0;
    double w_r = 0.0;
    const Zone zone = zone_of(g, t);
    switch (zone) {
        case Zone::Import:
            w_h = t.w_h_im;
            w_r = t.ro_lo;
            break;
        case Zone::NzLower:
            w_r = t.ro_lo;
            w_h = std::clamp(eta * (t.ro_lo / alpha_r - g), t.w_h_nz, t.w_h_im);
            break;
        case Zone::NzInterior:
            w_h = t.w_h_nz;
            w_r = std::clamp(alpha_r * (g + t.w_h_nz / eta), t.ro_lo, t.ro_hi);
            break;
        case Zone::NzUpper:
            w_r = t.ro_hi;
            w_h = std::clamp(eta * (t.ro_hi / alpha_r - g), t.w_h_ex, t.w_h_nz);
            break;
        case Zone::Export:
            w_h = t.w_h_ex;
            w_r = t.ro_hi;
            break;
    }
    w_h = std::clamp(w_h, box.lo, box.hi);

    DispatchPoint pt = dispatch_from_waters(w_h, w_r, g, config);
    // The closed form fixes z exactly; the recomputed q_r - q_h - g only
    // differs from it by rounding.
    switch (zone) {
        case Zone::Import: pt.z = t.gamma_im - g; break;
        case Zone::Export: pt.z = t.gamma_ex - g; break;
        default: pt.z = 0.0; break;
    }
    return pt;
}

}  // namespace desal

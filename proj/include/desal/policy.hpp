#pragma once

// Closed-form optimal dispatch as a function of renewable output g.
//
// The electricity payment has a kink at z = 0, so the plant operates in one of
// three modes: importing (marginal electricity valued at pi_buy), islanded
// (z = 0, valued at the RO shadow price alpha_r * pi_water clamped to the
// tariff band) or exporting (valued at pi_sell). Thermal output follows the
// stationarity condition C'(p) = alpha_h * pi_water + beta_h * pi_s in each
// mode; RO output is pinned to a bound outside the islanded band and follows
// the energy balance inside it.

#include <string>
#include <string_view>

#include "desal/model.hpp"

namespace desal {

enum class Regime { Low, Interior, High };

enum class Zone { Import, NzLower, NzInterior, NzUpper, Export };

std::string_view to_string(Regime r);
std::string_view to_string(Zone z);
Regime regime_from_string(std::string_view s);
Zone zone_from_string(std::string_view s);

/// Everything needed to dispatch any g. Breakpoints are in kWh and may be
/// negative, in which case the zones below zero are unreachable.
struct ThresholdSet {
    Regime regime = Regime::Interior;
    double w_h_im = 0.0;
    double w_h_nz = 0.0;
    double w_h_ex = 0.0;
    double ro_lo = 0.0;
    double ro_hi = 0.0;
    double gamma_im = 0.0;
    double g_lo = 0.0;
    double g_hi = 0.0;
    double gamma_ex = 0.0;
};

/// LOW iff alpha_r pi_w < pi_sell, HIGH iff alpha_r pi_w > pi_buy.
Regime classify_regime(const Tariff& tariff, const RodpParams& rodp);

/// Thermal water level maximizing pi_w w + (pi_s / eta_h) w - C(w / alpha_h)
/// over the thermal box.
double foc_water_level(double pi_s, const PlantConfig& config, const Tariff& tariff);

ThresholdSet compute_thresholds(const PlantConfig& config, const Tariff& tariff);

Zone zone_of(double g, const ThresholdSet& thresholds);

DispatchPoint optimal_dispatch(double g, const ThresholdSet& thresholds, const PlantConfig& config);

}  // namespace desal

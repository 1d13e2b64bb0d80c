#pragma once

// Plant and tariff types for a hybrid thermal + reverse-osmosis desalination
// plant with on-site renewables, plus the payment and profit functions.
//
// Canonical units: water in m3/h, electricity in kWh, fuel in BTU, money in $.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace desal {

/// Relative tolerance used when comparing money and flow values.
inline constexpr double kRelTol = 1e-9;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quadratic thermal operating cost C(p) = b p^2 + a p.
struct CostParams {
    double a = 0.0;  // $/BTU
    double b = 0.0;  // $/BTU^2
};

struct TdpParams {
    double alpha_h = 0.0;  // water per unit fuel (m3/BTU)
    double eta_h = 1.0;    // water per unit electricity (m3/kWh)
    double w_min_h = 0.0;
    double w_max_h = 0.0;
    CostParams cost;

    /// Fuel per unit of electricity. Always derived, never stored.
    double beta_h() const { return alpha_h / eta_h; }

    /// alpha_h == 0 means no fuel can produce water: the unit is off.
    bool disabled() const { return alpha_h == 0.0 || w_max_h == 0.0; }
};

struct RodpParams {
    double alpha_r = 1.0;  // water per unit electricity (m3/kWh)
    double w_min_r = 0.0;
    double w_max_r = 0.0;
};

struct Tariff {
    double pi_water = 0.0;  // $/m3
    double pi_buy = 0.0;    // import price, $/kWh
    double pi_sell = 0.0;   // export price, $/kWh
};

struct PlantConfig {
    TdpParams tdp;
    RodpParams rodp;
    double demand_floor = 0.0;  // minimum total water the utility takes (m3/h)
};

/// One operating point of the plant for a given renewable output g.
struct DispatchPoint {
    double w_h = 0.0;
    double w_r = 0.0;
    double q_h = 0.0;
    double q_r = 0.0;
    double p_h = 0.0;
    double g = 0.0;
    double z = 0.0;  // net grid consumption; > 0 import, < 0 export
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

/// Checks every parameter invariant. The sizing check (minimum outputs cover
/// the demand floor) can be skipped for solvers that enforce the floor.
ValidationReport validate_config(const PlantConfig& config, const Tariff& tariff,
                                 bool enforce_sizing = true);

/// Throws ConfigError carrying the itemized report if validation fails.
void require_valid(const PlantConfig& config, const Tariff& tariff, bool enforce_sizing = true);

/// Effective thermal water box. Collapses to [0, 0] for a disabled unit.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};
Interval thermal_box(const TdpParams& tdp);

/// Builds the full operating point from the two water outputs. Box bounds are
/// not checked here.
DispatchPoint dispatch_from_waters(double w_h, double w_r, double g, const PlantConfig& config);

double water_revenue(double w_h, double w_r, const Tariff& tariff);

/// Positive when the plant pays the utility, negative when it is paid.
double electricity_payment(double z, const Tariff& tariff);

double tdp_cost(double p_h, const CostParams& cost);
double marginal_cost(double p_h, const CostParams& cost);

/// FOC root of C'(p) = m projected onto [p_min, p_max]. Requires b > 0.
double inverse_marginal_cost(double m, const CostParams& cost, Interval p_bounds);

/// Same contract for any strictly convex cost given only its (increasing)
/// marginal. Bisection to 1e-9 relative; p_max must be finite.
double inverse_marginal_cost(double m, const std::function<double(double)>& marginal,
                             Interval p_bounds);

double profit(const DispatchPoint& point, const PlantConfig& config, const Tariff& tariff);

/// True when the point sits inside both unit boxes and meets the demand floor.
bool within_bounds(const DispatchPoint& point, const PlantConfig& config);

bool approx_equal(double a, double b, double rel = kRelTol);

}  // namespace desal

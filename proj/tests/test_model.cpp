#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "desal/io.hpp"
#include "desal/model.hpp"
#include "support/ensemble.hpp"

using namespace desal;
using desal::testing::reference_config;
using desal::testing::reference_tariff;

namespace {

bool mentions(const ValidationReport& r, const std::string& needle) {
    for (const auto& v : r.violations)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(ValidateConfig, ReferenceParametersAreValid) {
    const auto r = validate_config(reference_config(), reference_tariff(1.5));
    EXPECT_TRUE(r.ok()) << r.to_string();
}

TEST(ValidateConfig, SwappedTariffIsRejected) {
    const auto r = validate_config(reference_config(), {1.5, 0.1, 0.4});
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(mentions(r, "pi_buy < pi_sell"));
}

TEST(ValidateConfig, DemandFloorAboveMinimumOutput) {
    PlantConfig c = reference_config();
    c.demand_floor = 1.0;
    const auto r = validate_config(c, reference_tariff(1.5));
    EXPECT_TRUE(mentions(r, "sizing assumption"));
    EXPECT_TRUE(validate_config(c, reference_tariff(1.5), /*enforce_sizing=*/false).ok());
}

TEST(ValidateConfig, ItemizesEveryViolation) {
    PlantConfig c = reference_config();
    c.tdp.cost.b = 0.0;
    c.tdp.w_min_h = 10.0;
    c.tdp.w_max_h = 5.0;
    c.rodp.alpha_r = 0.0;
    c.tdp.eta_h = -1.0;
    const auto r = validate_config(c, reference_tariff(1.5));
    EXPECT_TRUE(mentions(r, "cost.b <= 0"));
    EXPECT_TRUE(mentions(r, "thermal bounds inverted"));
    EXPECT_TRUE(mentions(r, "alpha_r <= 0"));
    EXPECT_TRUE(mentions(r, "eta_h <= 0"));
    EXPECT_EQ(r.violations.size(), 4u);
}

TEST(ValidateConfig, DisabledThermalUnitCannotHaveMinimum) {
    PlantConfig c = reference_config();
    c.tdp.alpha_h = 0.0;
    EXPECT_TRUE(validate_config(c, reference_tariff(1.5)).ok());
    c.tdp.w_min_h = 1.0;
    EXPECT_TRUE(mentions(validate_config(c, reference_tariff(1.5)), "thermal unit disabled"));
}

TEST(ValidateConfig, NonFiniteParameter) {
    PlantConfig c = reference_config();
    c.rodp.w_max_r = std::numeric_limits<double>::quiet_NaN();
    EXPECT_TRUE(mentions(validate_config(c, reference_tariff(1.5)), "non-finite"));
    EXPECT_THROW(require_valid(c, reference_tariff(1.5)), ConfigError);
}

TEST(DispatchFromWaters, ReferenceConversions) {
    const auto pt = dispatch_from_waters(100, 50, 0, reference_config());
    EXPECT_DOUBLE_EQ(pt.p_h, 1000);
    EXPECT_DOUBLE_EQ(pt.q_h, 1000);
    EXPECT_DOUBLE_EQ(pt.q_r, 200);
    EXPECT_DOUBLE_EQ(pt.z, -800);
}

TEST(DispatchFromWaters, ZeroPoint) {
    const auto pt = dispatch_from_waters(0, 0, 0, reference_config());
    EXPECT_EQ(pt.p_h, 0);
    EXPECT_EQ(pt.q_h, 0);
    EXPECT_EQ(pt.q_r, 0);
    EXPECT_EQ(pt.z, 0);
}

TEST(DispatchFromWaters, RoOnly) {
    const auto pt = dispatch_from_waters(0, 250, 0, reference_config());
    EXPECT_DOUBLE_EQ(pt.q_r, 1000);
    EXPECT_DOUBLE_EQ(pt.z, 1000);
}

TEST(DispatchFromWaters, DisabledThermalWithOutputThrows) {
    PlantConfig c = reference_config();
    c.tdp.alpha_h = 0.0;
    EXPECT_THROW(dispatch_from_waters(1, 0, 0, c), std::invalid_argument);
    EXPECT_NO_THROW(dispatch_from_waters(0, 10, 0, c));
    EXPECT_THROW(dispatch_from_waters(-1, 0, 0, reference_config()), std::invalid_argument);
}

TEST(DispatchFromWaters, LinearInInputs) {
    desal::testing::Ensemble ens(11);
    for (int k = 0; k < 200; ++k) {
        const auto c = ens.next();
        const double wh = ens.uniform(0, 100), wr = ens.uniform(0, 100), g = ens.uniform(0, 1000);
        const double lambda = ens.uniform(0, 10);
        const auto a = dispatch_from_waters(wh, wr, g, c.config);
        const auto b = dispatch_from_waters(lambda * wh, lambda * wr, lambda * g, c.config);
        EXPECT_TRUE(approx_equal(b.p_h, lambda * a.p_h));
        EXPECT_TRUE(approx_equal(b.q_h, lambda * a.q_h));
        EXPECT_TRUE(approx_equal(b.q_r, lambda * a.q_r));
        EXPECT_NEAR(b.z, lambda * a.z, 1e-9 * std::max({1.0, b.q_r, b.q_h, b.g}));
    }
}

TEST(WaterRevenue, Examples) {
    const Tariff t = reference_tariff(1.5);
    EXPECT_DOUBLE_EQ(water_revenue(100, 50, t), 225);
    EXPECT_EQ(water_revenue(0, 0, reference_tariff(7.0)), 0);
    EXPECT_DOUBLE_EQ(water_revenue(8333, 8333, reference_tariff(5)), 83330);
}

TEST(ElectricityPayment, Examples) {
    const Tariff t = reference_tariff(1.5);
    EXPECT_EQ(electricity_payment(0, t), 0);
    EXPECT_DOUBLE_EQ(electricity_payment(100, t), 40);
    EXPECT_DOUBLE_EQ(electricity_payment(-100, t), -10);
}

TEST(ElectricityPayment, PiecewiseLinearAndConvex) {
    const Tariff t{1.0, 0.37, 0.11};
    double prev_slope = -1.0;
    for (int k = -1000; k <= 1000; ++k) {
        const double z = 0.73 * k;
        const double p = electricity_payment(z, t);
        EXPECT_EQ(p, z >= 0 ? t.pi_buy * z : t.pi_sell * z);
        const double slope = (electricity_payment(z + 0.73, t) - p) / 0.73;
        EXPECT_GE(slope, prev_slope - 1e-12);
        prev_slope = slope;
    }
}

TEST(ElectricityPayment, EqualPricesIsLinear) {
    const Tariff t{1.0, 0.25, 0.25};
    for (int k = -500; k <= 500; ++k) EXPECT_EQ(electricity_payment(3.3 * k, t), 0.25 * (3.3 * k));
}

TEST(TdpCost, EvaluateAndMarginal) {
    const CostParams c{0.05, 0.001};
    EXPECT_DOUBLE_EQ(tdp_cost(1000, c), 1050);
    EXPECT_DOUBLE_EQ(marginal_cost(250, c), 0.55);
}

TEST(TdpCost, InverseMarginalExamples) {
    const CostParams c{0.05, 0.001};
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_NEAR(inverse_marginal_cost(0.55, c, {0, inf}), 250, 1e-9);
    EXPECT_EQ(inverse_marginal_cost(0.05, c, {0, inf}), 0);
    EXPECT_EQ(inverse_marginal_cost(0.01, c, {0, 83330}), 0);
    EXPECT_EQ(inverse_marginal_cost(1e9, c, {0, 83330}), 83330);
    EXPECT_THROW(inverse_marginal_cost(0.5, CostParams{0.05, 0.0}, {0, inf}), ConfigError);
}

TEST(TdpCost, BisectionMatchesClosedForm) {
    desal::testing::Ensemble ens(5);
    for (int k = 0; k < 300; ++k) {
        const CostParams c{ens.log_uniform(1e-3, 1), ens.log_uniform(1e-5, 1)};
        const double hi = ens.log_uniform(1, 1e6);
        const double m = ens.uniform(0, 2 * marginal_cost(hi, c));
        const double closed = inverse_marginal_cost(m, c, {0, hi});
        const double general =
            inverse_marginal_cost(m, [&](double p) { return marginal_cost(p, c); }, Interval{0, hi});
        EXPECT_NEAR(general, closed, 1e-9 * std::max(1.0, hi)) << "m=" << m << " hi=" << hi;
    }
}

TEST(Profit, Examples) {
    const PlantConfig c = reference_config();
    const Tariff t = reference_tariff(1.5);
    EXPECT_DOUBLE_EQ(profit(dispatch_from_waters(100, 0, 0, c), c, t), -800);
    EXPECT_EQ(profit(dispatch_from_waters(0, 0, 0, c), c, t), 0);
    EXPECT_NEAR(profit(dispatch_from_waters(23.75, 59.375, 0, c), c, t), 56.40625, 1e-9);
}

TEST(Profit, DecomposesIntoTerms) {
    desal::testing::Ensemble ens(21);
    for (int k = 0; k < 200; ++k) {
        const auto c = ens.next();
        const auto pt = dispatch_from_waters(ens.uniform(0, 50), ens.uniform(0, 50), ens.uniform(0, 500), c.config);
        Tariff no_water = c.tariff;
        no_water.pi_water = 0.0;
        DispatchPoint islanded = pt;
        islanded.z = 0.0;
        const double water_only = profit(pt, c.config, c.tariff) - profit(pt, c.config, no_water);
        const double grid_only = profit(pt, c.config, no_water) - profit(islanded, c.config, no_water);
        const double cost_only = profit(islanded, c.config, no_water);
        EXPECT_NEAR(water_only, water_revenue(pt.w_h, pt.w_r, c.tariff), 1e-9 * std::max(1.0, std::abs(water_only)));
        EXPECT_NEAR(grid_only, -electricity_payment(pt.z, c.tariff), 1e-9 * std::max(1.0, std::abs(grid_only)));
        EXPECT_NEAR(cost_only, -tdp_cost(pt.p_h, c.config.tdp.cost), 1e-9 * std::max(1.0, std::abs(cost_only)));
        EXPECT_NEAR(water_only + grid_only + cost_only, profit(pt, c.config, c.tariff),
                    1e-9 * std::max(1.0, std::abs(water_only)));
    }
}

TEST(ConfigJson, BetaIsDerivedAndChecked) {
    desal::testing::Ensemble ens(3);
    for (int k = 0; k < 50; ++k) {
        const auto c = ens.next();
        const auto doc = config_from_json(config_to_json(c.config, c.tariff));
        EXPECT_EQ(doc.plant.tdp.beta_h(), doc.plant.tdp.alpha_h / doc.plant.tdp.eta_h);
        EXPECT_EQ(doc.plant.tdp.alpha_h, c.config.tdp.alpha_h);
        EXPECT_EQ(doc.tariff.pi_water, c.tariff.pi_water);
        EXPECT_EQ(doc.plant.demand_floor, c.config.demand_floor);
    }
    auto j = config_to_json(reference_config(), reference_tariff(1.5));
    j["tdp"]["beta_h"] = 2.0;
    EXPECT_THROW(config_from_json(j), ConfigError);
    j["tdp"].erase("beta_h");
    EXPECT_DOUBLE_EQ(config_from_json(j).plant.tdp.beta_h(), 1.0);
}

TEST(ConfigJson, RejectsInvalidDocuments) {
    auto j = config_to_json(reference_config(), reference_tariff(1.5));
    j["tariff"]["pi_sell"] = 0.9;
    EXPECT_THROW(config_from_json(j), ConfigError);
    auto missing = config_to_json(reference_config(), reference_tariff(1.5));
    missing["rodp"].erase("alpha_r");
    EXPECT_THROW(config_from_json(missing), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"tdp": 3})")), ConfigError);
}

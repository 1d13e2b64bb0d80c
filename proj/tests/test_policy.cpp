#include <cmath>

#include <gtest/gtest.h>

#include "desal/io.hpp"
#include "desal/oracle.hpp"
#include "desal/policy.hpp"
#include "support/ensemble.hpp"

using namespace desal;
using desal::testing::Ensemble;
using desal::testing::reference_config;
using desal::testing::reference_tariff;

namespace {

// Dense 1-D brute force of the thermal stationarity problem, independent of
// the FOC inversion.
double brute_force_level(double pi_s, const PlantConfig& c, const Tariff& t, int n = 2'000'001) {
    const Interval box = thermal_box(c.tdp);
    double best_w = box.lo, best_v = -1e300;
    for (int k = 0; k < n; ++k) {
        const double w = box.lo + (box.hi - box.lo) * k / (n - 1.0);
        const double v = t.pi_water * w + pi_s / c.tdp.eta_h * w - tdp_cost(w / c.tdp.alpha_h, c.tdp.cost);
        if (v > best_v) {
            best_v = v;
            best_w = w;
        }
    }
    return best_w;
}

void expect_rel(double actual, double expected, double rel = 1e-9) {
    EXPECT_TRUE(approx_equal(actual, expected, rel)) << actual << " vs " << expected;
}

}  // namespace

TEST(ClassifyRegime, Examples) {
    const RodpParams ro = reference_config().rodp;
    EXPECT_EQ(classify_regime(reference_tariff(5), ro), Regime::High);
    EXPECT_EQ(classify_regime(reference_tariff(0.2), ro), Regime::Low);
    EXPECT_EQ(classify_regime(reference_tariff(1.5), ro), Regime::Interior);
    // 0.25 * 1.6 == 0.4 and 0.25 * 0.4 == 0.1 exactly: closed interval.
    EXPECT_EQ(classify_regime(reference_tariff(1.6), ro), Regime::Interior);
    EXPECT_EQ(classify_regime(reference_tariff(0.4), ro), Regime::Interior);
}

TEST(FocWaterLevel, ReferenceExamples) {
    const PlantConfig c = reference_config();
    const Tariff t = reference_tariff(1.5);
    expect_rel(foc_water_level(0.4, c, t), 25.0);
    expect_rel(foc_water_level(0.375, c, t), 23.75);
    expect_rel(foc_water_level(0.1, c, t), 10.0);
}

TEST(FocWaterLevel, MatchesBruteForce) {
    const PlantConfig c = reference_config();
    const double step = 8333.0 / 2'000'000;
    for (double pw : {0.2, 1.5, 5.0})
        for (double pi_s : {0.0, 0.1, 0.375, 0.4, 2.0}) {
            const Tariff t = reference_tariff(pw);
            EXPECT_NEAR(foc_water_level(pi_s, c, t), brute_force_level(pi_s, c, t), step) << pw << " " << pi_s;
        }
}

TEST(FocWaterLevel, MonotoneAndProjected) {
    PlantConfig c = reference_config();
    const Tariff t = reference_tariff(1.5);
    double prev = -1;
    for (int k = 0; k <= 100; ++k) {
        const double w = foc_water_level(0.01 * k, c, t);
        EXPECT_GE(w, prev);
        prev = w;
    }
    prev = -1;
    for (int k = 0; k <= 100; ++k) {
        const double w = foc_water_level(0.1, c, reference_tariff(0.1 * k));
        EXPECT_GE(w, prev);
        prev = w;
    }
    c.tdp.w_min_h = 30;
    EXPECT_EQ(foc_water_level(0.1, c, t), 30);
    c.tdp.w_min_h = 0;
    c.tdp.w_max_h = 12;
    EXPECT_EQ(foc_water_level(0.4, c, t), 12);
    c.tdp.alpha_h = 0;
    EXPECT_EQ(foc_water_level(0.4, c, t), 0);
}

TEST(ComputeThresholds, InteriorReferenceCase) {
    const auto th = compute_thresholds(reference_config(), reference_tariff(1.5));
    EXPECT_EQ(th.regime, Regime::Interior);
    expect_rel(th.w_h_im, 25);
    expect_rel(th.w_h_nz, 23.75);
    expect_rel(th.w_h_ex, 10);
    EXPECT_EQ(th.ro_lo, 0);
    EXPECT_EQ(th.ro_hi, 8333);
    expect_rel(th.gamma_im, -250);
    expect_rel(th.g_lo, -237.5);
    expect_rel(th.g_hi, 33094.5);
    expect_rel(th.gamma_ex, 33232);
}

TEST(ComputeThresholds, HighReferenceCase) {
    const auto th = compute_thresholds(reference_config(), reference_tariff(5));
    EXPECT_EQ(th.regime, Regime::High);
    EXPECT_EQ(th.ro_lo, 8333);
    EXPECT_EQ(th.ro_hi, 8333);
    expect_rel(th.w_h_im, 42.5);
    expect_rel(th.w_h_ex, 27.5);
    expect_rel(th.gamma_im, 32907);
    expect_rel(th.gamma_ex, 33057);
}

TEST(ComputeThresholds, LowReferenceCase) {
    const auto th = compute_thresholds(reference_config(), reference_tariff(0.2));
    EXPECT_EQ(th.regime, Regime::Low);
    EXPECT_EQ(th.ro_lo, 0);
    EXPECT_EQ(th.ro_hi, 0);
    expect_rel(th.w_h_ex, 3.5);
    expect_rel(th.gamma_ex, -35);
    for (double g : {0.0, 1.0, 1e3, 1e6}) EXPECT_EQ(zone_of(g, th), Zone::Export);
}

TEST(ComputeThresholds, RejectsInvalidConfig) {
    EXPECT_THROW(compute_thresholds(reference_config(), {1.5, 0.1, 0.4}), ConfigError);
}

TEST(OptimalDispatch, Examples) {
    const PlantConfig c = reference_config();
    {
        const auto th = compute_thresholds(c, reference_tariff(1.5));
        const auto pt = optimal_dispatch(0, th, c);
        expect_rel(pt.w_h, 23.75);
        expect_rel(pt.w_r, 59.375);
        EXPECT_EQ(pt.z, 0);
        const auto ex = optimal_dispatch(40000, th, c);
        expect_rel(ex.w_h, 10);
        EXPECT_EQ(ex.w_r, 8333);
        expect_rel(ex.z, -6768);
    }
    {
        const auto th = compute_thresholds(c, reference_tariff(0.2));
        const auto pt = optimal_dispatch(1000, th, c);
        expect_rel(pt.w_h, 3.5);
        EXPECT_EQ(pt.w_r, 0);
        expect_rel(pt.z, -1035);
    }
}

TEST(ZoneOf, Examples) {
    const PlantConfig c = reference_config();
    const auto mid = compute_thresholds(c, reference_tariff(1.5));
    EXPECT_EQ(zone_of(0, mid), Zone::NzInterior);
    EXPECT_EQ(zone_of(33150, mid), Zone::NzUpper);
    EXPECT_EQ(zone_of(40000, mid), Zone::Export);
    const auto high = compute_thresholds(c, reference_tariff(5));
    EXPECT_EQ(zone_of(0, high), Zone::Import);
    EXPECT_GT(optimal_dispatch(0, high, c).z, 0);
}

TEST(OptimalDispatch, TieBreakPrefersIslanding) {
    const PlantConfig c = reference_config();
    // alpha_r * pi_w == pi_buy: RO is worth exactly the import price.
    const auto at_buy = compute_thresholds(c, reference_tariff(1.6));
    EXPECT_EQ(at_buy.w_h_nz, at_buy.w_h_im);
    const auto imp = optimal_dispatch(0, compute_thresholds(c, reference_tariff(1.6)), c);
    EXPECT_LE(imp.z, 0);  // gamma_im < 0, never imports
    // alpha_r * pi_w == pi_sell: RO is worth exactly the export price.
    const auto at_sell = compute_thresholds(c, reference_tariff(0.4));
    EXPECT_EQ(at_sell.w_h_nz, at_sell.w_h_ex);
    const auto exp = optimal_dispatch(50000, at_sell, c);
    EXPECT_EQ(exp.w_r, 8333);
    for (double pw : {1.6, 0.4})
        for (double g : {0.0, 1000.0, 33000.0, 50000.0}) {
            const Tariff t = reference_tariff(pw);
            const auto pt = optimal_dispatch(g, compute_thresholds(c, t), c);
            EXPECT_NEAR(profit(pt, c, t), solve_zonewise(g, c, t).profit, 1e-7) << pw << " " << g;
        }
}

TEST(OptimalDispatch, DisabledThermalUnit) {
    PlantConfig c = reference_config();
    c.tdp.alpha_h = 0.0;
    c.rodp.w_min_r = 100;
    const Tariff t = reference_tariff(1.5);
    const auto th = compute_thresholds(c, t);
    EXPECT_EQ(th.w_h_im, 0);
    EXPECT_EQ(th.w_h_ex, 0);
    EXPECT_DOUBLE_EQ(th.gamma_im, 400);
    EXPECT_DOUBLE_EQ(th.gamma_ex, 33332);
    for (double g : {0.0, 200.0, 400.0, 1e4, 4e4}) {
        const auto pt = optimal_dispatch(g, th, c);
        EXPECT_EQ(pt.w_h, 0);
        EXPECT_NEAR(profit(pt, c, t), solve_zonewise(g, c, t).profit, 1e-7);
    }
}

TEST(OptimalDispatch, ProjectedThermalLevels) {
    PlantConfig c = reference_config();
    c.tdp.w_min_h = 24.0;
    c.tdp.w_max_h = 24.5;
    for (double pw : {0.2, 1.5, 5.0}) {
        const Tariff t = reference_tariff(pw);
        const auto th = compute_thresholds(c, t);
        EXPECT_LE(th.w_h_im, 24.5);
        EXPECT_GE(th.w_h_ex, 24.0);
        for (double g = 0; g <= 40000; g += 250) {
            const auto pt = optimal_dispatch(g, th, c);
            EXPECT_TRUE(within_bounds(pt, c));
            EXPECT_NEAR(profit(pt, c, t), solve_zonewise(g, c, t).profit, 1e-7) << pw << " " << g;
        }
    }
}

TEST(PolicyProperties, RandomizedStructure) {
    Ensemble ens(42);
    for (int k = 0; k < 300; ++k) {
        const auto c = ens.next();
        const auto th = compute_thresholds(c.config, c.tariff);
        ASSERT_LE(th.gamma_im, th.g_lo);
        ASSERT_LE(th.g_lo, th.g_hi);
        ASSERT_LE(th.g_hi, th.gamma_ex);
        ASSERT_GE(th.w_h_im, th.w_h_nz);
        ASSERT_GE(th.w_h_nz, th.w_h_ex);
        ASSERT_LE(th.ro_lo, th.ro_hi);

        const double top = desal::testing::sweep_limit(th, c.config);
        DispatchPoint prev = optimal_dispatch(0, th, c.config);
        for (int s = 1; s <= 2000; ++s) {
            const double g = top * s / 2000.0;
            const auto pt = optimal_dispatch(g, th, c.config);
            ASSERT_LE(pt.w_h, prev.w_h) << "case " << k << " g " << g;
            ASSERT_GE(pt.w_r, prev.w_r) << "case " << k << " g " << g;
            ASSERT_TRUE(within_bounds(pt, c.config));

            const Zone z = zone_of(g, th);
            switch (z) {
                case Zone::Import: ASSERT_GT(pt.z, 0); break;
                case Zone::Export: ASSERT_LT(pt.z, 0); break;
                default: ASSERT_EQ(pt.z, 0); break;
            }
            ASSERT_NEAR(pt.z, pt.q_r - pt.q_h - pt.g, 1e-9 * std::max({1.0, pt.q_r, pt.q_h, pt.g}));
            if (th.regime == Regime::High) ASSERT_EQ(pt.w_r, c.config.rodp.w_max_r);
            if (th.regime == Regime::Low) ASSERT_EQ(pt.w_r, c.config.rodp.w_min_r);
            if (c.config.rodp.alpha_r * c.tariff.pi_water > c.tariff.pi_sell && pt.z < 0)
                ASSERT_EQ(pt.w_r, c.config.rodp.w_max_r);
            prev = pt;
        }
    }
}

TEST(PolicyProperties, EqualPricesCollapseLevels) {
    Ensemble ens(7);
    for (int k = 0; k < 100; ++k) {
        auto c = ens.next();
        c.tariff.pi_sell = c.tariff.pi_buy;
        const auto th = compute_thresholds(c.config, c.tariff);
        EXPECT_EQ(th.w_h_im, th.w_h_ex);
        EXPECT_EQ(th.w_h_im, th.w_h_nz);
    }
}

TEST(PolicyProperties, SegmentEndpointsMeet) {
    Ensemble ens(99);
    for (int k = 0; k < 300; ++k) {
        const auto c = ens.next();
        const auto th = compute_thresholds(c.config, c.tariff);
        for (double b : {th.gamma_im, th.g_lo, th.g_hi, th.gamma_ex}) {
            if (b <= 0) continue;
            const auto at = optimal_dispatch(b, th, c.config);
            const auto below = optimal_dispatch(std::nextafter(b, -1.0), th, c.config);
            const auto above = optimal_dispatch(std::nextafter(b, 1e300), th, c.config);
            for (const auto* p : {&below, &above}) {
                EXPECT_NEAR(p->w_h, at.w_h, 1e-9 * std::max(1.0, at.w_h));
                EXPECT_NEAR(p->w_r, at.w_r, 1e-9 * std::max(1.0, at.w_r));
                EXPECT_NEAR(profit(*p, c.config, c.tariff), profit(at, c.config, c.tariff),
                            1e-8 * std::max(1.0, std::abs(profit(at, c.config, c.tariff))));
            }
        }
    }
}

TEST(PolicyProperties, AgreesWithZonewiseOracle) {
    Ensemble ens(2024);
    for (int k = 0; k < 200; ++k) {
        const auto c = ens.next();
        const auto th = compute_thresholds(c.config, c.tariff);
        for (double g : desal::testing::g_samples(th, c.config, 24)) {
            const double policy = profit(optimal_dispatch(g, th, c.config), c.config, c.tariff);
            const double oracle = solve_zonewise(g, c.config, c.tariff).profit;
            ASSERT_NEAR(policy, oracle, 1e-6) << "case " << k << " g " << g;
        }
    }
}

TEST(ThresholdJson, RoundTrip) {
    const auto th = compute_thresholds(reference_config(), reference_tariff(1.5));
    const auto back = thresholds_from_json(json::parse(to_json(th).dump()));
    EXPECT_EQ(back.regime, th.regime);
    EXPECT_EQ(back.gamma_ex, th.gamma_ex);
    EXPECT_EQ(back.w_h_nz, th.w_h_nz);
    EXPECT_EQ(to_json(th)["gamma_ex"].get<double>(), 33232.0);
}

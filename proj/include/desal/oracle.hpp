#pragma once

// Reference solvers for the single-period profit maximization. Neither uses
// the threshold formulas, so both can certify the closed-form policy.

#include <cstddef>
#include <string>
#include <vector>

#include "desal/model.hpp"
#include "desal/policy.hpp"

namespace desal {

enum class OracleMethod { Grid, Zonewise };

struct OracleSolution {
    DispatchPoint point;
    double profit = 0.0;
    OracleMethod method = OracleMethod::Grid;
    double resolution = 0.0;   // lattice diagonal (m3/h), grid only
    double lipschitz = 0.0;    // profit Lipschitz bound over the box, grid only
    double error_bound = 0.0;  // lipschitz * resolution
};

class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Brute force over an n_steps x n_steps lattice spanning both unit boxes.
/// Lattice points violating the demand floor are skipped. Ties keep the first
/// point in w_h-major ascending order, so the result does not depend on the
/// number of worker threads (0 = hardware concurrency).
OracleSolution solve_grid(double g, const PlantConfig& config, const Tariff& tariff,
                          std::size_t n_steps, unsigned threads = 1);

/// Splits the problem at the tariff kink into z >= 0, z <= 0 and z = 0. Each
/// piece reduces to a concave function of w_h (RO output is a linear choice
/// for fixed w_h) and is maximized by golden-section search.
OracleSolution solve_zonewise(double g, const PlantConfig& config, const Tariff& tariff);

struct CertificationSample {
    double g = 0.0;
    double policy_profit = 0.0;
    double zonewise_profit = 0.0;
    double grid_profit = 0.0;
    double grid_error_bound = 0.0;
    double gap = 0.0;  // best oracle profit minus policy profit
    bool pass = false;
};

struct CertificationReport {
    bool valid_config = true;
    std::string status;  // "PASS", "FAIL" or "invalid configuration: ..."
    Tariff tariff;
    double tolerance = 0.0;
    std::size_t grid_steps = 0;
    std::vector<CertificationSample> samples;
    double worst_gap = 0.0;
    double worst_gap_g = 0.0;

    bool pass() const { return status == "PASS"; }
};

/// Compares the policy against both oracles at every g. A sample passes when
/// neither oracle beats the policy by more than `tolerance`, the grid optimum
/// is within its error bound of the policy, and the policy point is feasible.
CertificationReport certify_policy(const PlantConfig& config, const Tariff& tariff,
                                   const std::vector<double>& g_samples, double tolerance,
                                   std::size_t grid_steps = 2000, unsigned threads = 1);

/// Same, but with caller-supplied thresholds (e.g. deliberately perturbed).
CertificationReport certify_policy(const PlantConfig& config, const Tariff& tariff,
                                   const ThresholdSet& thresholds,
                                   const std::vector<double>& g_samples, double tolerance,
                                   std::size_t grid_steps = 2000, unsigned threads = 1);

}  // namespace desal

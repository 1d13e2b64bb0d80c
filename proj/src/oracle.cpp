#include "desal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace desal {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct RowBest {
    double value = kNegInf;
    std::size_t i = 0;
    std::size_t j = 0;
};

// max_j (water_value[j] - payment(qr[j] - k)). With pi_buy >= pi_sell the
// payment is max(pp z, pm z). Hot loop of the grid oracle: eight independent
// lanes so the compiler can vectorize; cloned for wider ISAs.
__attribute__((target_clones("avx512f", "avx2", "default")))
double row_value_max(const double* __restrict qr, const double* __restrict water_value, std::size_t n, double k,
                     double pp, double pm) {
    double lane[8];
    for (double& l : lane) l = kNegInf;
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        for (std::size_t l = 0; l < 8; ++l) {
            const double z = qr[j + l] - k;
            const double pay = pp * z > pm * z ? pp * z : pm * z;
            const double v = water_value[j + l] - pay;
            lane[l] = lane[l] > v ? lane[l] : v;
        }
    }
    double m = kNegInf;
    for (double l : lane) m = std::max(m, l);
    for (; j < n; ++j) {
        const double z = qr[j] - k;
        m = std::max(m, water_value[j] - std::max(pp * z, pm * z));
    }
    return m;
}

double lattice(double lo, double hi, std::size_t k, std::size_t n) {
    if (k + 1 == n) return hi;
    return lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(n - 1));
}

}  // namespace

OracleSolution solve_grid(double g, const PlantConfig& config, const Tariff& tariff,
                          std::size_t n_steps, unsigned threads) {
    if (n_steps < 2) throw std::invalid_argument("solve_grid: n_steps must be >= 2");
    if (g < 0.0) throw std::invalid_argument("solve_grid: negative generation");
    require_valid(config, tariff, /*enforce_sizing=*/false);

    const TdpParams& tdp = config.tdp;
    const RodpParams& ro = config.rodp;
    const Interval hbox = thermal_box(tdp);

    std::vector<double> wr(n_steps), qr(n_steps);
    for (std::size_t j = 0; j < n_steps; ++j) {
        wr[j] = lattice(ro.w_min_r, ro.w_max_r, j, n_steps);
        qr[j] = wr[j] / ro.alpha_r;
    }

    const double pw = tariff.pi_water;
    const double pp = tariff.pi_buy;
    const double pm = tariff.pi_sell;
    const double floor = config.demand_floor;

    std::vector<double> water_value(n_steps);
    for (std::size_t j = 0; j < n_steps; ++j) water_value[j] = pw * wr[j];

    auto scan_rows = [&](std::size_t row_begin, std::size_t row_end) {
        RowBest best;
        for (std::size_t i = row_begin; i < row_end; ++i) {
            const double wh = lattice(hbox.lo, hbox.hi, i, n_steps);
            const double ph = tdp.alpha_h > 0.0 ? wh / tdp.alpha_h : 0.0;
            const double base = pw * wh - tdp_cost(ph, tdp.cost);
            const double k = wh / tdp.eta_h + g;
            const auto first = std::lower_bound(wr.begin(), wr.end(), floor - wh);
            std::size_t j0 = static_cast<std::size_t>(first - wr.begin());
            while (j0 < n_steps && wh + wr[j0] < floor) ++j0;
            if (j0 == n_steps) continue;

            const std::size_t len = n_steps - j0;
            const double row_max = base + row_value_max(qr.data() + j0, water_value.data() + j0, len, k, pp, pm);
            if (!(row_max > best.value)) continue;
            // First column in the row that attains the row maximum.
            for (std::size_t j = j0; j < n_steps; ++j) {
                const double z = qr[j] - k;
                if (base + (water_value[j] - std::max(pp * z, pm * z)) == row_max) {
                    best = {row_max, i, j};
                    break;
                }
            }
        }
        return best;
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_steps));

    std::vector<RowBest> partial(threads);
    if (threads == 1) {
        partial[0] = scan_rows(0, n_steps);
    } else {
        std::vector<std::thread> pool;
        const std::size_t block = (n_steps + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = std::min(n_steps, t * block);
            const std::size_t e = std::min(n_steps, b + block);
            pool.emplace_back([&, t, b, e] { partial[t] = scan_rows(b, e); });
        }
        for (auto& th : pool) th.join();
    }

    // Blocks are row-ordered, so a strict comparison keeps the first-found tie.
    RowBest best;
    for (const auto& p : partial)
        if (p.value > best.value) best = p;
    if (best.value == kNegInf) throw InfeasibleError("solve_grid: no lattice point meets the demand floor");

    OracleSolution sol;
    sol.method = OracleMethod::Grid;
    sol.point = dispatch_from_waters(lattice(hbox.lo, hbox.hi, best.i, n_steps), wr[best.j], g, config);
    sol.profit = profit(sol.point, config, tariff);

    const double dh = (hbox.hi - hbox.lo) / static_cast<double>(n_steps - 1);
    const double dr = (ro.w_max_r - ro.w_min_r) / static_cast<double>(n_steps - 1);
    const double lip_h = tdp.alpha_h > 0.0
                             ? pw + pp / tdp.eta_h + marginal_cost(hbox.hi / tdp.alpha_h, tdp.cost) / tdp.alpha_h
                             : 0.0;
    const double lip_r = pw + pp / ro.alpha_r;
    sol.resolution = std::hypot(dh, dr);
    sol.lipschitz = std::hypot(lip_h, lip_r);
    sol.error_bound = sol.lipschitz * sol.resolution;
    return sol;
}

namespace {

struct ZoneEval {
    bool feasible = false;
    DispatchPoint point;
    double profit = kNegInf;
};

enum class Side { Import, Export, Island };

class ZoneProblem {
public:
    ZoneProblem(Side side, double g, const PlantConfig& config, const Tariff& tariff)
        : side_(side), g_(g), config_(config), tariff_(tariff) {}

    // Feasible w_h interval for this zone, possibly empty (lo > hi).
    Interval domain() const {
        const auto& ro = config_.rodp;
        const double eta = config_.tdp.eta_h;
        const double floor = config_.demand_floor;
        Interval d = thermal_box(config_.tdp);
        // w_h + alpha_r (w_h / eta + g) >= floor, when w_r follows the balance
        const double floor_on_balance = (floor - ro.alpha_r * g_) / (1.0 + ro.alpha_r / eta);
        switch (side_) {
            case Side::Import:
                d.lo = std::max(d.lo, floor - ro.w_max_r);
                d.hi = std::min(d.hi, eta * (ro.w_max_r / ro.alpha_r - g_));
                break;
            case Side::Export:
                d.lo = std::max({d.lo, floor - ro.w_max_r, eta * (ro.w_min_r / ro.alpha_r - g_),
                                 floor_on_balance});
                break;
            case Side::Island:
                d.lo = std::max({d.lo, eta * (ro.w_min_r / ro.alpha_r - g_), floor_on_balance});
                d.hi = std::min(d.hi, eta * (ro.w_max_r / ro.alpha_r - g_));
                break;
        }
        return d;
    }

    ZoneEval evaluate(double w_h) const {
        const auto& ro = config_.rodp;
        const double balance = ro.alpha_r * (w_h / config_.tdp.eta_h + g_);
        const double floor_need = config_.demand_floor - w_h;
        double w_r = 0.0;
        switch (side_) {
            case Side::Import: {
                const double lo = std::max({ro.w_min_r, balance, floor_need});
                const double hi = ro.w_max_r;
                if (lo > hi) return {};
                // Ties go to the smallest import.
                w_r = tariff_.pi_water - tariff_.pi_buy / ro.alpha_r > 0.0 ? hi : lo;
                break;
            }
            case Side::Export: {
                const double lo = std::max(ro.w_min_r, floor_need);
                const double hi = std::min(ro.w_max_r, balance);
                if (lo > hi) return {};
                w_r = tariff_.pi_water - tariff_.pi_sell / ro.alpha_r >= 0.0 ? hi : lo;
                break;
            }
            case Side::Island: {
                // Rounding at the domain edges can push the balance a few ulps
                // outside the RO box.
                const double slack = 1e-12 * std::max(1.0, ro.w_max_r);
                if (balance < ro.w_min_r - slack || balance > ro.w_max_r + slack) return {};
                w_r = std::clamp(balance, ro.w_min_r, ro.w_max_r);
                if (w_h + w_r < config_.demand_floor) return {};
                break;
            }
        }
        ZoneEval e;
        e.feasible = true;
        e.point = dispatch_from_waters(w_h, w_r, g_, config_);
        e.profit = profit(e.point, config_, tariff_);
        return e;
    }

    ZoneEval maximize() const {
        const Interval d = domain();
        if (!(d.lo <= d.hi)) return {};

        ZoneEval best;
        auto consider = [&](double w) {
            ZoneEval e = evaluate(w);
            if (e.feasible && e.profit > best.profit) best = e;
            return e.feasible ? e.profit : kNegInf;
        };

        consider(d.lo);
        consider(d.hi);
        if (d.hi > d.lo) {
            const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
            double a = d.lo;
            double b = d.hi;
            double c = b - inv_phi * (b - a);
            double e = a + inv_phi * (b - a);
            double fc = consider(c);
            double fe = consider(e);
            for (int iter = 0; iter < 400; ++iter) {
                if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)))
                    break;
                if (fc >= fe) {
                    b = e;
                    e = c;
                    fe = fc;
                    c = b - inv_phi * (b - a);
                    fc = consider(c);
                } else {
                    a = c;
                    c = e;
                    fc = fe;
                    e = a + inv_phi * (b - a);
                    fe = consider(e);
                }
            }
        }
        return best;
    }

private:
    Side side_;
    double g_;
    const PlantConfig& config_;
    const Tariff& tariff_;
};

}  // namespace

OracleSolution solve_zonewise(double g, const PlantConfig& config, const Tariff& tariff) {
    if (g < 0.0) throw std::invalid_argument("solve_zonewise: negative generation");
    require_valid(config, tariff, /*enforce_sizing=*/false);

    ZoneEval best;
    for (Side side : {Side::Island, Side::Import, Side::Export}) {
        ZoneEval e = ZoneProblem(side, g, config, tariff).maximize();
        if (e.feasible && e.profit > best.profit) best = e;
    }
    if (!best.feasible) throw InfeasibleError("solve_zonewise: every zone is infeasible");

    OracleSolution sol;
    sol.method = OracleMethod::Zonewise;
    sol.point = best.point;
    sol.profit = best.profit;
    return sol;
}

CertificationReport certify_policy(const PlantConfig& config, const Tariff& tariff,
                                   const std::vector<double>& g_samples, double tolerance,
                                   std::size_t grid_steps, unsigned threads) {
    const auto report = validate_config(config, tariff);
    if (!report.ok()) {
        CertificationReport out;
        out.valid_config = false;
        out.status = "invalid configuration: " + report.to_string();
        out.tariff = tariff;
        out.tolerance = tolerance;
        out.grid_steps = grid_steps;
        return out;
    }
    return certify_policy(config, tariff, compute_thresholds(config, tariff), g_samples, tolerance,
                          grid_steps, threads);
}

CertificationReport certify_policy(const PlantConfig& config, const Tariff& tariff,
                                   const ThresholdSet& thresholds,
                                   const std::vector<double>& g_samples, double tolerance,
                                   std::size_t grid_steps, unsigned threads) {
    CertificationReport out;
    out.tariff = tariff;
    out.tolerance = tolerance;
    out.grid_steps = grid_steps;

    const auto validation = validate_config(config, tariff);
    if (!validation.ok()) {
        out.valid_config = false;
        out.status = "invalid configuration: " + validation.to_string();
        return out;
    }

    bool all_pass = !g_samples.empty();
    out.worst_gap = kNegInf;
    for (double g : g_samples) {
        CertificationSample s;
        s.g = g;
        const DispatchPoint pt = optimal_dispatch(g, thresholds, config);
        s.policy_profit = profit(pt, config, tariff);
        const OracleSolution zw = solve_zonewise(g, config, tariff);
        const OracleSolution gr = solve_grid(g, config, tariff, grid_steps, threads);
        s.zonewise_profit = zw.profit;
        s.grid_profit = gr.profit;
        s.grid_error_bound = gr.error_bound;
        s.gap = std::max(zw.profit, gr.profit) - s.policy_profit;
        s.pass = within_bounds(pt, config) && zw.profit - s.policy_profit <= tolerance &&
                 gr.profit - s.policy_profit <= tolerance &&
                 s.policy_profit - gr.profit <= gr.error_bound + tolerance;
        all_pass = all_pass && s.pass;
        if (s.gap > out.worst_gap) {
            out.worst_gap = s.gap;
            out.worst_gap_g = g;
        }
        out.samples.push_back(s);
    }
    if (out.samples.empty()) out.worst_gap = 0.0;
    out.status = all_pass ? "PASS" : "FAIL";
    return out;
}

}  // namespace desal

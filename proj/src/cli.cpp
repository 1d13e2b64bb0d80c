#include "desal/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "desal/io.hpp"

namespace desal {

namespace {

namespace fs = std::filesystem;

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Provenance block written into every artifact. Contains nothing that varies
/// between identical invocations.
struct RunManifest {
    std::string subcommand;
    std::string config_path;
    std::vector<std::pair<std::string, double>> overrides;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> outputs;

    json to_json() const {
        json ov = json::object();
        for (const auto& [k, v] : overrides) ov[k] = v;
        json j = {{"tool", kToolVersion}, {"subcommand", subcommand}, {"config", config_path}, {"overrides", ov}};
        j["seed"] = seed ? json(*seed) : json(nullptr);
        j["outputs"] = outputs;
        return j;
    }

    std::string comment_header() const {
        std::string s = fmt::format("# tool: {}\n# subcommand: {}\n", kToolVersion, subcommand);
        if (!config_path.empty()) s += fmt::format("# config: {}\n", config_path);
        for (const auto& [k, v] : overrides) s += fmt::format("# override: {}={}\n", k, v);
        if (seed) s += fmt::format("# seed: {}\n", *seed);
        for (const auto& o : outputs) s += fmt::format("# output: {}\n", o);
        return s;
    }
};

struct TariffFlags {
    std::optional<double> pi_water;
    std::optional<double> pi_buy;
    std::optional<double> pi_sell;

    void attach(CLI::App* cmd) {
        cmd->add_option("--pi-water", pi_water, "Water price override ($/m3)");
        cmd->add_option("--pi-buy", pi_buy, "Electricity import price override ($/kWh)");
        cmd->add_option("--pi-sell", pi_sell, "Electricity export price override ($/kWh)");
    }
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(fmt::format("{}: {}", path, e.what()));
    }
}

// Flags take precedence over the config file.
ConfigDocument load_config(const std::string& path, const TariffFlags& flags, RunManifest& manifest) {
    json doc = read_json(path);
    manifest.config_path = path;
    if (flags.pi_water || flags.pi_buy || flags.pi_sell) {
        if (!doc.contains("tariff") || !doc["tariff"].is_object()) doc["tariff"] = json::object();
        auto apply = [&](const char* key, const std::optional<double>& v) {
            if (!v) return;
            doc["tariff"][key] = *v;
            manifest.overrides.emplace_back(key, *v);
        };
        apply("pi_water", flags.pi_water);
        apply("pi_buy", flags.pi_buy);
        apply("pi_sell", flags.pi_sell);
    }
    return config_from_json(doc);
}

std::vector<HourlyProfile> read_profiles(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        return load_profiles(in);
    } catch (const ScenarioError& e) {
        throw DataError(fmt::format("{}: {}", path, e.what()));
    }
}

HourlyStats read_stats(const std::string& path) {
    return stats_from_json(read_json(path));
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    f << content;
}

std::string price_tag(double p) {
    std::string s = fmt::format("{}", p);
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Co-scheduling of water and power for a hybrid desalination plant", "desal"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string config_path, profile_path, stats_path, out_path;
    TariffFlags flags;
    double g = 0.0;
    std::size_t runs = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::size_t day_index = 0;
    double scale = 1.0;
    std::vector<double> prices;
    double g_max = 50000.0, g_step = 500.0, tol = 0.01;
    std::size_t grid_steps = 2000;

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Plant + tariff JSON")->required();
        flags.attach(cmd);
    };
    auto add_profile = [&](CLI::App* cmd) {
        cmd->add_option("--profile", profile_path, "Hourly profile CSV (day,h0..h23)")->required();
        cmd->add_option("--day", day_index, "Row of the profile CSV to use (0-based)");
        cmd->add_option("--scale", scale, "Multiply the profile by this factor")->check(CLI::NonNegativeNumber);
    };

    auto* thresholds_cmd = app.add_subcommand("thresholds", "Print the precomputed policy thresholds as JSON");
    add_config(thresholds_cmd);

    auto* dispatch_cmd = app.add_subcommand("dispatch", "Optimal dispatch for one renewable output");
    add_config(dispatch_cmd);
    dispatch_cmd->add_option("--g", g, "Renewable generation (kWh)")->required()->check(CLI::NonNegativeNumber);

    auto* simulate_cmd = app.add_subcommand("simulate", "Dispatch one day of an hourly profile");
    add_config(simulate_cmd);
    add_profile(simulate_cmd);
    simulate_cmd->add_option("--out", out_path, "Output directory (default: stdout)");

    auto* mc_cmd = app.add_subcommand("montecarlo", "Monte Carlo days sampled from hourly stats");
    add_config(mc_cmd);
    mc_cmd->add_option("--stats", stats_path, "Hourly stats JSON")->required();
    mc_cmd->add_option("--runs", runs, "Number of sampled days")->check(CLI::PositiveNumber);
    mc_cmd->add_option("--seed", seed, "RNG seed");
    mc_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    mc_cmd->add_option("--out", out_path, "Also write summary.json and summary.csv here");

    auto* sweep_cmd = app.add_subcommand("sweep", "One day schedule per water price");
    add_config(sweep_cmd);
    add_profile(sweep_cmd);
    sweep_cmd->add_option("--prices", prices, "Water prices")->required()->delimiter(',');
    sweep_cmd->add_option("--out", out_path, "Output directory")->required();

    auto* certify_cmd = app.add_subcommand("certify", "Check the closed-form policy against both oracles");
    add_config(certify_cmd);
    certify_cmd->add_option("--prices", prices, "Water prices (default: config value)")->delimiter(',');
    certify_cmd->add_option("--g-max", g_max, "Largest generation sample")->check(CLI::NonNegativeNumber);
    certify_cmd->add_option("--g-step", g_step, "Generation step")->check(CLI::PositiveNumber);
    certify_cmd->add_option("--tol", tol, "Profit tolerance ($)")->check(CLI::NonNegativeNumber);
    certify_cmd->add_option("--grid-steps", grid_steps, "Lattice points per axis")->check(CLI::Range(2, 100000));
    certify_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* sample_cmd = app.add_subcommand("sample", "Sample daily profiles from hourly stats");
    sample_cmd->add_option("--stats", stats_path, "Hourly stats JSON")->required();
    sample_cmd->add_option("--runs", runs, "Number of profiles")->check(CLI::PositiveNumber);
    sample_cmd->add_option("--seed", seed, "RNG seed");
    sample_cmd->add_option("--out", out_path, "Output CSV (default: stdout)");

    auto* fit_cmd = app.add_subcommand("fit", "Fit hourly stats JSON from a profile CSV");
    fit_cmd->add_option("--profile", profile_path, "Hourly profile CSV")->required();
    fit_cmd->add_option("--scale", scale, "Multiply profiles by this factor")->check(CLI::NonNegativeNumber);

    std::vector<const char*> argv;
    argv.push_back("desal");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    RunManifest manifest;
    manifest.subcommand = app.get_subcommands().front()->get_name();

    auto pick_profile = [&]() {
        auto profiles = read_profiles(profile_path);
        if (day_index >= profiles.size())
            throw DataError(fmt::format("{}: --day {} out of range ({} rows)", profile_path, day_index, profiles.size()));
        return scale_profile(profiles[day_index], scale);
    };

    try {
        if (*thresholds_cmd) {
            const auto cfg = load_config(config_path, flags, manifest);
            json j = to_json(compute_thresholds(cfg.plant, cfg.tariff));
            j["manifest"] = manifest.to_json();
            out << j.dump(2) << '\n';
        } else if (*dispatch_cmd) {
            const auto cfg = load_config(config_path, flags, manifest);
            const ThresholdSet t = compute_thresholds(cfg.plant, cfg.tariff);
            const DispatchPoint pt = optimal_dispatch(g, t, cfg.plant);
            json j = to_json(pt);
            j["profit"] = profit(pt, cfg.plant, cfg.tariff);
            j["zone"] = std::string(to_string(zone_of(g, t)));
            j["regime"] = std::string(to_string(t.regime));
            j["manifest"] = manifest.to_json();
            out << j.dump(2) << '\n';
        } else if (*simulate_cmd) {
            const auto cfg = load_config(config_path, flags, manifest);
            const HourlyProfile profile = pick_profile();
            const ThresholdSet t = compute_thresholds(cfg.plant, cfg.tariff);
            const DaySchedule day = run_day(profile, t, cfg.plant, cfg.tariff);
            const fs::path target = out_path.empty() ? fs::path() : fs::path(out_path) / "schedule.csv";
            if (!target.empty()) manifest.outputs.push_back(target.generic_string());
            std::ostringstream csv;
            csv << manifest.comment_header();
            csv << fmt::format("# regime: {}\n# total_profit: {}\n", to_string(t.regime), day.total_profit);
            write_schedule_csv(csv, day);
            if (target.empty())
                out << csv.str();
            else
                write_file(target, csv.str());
        } else if (*mc_cmd) {
            const auto cfg = load_config(config_path, flags, manifest);
            const HourlyStats stats = read_stats(stats_path);
            manifest.seed = seed;
            const McSummary s = run_monte_carlo(stats, runs, seed, cfg.plant, cfg.tariff, threads);
            if (!out_path.empty()) {
                manifest.outputs.push_back((fs::path(out_path) / "summary.json").generic_string());
                manifest.outputs.push_back((fs::path(out_path) / "summary.csv").generic_string());
            }
            json j = to_json(s);
            j["manifest"] = manifest.to_json();
            const std::string text = j.dump(2) + "\n";
            out << text;
            if (!out_path.empty()) {
                write_file(fs::path(out_path) / "summary.json", text);
                std::ostringstream csv;
                csv << manifest.comment_header();
                write_summary_csv(csv, s);
                write_file(fs::path(out_path) / "summary.csv", csv.str());
            }
        } else if (*sweep_cmd) {
            const auto cfg = load_config(config_path, flags, manifest);
            const HourlyProfile profile = pick_profile();
            const auto results = sweep_price(prices, profile, cfg.plant, cfg.tariff);
            std::vector<fs::path> files;
            for (std::size_t k = 0; k < results.size(); ++k) {
                files.push_back(fs::path(out_path) / fmt::format("sweep_{}_pw{}.csv", k, price_tag(results[k].pi_water)));
                manifest.outputs.push_back(files.back().generic_string());
            }
            json listing = json::array();
            for (std::size_t k = 0; k < results.size(); ++k) {
                const auto& r = results[k];
                std::ostringstream csv;
                csv << manifest.comment_header();
                csv << fmt::format("# pi_water: {}\n# regime: {}\n# total_profit: {}\n", r.pi_water,
                                   to_string(r.thresholds.regime), r.schedule.total_profit);
                write_schedule_csv(csv, r.schedule);
                write_file(files[k], csv.str());
                listing.push_back({{"pi_water", r.pi_water},
                                   {"regime", std::string(to_string(r.thresholds.regime))},
                                   {"total_profit", r.schedule.total_profit},
                                   {"file", files[k].generic_string()}});
            }
            out << json({{"results", listing}, {"manifest", manifest.to_json()}}).dump(2) << '\n';
        } else if (*certify_cmd) {
            const auto cfg = load_config(config_path, flags, manifest);
            if (prices.empty()) prices.push_back(cfg.tariff.pi_water);
            std::vector<double> gs;
            for (std::size_t k = 0;; ++k) {
                const double v = static_cast<double>(k) * g_step;
                if (v > g_max * (1 + 1e-12)) break;
                gs.push_back(v);
            }
            bool pass = true;
            json reports = json::array();
            for (double p : prices) {
                Tariff t = cfg.tariff;
                t.pi_water = p;
                const auto report = certify_policy(cfg.plant, t, gs, tol, grid_steps, threads);
                pass = pass && report.pass();
                reports.push_back(to_json(report));
                if (!report.pass())
                    err << fmt::format("certify: pi_water={} {} (worst gap {} at g={})\n", p, report.status,
                                       report.worst_gap, report.worst_gap_g);
            }
            out << json({{"status", pass ? "PASS" : "FAIL"}, {"reports", reports}, {"manifest", manifest.to_json()}})
                       .dump(2)
                << '\n';
            return pass ? kExitOk : kExitCertificationFailed;
        } else if (*sample_cmd) {
            const HourlyStats stats = read_stats(stats_path);
            manifest.seed = seed;
            if (!out_path.empty()) manifest.outputs.push_back(out_path);
            std::ostringstream csv;
            csv << manifest.comment_header();
            write_profiles(csv, sample_profiles(stats, runs, seed));
            if (out_path.empty())
                out << csv.str();
            else
                write_file(out_path, csv.str());
        } else if (*fit_cmd) {
            auto profiles = read_profiles(profile_path);
            for (auto& p : profiles) p = scale_profile(p, scale);
            out << stats_to_json(fit_hourly_stats(profiles)).dump(2) << '\n';
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidData;
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidData;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidData;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidData;
    }
    return kExitOk;
}

}  // namespace desal

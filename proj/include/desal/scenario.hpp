#pragma once

// Hourly renewable profiles: CSV ingestion, per-hour statistics and seeded
// Monte Carlo sampling.
//
// Sampling draws every hour independently from Normal(mean[h], std[h]^2) and
// maps negative draws to 0. The generator is std::mt19937_64 feeding a
// Marsaglia polar normal transform (both fully specified, so any platform or
// language reproduces the stream). Profiles are produced in chunks of
// kSampleChunk; chunk k is seeded with splitmix64(seed + k * 0x9E3779B97F4A7C15),
// which makes the output independent of how chunks are spread over threads.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace desal {

inline constexpr std::size_t kHours = 24;
inline constexpr std::size_t kSampleChunk = 1024;

using HourArray = std::array<double, kHours>;

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HourlyProfile {
    std::string label;  // "day" column; free text
    HourArray values{};
};

struct HourlyStats {
    HourArray mean{};
    HourArray std{};
    HourArray median{};
};

/// Reads `day,h0,...,h23` CSV. Blank lines and lines starting with '#' are
/// skipped. Errors name the 1-based line and the column.
std::vector<HourlyProfile> load_profiles(std::istream& in);

void write_profiles(std::ostream& out, const std::vector<HourlyProfile>& profiles);

/// Sample mean, sample std (n - 1) and median per hour. Needs >= 2 profiles.
HourlyStats fit_hourly_stats(const std::vector<HourlyProfile>& profiles);

std::vector<HourlyProfile> sample_profiles(const HourlyStats& stats, std::size_t n, std::uint64_t seed,
                                           unsigned threads = 1);

HourlyProfile scale_profile(const HourlyProfile& profile, double factor);

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic standard normal source used by the sampler.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    double uniform();  // 53-bit uniform in [0, 1)

    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace desal

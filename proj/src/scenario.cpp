#include "desal/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>
#include <thread>

#include <fmt/core.h>

namespace desal {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::string column_name(std::size_t col) {
    return col == 0 ? "day" : "h" + std::to_string(col - 1);
}

}  // namespace

std::vector<HourlyProfile> load_profiles(std::istream& in) {
    std::vector<HourlyProfile> profiles;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto cells = split(view);
        if (cells.size() != kHours + 1)
            throw ScenarioError(fmt::format("line {}: format error, {} columns (expected {})", line_no,
                                            cells.size(), kHours + 1));
        if (!have_header) {
            for (std::size_t c = 0; c < cells.size(); ++c)
                if (cells[c] != column_name(c))
                    throw ScenarioError(fmt::format("line {}: format error, header column {} is '{}' (expected '{}')",
                                                    line_no, c + 1, cells[c], column_name(c)));
            have_header = true;
            continue;
        }
        HourlyProfile p;
        p.label = std::string(cells[0]);
        for (std::size_t h = 0; h < kHours; ++h) {
            const std::string_view cell = cells[h + 1];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
                throw ScenarioError(fmt::format("line {}, column {}: malformed number '{}'", line_no,
                                                column_name(h + 1), cell));
            if (v < 0.0)
                throw ScenarioError(fmt::format("line {}, column {}: negative generation {}", line_no,
                                                column_name(h + 1), v));
            p.values[h] = v;
        }
        profiles.push_back(std::move(p));
    }
    if (!have_header) throw ScenarioError("format error: missing header day,h0,...,h23");
    return profiles;
}

void write_profiles(std::ostream& out, const std::vector<HourlyProfile>& profiles) {
    out << "day";
    for (std::size_t h = 0; h < kHours; ++h) out << ",h" << h;
    out << '\n';
    for (const auto& p : profiles) {
        out << p.label;
        for (double v : p.values) out << ',' << fmt::format("{}", v);
        out << '\n';
    }
}

HourlyStats fit_hourly_stats(const std::vector<HourlyProfile>& profiles) {
    const std::size_t n = profiles.size();
    if (n < 2) throw ScenarioError("fit_hourly_stats: need at least 2 profiles, got " + std::to_string(n));

    HourlyStats stats;
    std::vector<double> column(n);
    for (std::size_t h = 0; h < kHours; ++h) {
        for (std::size_t k = 0; k < n; ++k) column[k] = profiles[k].values[h];

        double sum = 0.0;
        for (double v : column) sum += v;
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (double v : column) ss += (v - mean) * (v - mean);

        std::sort(column.begin(), column.end());
        const double median = n % 2 == 1 ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);

        stats.mean[h] = mean;
        stats.std[h] = std::sqrt(ss / static_cast<double>(n - 1));
        stats.median[h] = median;
    }
    return stats;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double NormalStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::vector<HourlyProfile> sample_profiles(const HourlyStats& stats, std::size_t n, std::uint64_t seed,
                                           unsigned threads) {
    if (n == 0) throw ScenarioError("sample_profiles: n must be >= 1");
    std::vector<HourlyProfile> out(n);
    const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;

    auto fill_chunk = [&](std::size_t c) {
        NormalStream normal(splitmix64(seed + c * 0x9E3779B97F4A7C15ULL));
        const std::size_t end = std::min(n, (c + 1) * kSampleChunk);
        for (std::size_t k = c * kSampleChunk; k < end; ++k) {
            HourlyProfile& p = out[k];
            p.label = "s" + std::to_string(k);
            for (std::size_t h = 0; h < kHours; ++h) {
                const double x = normal.next();
                p.values[h] = stats.std[h] == 0.0 ? stats.mean[h] : std::max(0.0, stats.mean[h] + stats.std[h] * x);
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || chunks == 1) {
        for (std::size_t c = 0; c < chunks; ++c) fill_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t c = t; c < chunks; c += threads) fill_chunk(c);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

HourlyProfile scale_profile(const HourlyProfile& profile, double factor) {
    if (factor < 0.0 || !std::isfinite(factor)) throw std::invalid_argument("scale_profile: factor must be >= 0");
    HourlyProfile out = profile;
    for (double& v : out.values) v *= factor;
    return out;
}

}  // namespace desal

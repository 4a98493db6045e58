#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hype/error.hpp"
#include "hype/ingest.hpp"

namespace hype::synth {

enum class Noise {
    stratified,  ///< each block of `block` days holds the Poisson quantiles at (k+0.5)/block, shuffled
    poisson,     ///< independent Poisson draws
};

struct Shock {
    std::size_t day = 0;  ///< index into the generated calendar
    std::size_t ticker = 0;
    double multiplier = 10.0;
};

struct SynthSpec {
    std::uint64_t seed = 1;
    std::size_t n_tickers = 10;
    std::size_t n_days = 60;
    std::size_t n_sectors = 3;
    Date start{2024, 1, 1};
    double intensity_min = 100.0;  ///< base daily mentions, drawn uniformly per ticker
    double intensity_max = 400.0;
    std::map<std::size_t, double> intensity_override;
    std::vector<Shock> shocks;
    Noise noise = Noise::stratified;
    std::size_t block = 5;
    double cap_vol = 0.002;  ///< daily log-cap volatility
    double cap_min = 1e10;
    double cap_max = 1e12;
};

struct SynthData {
    TradingCalendar calendar;
    std::vector<Ticker> tickers;
    std::vector<HeadlineRecord> headlines;
    ValuePanel market_caps;
    SectorMap sectors;
    std::vector<double> intensity;
};

/// Ticker i renders as "S000.N", "S001.N", ...
inline Ticker ticker_name(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "S%03zu", i);
    return Ticker{buf, "N"};
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Portable generator: mt19937_64 output mapped by hand, so draws do not
/// depend on the standard library's distribution implementations.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) : eng_(splitmix64(seed ^ splitmix64(stream))) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace detail

/// Smallest k with P(X <= k) >= u for X ~ Poisson(lambda).
inline long long poisson_quantile(double lambda, double u) {
    if (!(lambda > 0.0)) return 0;
    const double sd = std::sqrt(lambda);
    long long k = std::max(0LL, static_cast<long long>(std::floor(lambda - 12.0 * sd - 10.0)));
    // Mass below the start point is < 1e-30 and ignored.
    double cdf = 0.0;
    const double log_lambda = std::log(lambda);
    const long long limit = static_cast<long long>(lambda + 40.0 * sd + 50.0);
    for (; k < limit; ++k) {
        cdf += std::exp(static_cast<double>(k) * log_lambda - lambda - std::lgamma(static_cast<double>(k) + 1.0));
        if (cdf >= u) return k;
    }
    return limit;
}

inline SynthData generate(const SynthSpec& spec) {
    if (spec.n_tickers == 0) throw UsageError("synth: n_tickers must be >= 1");
    if (spec.n_days == 0) throw UsageError("synth: n_days must be >= 1");
    if (spec.n_sectors == 0 || spec.n_sectors > kSectorNames.size()) {
        throw UsageError("synth: n_sectors must be in 1..11");
    }
    if (spec.block == 0) throw UsageError("synth: block must be >= 1");
    if (!(spec.intensity_min > 0.0) || spec.intensity_max < spec.intensity_min) {
        throw UsageError("synth: need 0 < intensity_min <= intensity_max");
    }
    if (!(spec.cap_min > 0.0) || spec.cap_max < spec.cap_min) throw UsageError("synth: need 0 < cap_min <= cap_max");
    for (const auto& s : spec.shocks) {
        if (s.day >= spec.n_days || s.ticker >= spec.n_tickers || !(s.multiplier > 0.0)) {
            throw UsageError("synth: shock outside the generated panel");
        }
    }
    for (const auto& [i, lam] : spec.intensity_override) {
        if (i >= spec.n_tickers || !(lam > 0.0)) throw UsageError("synth: bad intensity override");
    }

    SynthData out;
    std::vector<Date> dates;
    for (Date d = spec.start; dates.size() < spec.n_days; d = d + 1) {
        if (!d.is_weekend()) dates.push_back(d);
    }
    out.calendar = TradingCalendar(dates);
    for (std::size_t i = 0; i < spec.n_tickers; ++i) {
        out.tickers.push_back(ticker_name(i));
        out.sectors.add(out.tickers.back(), std::string(kSectorNames[i % spec.n_sectors]));
    }

    detail::Rng setup(spec.seed, 1);
    out.intensity.resize(spec.n_tickers);
    for (std::size_t i = 0; i < spec.n_tickers; ++i) {
        out.intensity[i] = setup.uniform(spec.intensity_min, spec.intensity_max);
    }
    for (const auto& [i, lam] : spec.intensity_override) out.intensity[i] = lam;

    // multiplier[t][i]
    std::vector<double> mult(spec.n_days * spec.n_tickers, 1.0);
    for (const auto& s : spec.shocks) mult[s.day * spec.n_tickers + s.ticker] *= s.multiplier;

    // Count for each cell from a per-cell probability level.
    detail::Rng noise(spec.seed, 2);
    std::vector<double> level(spec.n_days * spec.n_tickers);
    for (std::size_t i = 0; i < spec.n_tickers; ++i) {
        if (spec.noise == Noise::poisson) {
            for (std::size_t t = 0; t < spec.n_days; ++t) level[t * spec.n_tickers + i] = noise.uniform();
            continue;
        }
        for (std::size_t b = 0; b < spec.n_days; b += spec.block) {
            std::vector<double> slots(spec.block);
            for (std::size_t k = 0; k < spec.block; ++k) {
                slots[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(spec.block);
            }
            noise.shuffle(slots);
            for (std::size_t k = 0; k < spec.block && b + k < spec.n_days; ++k) {
                level[(b + k) * spec.n_tickers + i] = slots[k];
            }
        }
    }

    std::size_t story = 0;
    for (std::size_t t = 0; t < spec.n_days; ++t) {
        for (std::size_t i = 0; i < spec.n_tickers; ++i) {
            const std::size_t cell = t * spec.n_tickers + i;
            const long long c = poisson_quantile(out.intensity[i] * mult[cell], level[cell]);
            for (long long r = 0; r < c; ++r) {
                char id[24];
                std::snprintf(id, sizeof id, "n%08zu", story++);
                out.headlines.push_back({dates[t], out.tickers[i], std::string(id)});
            }
        }
    }

    detail::Rng caps(spec.seed, 3);
    out.market_caps.calendar = out.calendar;
    out.market_caps.tickers = out.tickers;
    out.market_caps.values.resize(spec.n_days * spec.n_tickers);
    const double lmin = std::log(spec.cap_min), lmax = std::log(spec.cap_max);
    std::vector<double> logcap(spec.n_tickers);
    for (auto& lc : logcap) lc = caps.uniform(lmin, lmax);
    for (std::size_t t = 0; t < spec.n_days; ++t) {
        for (std::size_t i = 0; i < spec.n_tickers; ++i) {
            if (t > 0) logcap[i] += spec.cap_vol * caps.normal();
            out.market_caps.values[t * spec.n_tickers + i] = std::exp(logcap[i]);
        }
    }
    return out;
}

}  // namespace hype::synth

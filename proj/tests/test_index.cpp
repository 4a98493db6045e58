#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hype/index.hpp"

using namespace hype;

namespace {

TradingCalendar days(std::size_t n) {
    std::vector<Date> d;
    for (Date x(2024, 1, 1); d.size() < n; x = x + 1) {
        if (!x.is_weekend()) d.push_back(x);
    }
    return TradingCalendar(d);
}

std::vector<Ticker> tickers(std::initializer_list<const char*> names) {
    std::vector<Ticker> out;
    for (auto n : names) out.push_back(Ticker::parse(n));
    return out;
}

CountPanel random_counts(std::size_t nd, std::size_t nt, unsigned seed) {
    std::mt19937 rng(seed);
    CountPanel p{days(nd), {}, {}};
    for (std::size_t i = 0; i < nt; ++i) p.tickers.push_back(Ticker{"T" + std::to_string(i), "N"});
    p.counts.resize(nd * nt);
    for (auto& c : p.counts) c = 1 + static_cast<long long>(rng() % 500);
    return p;
}

ValuePanel random_caps(const TradingCalendar& cal, const std::vector<Ticker>& tk, unsigned seed) {
    std::mt19937 rng(seed);
    ValuePanel p{cal, tk, {}};
    for (std::size_t k = 0; k < cal.size() * tk.size(); ++k) p.values.push_back(1e9 * (1.0 + (rng() % 100000)));
    return p;
}

SectorMap three_sector_map(const std::vector<Ticker>& tk) {
    SectorMap m;
    const char* names[] = {"Financials", "Energy", "Utilities"};
    for (std::size_t i = 0; i < tk.size(); ++i) m.add(tk[i], names[i % 3]);
    return m;
}

HypeSeries series(std::vector<double> v, std::string entity = "E") {
    HypeSeries s{std::move(entity), SeriesKind::raw, days(v.size()).dates(), std::move(v)};
    return s;
}

}  // namespace

TEST(HypeIndex, ShareArithmetic) {
    CountPanel p{days(1), tickers({"A.N", "B.N", "C.N"}), {3, 1, 0}};
    const auto h = hype_index(p);
    ASSERT_EQ(h.size(), 3u);
    EXPECT_DOUBLE_EQ(h[0].values[0], 0.75);
    EXPECT_DOUBLE_EQ(h[1].values[0], 0.25);
    EXPECT_DOUBLE_EQ(h[2].values[0], 0.0);
    EXPECT_EQ(h[0].kind, SeriesKind::raw);
}

TEST(HypeIndex, EqualCountsAndSingleTicker) {
    CountPanel eq{days(2), tickers({"A.N", "B.N", "C.N", "D.N"}), {5, 5, 5, 5, 2, 2, 2, 2}};
    for (const auto& s : hype_index(eq)) {
        for (double v : s.values) EXPECT_DOUBLE_EQ(v, 0.25);
    }
    CountPanel one{days(3), tickers({"A.N"}), {4, 9, 1}};
    const auto single = hype_index(one);
    for (double v : single[0].values) EXPECT_EQ(v, 1.0);
}

TEST(HypeIndex, ZeroTotalNamesDate) {
    CountPanel p{days(2), tickers({"A.N", "B.N"}), {1, 2, 0, 0}};
    try {
        hype_index(p);
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("2024-01-02"), std::string::npos);
    }
}

TEST(HypeIndex, SumsToOneAndScaleInvariant) {
    auto p = random_counts(40, 25, 7);
    const auto h = hype_index(p);
    for (std::size_t t = 0; t < 40; ++t) {
        double sum = 0.0;
        for (const auto& s : h) {
            sum += s.values[t];
            EXPECT_GE(s.values[t], 0.0);
            EXPECT_LE(s.values[t], 1.0);
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
    auto scaled = p;
    for (std::size_t t = 0; t < 40; ++t) {
        for (std::size_t i = 0; i < 25; ++i) scaled.at(t, i) *= static_cast<long long>(t % 5 + 2);
    }
    const auto hs = hype_index(scaled);
    for (std::size_t i = 0; i < 25; ++i) {
        for (std::size_t t = 0; t < 40; ++t) EXPECT_NEAR(hs[i].values[t], h[i].values[t], 1e-15);
    }
}

TEST(SectorIndex, SumsMembers) {
    CountPanel p{days(1), tickers({"A.N", "B.N"}), {3, 1}};
    SectorMap m;
    m.add(Ticker::parse("A.N"), "Energy");
    m.add(Ticker::parse("B.N"), "Energy");
    const auto s = sector_hype_index(hype_index(p), m);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].entity, "Energy");
    EXPECT_DOUBLE_EQ(s[0].values[0], 1.0);
}

TEST(SectorIndex, SingleMemberEqualsTickerAndSumsToOne) {
    auto p = random_counts(30, 10, 3);
    SectorMap m;
    m.add(p.tickers[0], "Real Estate");
    for (std::size_t i = 1; i < 10; ++i) m.add(p.tickers[i], i % 2 ? "Financials" : "Health Care");
    const auto h = hype_index(p);
    const auto s = sector_hype_index(h, m);
    const auto* re = find_series(s, "Real Estate");
    ASSERT_NE(re, nullptr);
    EXPECT_EQ(re->values, h[0].values);
    for (std::size_t t = 0; t < 30; ++t) {
        double sum = 0.0;
        for (const auto& x : s) sum += x.values[t];
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(SectorIndex, UnmappedTickerNamed) {
    CountPanel p{days(1), tickers({"A.N", "B.N"}), {3, 1}};
    SectorMap m;
    m.add(Ticker::parse("A.N"), "Energy");
    try {
        sector_hype_index(hype_index(p), m);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("B.N"), std::string::npos);
    }
}

TEST(MarketCapWeight, Arithmetic) {
    const auto tk = tickers({"A.N", "B.N"});
    ValuePanel even{days(1), tk, {2, 2}};
    auto w = market_cap_weight(even, Level::ticker);
    EXPECT_DOUBLE_EQ(w.at(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(w.at(0, 1), 0.5);

    ValuePanel skew{days(1), tk, {9, 1}};
    w = market_cap_weight(skew, Level::ticker);
    EXPECT_NEAR(w.at(0, 0), 0.9, 1e-15);
    EXPECT_NEAR(w.at(0, 1), 0.1, 1e-15);

    ValuePanel one{days(2), tickers({"A.N"}), {5, 7}};
    w = market_cap_weight(one, Level::ticker);
    EXPECT_EQ(w.at(0, 0), 1.0);
    EXPECT_EQ(w.at(1, 0), 1.0);
}

TEST(MarketCapWeight, SectorLevelNeedsMap) {
    ValuePanel p{days(1), tickers({"A.N", "B.N"}), {2, 2}};
    EXPECT_THROW(market_cap_weight(p, Level::sector), UsageError);
    SectorMap m;
    m.add(Ticker::parse("A.N"), "Energy");
    m.add(Ticker::parse("B.N"), "Energy");
    const auto w = market_cap_weight(p, Level::sector, &m);
    ASSERT_EQ(w.entities.size(), 1u);
    EXPECT_EQ(w.at(0, 0), 1.0);
}

TEST(MarketCapWeight, RowsSumToOne) {
    const auto cal = days(20);
    auto tk = random_counts(1, 17, 1).tickers;
    const auto caps = random_caps(cal, tk, 11);
    const auto m = three_sector_map(tk);
    for (auto level : {Level::ticker, Level::sector}) {
        const auto w = market_cap_weight(caps, level, &m);
        for (std::size_t t = 0; t < cal.size(); ++t) {
            double sum = 0.0;
            for (std::size_t i = 0; i < w.entities.size(); ++i) sum += w.at(t, i);
            EXPECT_NEAR(sum, 1.0, 1e-12);
        }
    }
}

TEST(CapHype, RatioAndNeutrality) {
    WeightPanel w{days(2), {"E"}, {0.1, 0.2}};
    HypeSeries h{"E", SeriesKind::raw, days(2).dates(), {0.2, 0.2}};
    const auto c = cap_hype_index(h, w);
    EXPECT_DOUBLE_EQ(c.values[0], 2.0);
    EXPECT_DOUBLE_EQ(c.values[1], 1.0);
    EXPECT_EQ(c.kind, SeriesKind::cap_adjusted);
}

TEST(CapHype, ErrorsOnZeroWeightAndMismatch) {
    WeightPanel w{days(2), {"E"}, {0.0, 0.2}};
    HypeSeries h{"E", SeriesKind::raw, days(2).dates(), {0.2, 0.2}};
    EXPECT_THROW(cap_hype_index(h, w), NumericalError);
    HypeSeries other{"F", SeriesKind::raw, days(2).dates(), {0.2, 0.2}};
    EXPECT_THROW(cap_hype_index(other, w), AlignmentError);
    HypeSeries late{"E", SeriesKind::raw, {Date(2030, 1, 1)}, {0.2}};
    EXPECT_THROW(cap_hype_index(late, w), AlignmentError);
}

TEST(CapHype, CapWeightedMeanIsOne) {
    const std::size_t nd = 30, nt = 12;
    const auto counts = random_counts(nd, nt, 5);
    const auto caps = random_caps(counts.calendar, counts.tickers, 9);
    const auto m = three_sector_map(counts.tickers);
    const auto h = hype_index(counts);
    for (auto level : {Level::ticker, Level::sector}) {
        const auto raw = level == Level::ticker ? h : sector_hype_index(h, m);
        const auto w = market_cap_weight(caps, level, &m);
        const auto c = cap_hype_index(raw, w);
        for (std::size_t t = 0; t < nd; ++t) {
            double acc = 0.0;
            for (const auto& s : c) acc += w.at(t, *w.entity_index(s.entity)) * s.values[t];
            EXPECT_NEAR(acc, 1.0, 1e-12);
        }
    }
}

TEST(Normalize, DailyMode) {
    SeriesSet set = {series({0.3}, "A"), series({0.1}, "B")};
    const auto n = normalize(set, NormalizeMode::daily);
    EXPECT_DOUBLE_EQ(n[0].values[0], 1.5);
    EXPECT_DOUBLE_EQ(n[1].values[0], 0.5);
    EXPECT_EQ(n[0].kind, SeriesKind::normalized);
}

TEST(Normalize, ElevenSectorsDailySumToEleven) {
    const auto counts = random_counts(25, 33, 2);
    SectorMap m;
    for (std::size_t i = 0; i < 33; ++i) m.add(counts.tickers[i], std::string(kSectorNames[i % 11]));
    const auto s = normalize(sector_hype_index(hype_index(counts), m), NormalizeMode::daily);
    ASSERT_EQ(s.size(), 11u);
    for (std::size_t t = 0; t < 25; ++t) {
        double sum = 0.0;
        for (const auto& x : s) sum += x.values[t];
        EXPECT_NEAR(sum / 11.0, 1.0, 1e-12);
        EXPECT_NEAR(sum, 11.0, 1e-11);
    }
}

TEST(Normalize, OverallMode) {
    SeriesSet constant = {series({0.2, 0.2, 0.2}, "A"), series({0.2, 0.2, 0.2}, "B")};
    for (const auto& s : normalize(constant, NormalizeMode::overall)) {
        for (double v : s.values) EXPECT_DOUBLE_EQ(v, 1.0);
    }
    const auto counts = random_counts(20, 7, 4);
    const auto n = normalize(hype_index(counts), NormalizeMode::overall);
    double sum = 0.0;
    std::size_t k = 0;
    for (const auto& s : n) {
        for (double v : s.values) {
            sum += v;
            ++k;
        }
    }
    EXPECT_NEAR(sum / static_cast<double>(k), 1.0, 1e-12);
}

TEST(Normalize, ZeroMeanErrors) {
    SeriesSet zero = {series({0.0, 0.5}, "A"), series({0.0, 0.5}, "B")};
    try {
        normalize(zero, NormalizeMode::daily);
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("2024-01-01"), std::string::npos);
    }
    SeriesSet all_zero = {series({0.0, 0.0}, "A")};
    EXPECT_THROW(normalize(all_zero, NormalizeMode::overall), NumericalError);
    EXPECT_THROW(normalize({}, NormalizeMode::daily), UsageError);
}

TEST(Smooth, Examples) {
    const auto s = series({1, 2, 3, 4});
    EXPECT_EQ(smooth(s, 1).values, s.values);
    const auto two = smooth(s, 2);
    // Hand-rolled trailing mean with partial prefix.
    const std::vector<double> expected = {1.0, 1.5, 2.5, 3.5};
    EXPECT_EQ(two.values, expected);
    EXPECT_EQ(two.kind, SeriesKind::smoothed);
    EXPECT_EQ(two.dates, s.dates);
    for (double v : smooth(series({0.3, 0.3, 0.3, 0.3, 0.3}), 3).values) EXPECT_NEAR(v, 0.3, 1e-16);
    EXPECT_THROW(smooth(s, 0), UsageError);
}

TEST(Smooth, CommutesWithScaling) {
    std::mt19937 rng(99);
    std::vector<double> v(50);
    for (auto& x : v) x = static_cast<double>(rng() % 1000) / 7.0;
    const auto s = series(v);
    auto scaled = s;
    for (auto& x : scaled.values) x *= 3.25;
    const auto a = smooth(scaled, 7);
    const auto b = smooth(s, 7);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(a.values[i], 3.25 * b.values[i], 1e-12 * std::abs(a.values[i]));
}

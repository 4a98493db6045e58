// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hype/hype.hpp"
#include "support.hpp"

using namespace hype;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Level3 {
    SeriesSet raw;
    WeightPanel weights;
    SeriesSet cap;
};

Level3 build(const synth::SynthData& d, Level level) {
    const auto agg = aggregate_counts(d.headlines, d.calendar, d.tickers);
    const auto ticker_raw = hype_index(agg.panel);
    Level3 out;
    out.raw = level == Level::ticker ? ticker_raw : sector_hype_index(ticker_raw, d.sectors);
    out.weights = market_cap_weight(d.market_caps, level, &d.sectors);
    out.cap = cap_hype_index(out.raw, out.weights);
    return out;
}

Outcome sum_to_one() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto data = synth::generate({});
    double worst = 0.0;
    for (auto lv : {Level::ticker, Level::sector}) {
        const auto r = build(data, lv);
        for (std::size_t t = 0; t < data.calendar.size(); ++t) {
            double share = 0.0, capmean = 0.0;
            for (std::size_t i = 0; i < r.raw.size(); ++i) {
                share += r.raw[i].values[t];
                capmean += r.weights.at(t, *r.weights.entity_index(r.cap[i].entity)) * r.cap[i].values[t];
            }
            worst = std::max({worst, std::abs(share - 1.0), std::abs(capmean - 1.0)});
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(data.tickers.size() == 10 && data.calendar.size() == 60, "fixture shape");
    o.require(worst <= 1e-12, "max deviation " + fmt(worst));
    o.require(secs < 1.0, "runtime " + fmt(secs) + " s");
    if (o.pass) o.detail = "max deviation " + fmt(worst) + ", runtime " + fmt(secs) + " s";
    return o;
}

const EntityValues kTable3 = {
    {"Real Estate", 3.12139}, {"Industrials", 2.24106}, {"Utilities", 1.89307}, {"Financials", 1.59245},
    {"Consumer Staples", 1.42312}, {"Health Care", 1.10236}, {"Consumer Discretionary", 1.02629},
    {"Communication", 0.97654}, {"Energy", 0.97382}, {"Materials", 0.82895}, {"Information Technology", 0.51633},
};
const std::vector<std::pair<std::string, std::vector<std::string>>> kTable3Groups = {
    {"Relatively Hyped", {"Real Estate", "Industrials", "Utilities"}},
    {"Moderately Hyped", {"Financials", "Consumer Staples"}},
    {"Less Prominent",
     {"Health Care", "Consumer Discretionary", "Communication", "Energy", "Materials", "Information Technology"}},
};
const EntityValues kTable2 = {
    {"Financials", 0.19395}, {"Information Technology", 0.19313}, {"Communication", 0.12236},
    {"Consumer Discretionary", 0.11554}, {"Health Care", 0.11534}, {"Industrials", 0.10253},
    {"Consumer Staples", 0.09190}, {"Energy", 0.02678}, {"Utilities", 0.01842}, {"Real Estate", 0.01371},
    {"Materials", 0.00633},
};
const std::vector<std::pair<std::string, std::vector<std::string>>> kTable2Groups = {
    {"Over-Hyped", {"Financials", "Information Technology"}},
    {"Neutral-Hyped", {"Communication", "Consumer Discretionary", "Health Care", "Industrials", "Consumer Staples"}},
    {"Under-Hyped", {"Energy", "Utilities", "Real Estate", "Materials"}},
};

Outcome cluster_reproduction() {
    Outcome o;
    const auto m3 = cluster_averages(assignment_from(kTable3Groups, kTable3), kTable3);
    const auto m2 = cluster_averages(assignment_from(kTable2Groups, kTable2), kTable2);
    const double t3[] = {2.41851, 1.50779, 0.90438};
    const double t2[] = {0.19354, 0.11352, 0.01681};
    for (int g = 0; g < 3; ++g) {
        o.require(std::abs(m3[g] - t3[g]) <= 5e-4, "cap-adjusted group " + std::to_string(g) + " = " + fmt(m3[g]));
        o.require(std::abs(m2[g] - t2[g]) <= 5e-3, "raw group " + std::to_string(g) + " = " + fmt(m2[g]));
    }
    if (o.pass) {
        o.detail = "cap-adjusted " + fmt(m3[0]) + " " + fmt(m3[1]) + " " + fmt(m3[2]) + "; raw " + fmt(m2[0]) + " " +
                   fmt(m2[1]) + " " + fmt(m2[2]);
    }
    return o;
}

Outcome threshold_membership() {
    Outcome o;
    const auto a = classify(kTable3, {3, ClusterMethod::thresholds, {1.8, 1.3}, default_labels(SeriesKind::cap_adjusted)});
    for (std::size_t g = 0; g < 3; ++g) {
        const std::set<std::string> got(a.groups[g].members.begin(), a.groups[g].members.end());
        const std::set<std::string> want(kTable3Groups[g].second.begin(), kTable3Groups[g].second.end());
        o.require(got == want && a.groups[g].label == kTable3Groups[g].first, "group " + a.groups[g].label);
    }
    if (o.pass) o.detail = "3/3 groups equal";
    return o;
}

/// Normal-equations solve in long double via Cramer's rule.
std::pair<long double, long double> normal_equations(const std::vector<double>& x, const std::vector<double>& y) {
    long double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        n += 1;
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double det = n * sxx - sx * sx;
    return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

Outcome regression_kernel() {
    Outcome o;
    std::vector<double> x, y;
    for (int i = 0; i < 50; ++i) {
        x.push_back(0.01 * i);
        y.push_back(0.2166 * x.back() + 0.0078);
    }
    const auto exact = stats::linear_fit(x, y);
    o.require(std::abs(exact.slope - 0.2166) <= 1e-12, "exact slope " + fmt(exact.slope));
    o.require(std::abs(exact.intercept - 0.0078) <= 1e-12, "exact intercept " + fmt(exact.intercept));
    o.require(exact.r_squared == 1.0, "exact R2 " + fmt(exact.r_squared));

    const auto path = testing_support::data_path("regression_noisy.csv");
    const auto nx = testing_support::read_column(path, "x");
    const auto ny = testing_support::read_column(path, "y");
    const auto fit = stats::linear_fit(nx, ny);
    const auto [b1, b0] = normal_equations(nx, ny);
    o.require(std::abs(fit.slope - static_cast<double>(b1)) <= 1e-10, "noisy slope vs oracle");
    o.require(std::abs(fit.intercept - static_cast<double>(b0)) <= 1e-10, "noisy intercept vs oracle");
    const auto ref = testing_support::load_json(testing_support::data_path("reference.json"))["regression_noisy"];
    o.require(std::abs(fit.p_slope - ref["p_slope"].get<double>()) <= 1e-8, "p_slope " + fmt(fit.p_slope));
    o.require(std::abs(fit.p_intercept - ref["p_intercept"].get<double>()) <= 1e-8, "p_intercept");
    if (o.pass) o.detail = "exact and noisy fits agree; noisy slope " + fmt(fit.slope);
    return o;
}

Outcome power_kernel() {
    Outcome o;
    std::vector<double> x, y;
    for (int i = 1; i <= 40; ++i) {
        x.push_back(0.05 * i);
        y.push_back(2.28 * std::pow(x.back(), 1.41));
    }
    const auto f = stats::power_fit(x, y);
    o.require(std::abs(f.coefficient - 2.28) <= 1e-9, "c = " + fmt(f.coefficient));
    o.require(std::abs(f.exponent - 1.41) <= 1e-9, "k = " + fmt(f.exponent));
    o.require(std::abs(f.r_squared_log - 1.0) <= 1e-12, "R2 = " + fmt(f.r_squared_log));
    if (o.pass) o.detail = "c = " + fmt(f.coefficient) + ", k = " + fmt(f.exponent);
    return o;
}

Outcome normality_battery() {
    Outcome o;
    const auto ref = testing_support::load_json(testing_support::data_path("reference.json"))["normal500"];
    const auto r = stats::normality_suite(testing_support::read_column(testing_support::data_path("normal500.csv"), "value"));
    const std::vector<std::pair<const char*, stats::TestResult>> tests = {
        {"shapiro_wilk", r.shapiro_wilk},
        {"dagostino_k2", r.dagostino_k2},
        {"jarque_bera", r.jarque_bera},
        {"kolmogorov_smirnov", r.kolmogorov_smirnov},
    };
    double worst_p = 0.0;
    for (const auto& [name, t] : tests) {
        const double s = ref[name]["statistic"].get<double>();
        const double dp = std::abs(t.p_value - ref[name]["p_value"].get<double>());
        worst_p = std::max(worst_p, dp);
        o.require(std::abs(t.statistic - s) <= 1e-8 * std::abs(s), std::string(name) + " statistic");
        o.require(dp <= 1e-6, std::string(name) + " p-value");
    }
    const double a2 = ref["anderson_darling"]["statistic"].get<double>();
    o.require(std::abs(r.anderson_darling.statistic - a2) <= 1e-8 * a2, "anderson_darling statistic");
    const auto& cv = ref["anderson_darling"]["critical_values"];
    for (std::size_t i = 0; i < cv.size(); ++i) {
        o.require(std::abs(r.anderson_darling.critical_values.at(i).value - cv[i].get<double>()) <= 1e-6,
                  "anderson_darling critical value " + std::to_string(i));
    }

    // Heavy-tailed sample of 326 puts 1.079 in the 1% slot.
    const auto t326 = stats::anderson_darling(testing_support::read_column(testing_support::data_path("student_t326.csv"), "value"));
    o.require(t326.critical_at(1.0) == 1.079, "1% critical value " + fmt(t326.critical_at(1.0)));

    const double yv = std::sqrt(6.0 + std::sqrt(50.0));
    std::vector<double> z;
    for (int i = 0; i < 8; ++i) z.insert(z.end(), {1.0, -1.0});
    for (int i = 0; i < 2; ++i) z.insert(z.end(), {yv, -yv});
    const auto jb = stats::jarque_bera(z);
    o.require(std::abs(jb.statistic) <= 1e-12 && std::abs(jb.p_value - 1.0) <= 1e-12,
              "JB on moment-matched sample " + fmt(jb.statistic));
    if (o.pass) o.detail = "max p-value error " + fmt(worst_p) + ", AD 1% = 1.079, JB = " + fmt(jb.statistic);
    return o;
}

std::vector<EventFlag> scan_all(const synth::SynthSpec& spec) {
    const auto data = synth::generate(spec);
    const auto r = build(data, Level::ticker);
    std::vector<EventFlag> flags;
    for (const auto& s : r.cap) {
        const auto scan = detect_events(s, 2.5, kDefaultBaselineWindow);
        flags.insert(flags.end(), scan.flags.begin(), scan.flags.end());
    }
    return flags;
}

Outcome signal_round_trip() {
    Outcome o;
    synth::SynthSpec spec;
    spec.seed = 7;
    spec.n_tickers = 100;
    spec.n_days = 60;
    spec.n_sectors = 11;
    spec.cap_vol = 0.001;
    spec.intensity_override[3] = 20.0;
    const auto control = scan_all(spec);
    spec.shocks.push_back({40, 3, 10.0});
    const auto shocked = scan_all(spec);
    const auto target = synth::generate(spec).calendar.dates()[40];

    o.require(shocked.size() == 1, std::to_string(shocked.size()) + " flags on the shocked run");
    if (shocked.size() == 1) {
        o.require(shocked[0].entity == synth::ticker_name(3).str() && shocked[0].date == target,
                  "flag at " + shocked[0].entity + " " + shocked[0].date.str());
    }
    o.require(control.empty(), std::to_string(control.size()) + " flags on the control run");
    if (o.pass) o.detail = "one flag at " + shocked[0].entity + " " + shocked[0].date.str() + " z = " + fmt(shocked[0].z_score);
    return o;
}

Outcome determinism() {
    Outcome o;
    testing_support::ScratchDir s("acceptance");
    const auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
    auto r = testing_support::run_cli("synth --seed 11 --out " + q(s / "in"), s.path());
    o.require(r.exit_code == 0, "synth failed: " + r.err);
    for (const char* out : {"a", "b"}) {
        r = testing_support::run_cli("report --config " + q(s / "in" / "config.toml") + " --out " + q(s / out), s.path());
        o.require(r.exit_code == 0, std::string("report failed: ") + r.err);
    }
    if (!o.pass) return o;
    std::map<std::string, std::string> a, b;
    for (const auto& e : fs::directory_iterator(s / "a")) a[e.path().filename().string()] = testing_support::slurp(e.path());
    for (const auto& e : fs::directory_iterator(s / "b")) b[e.path().filename().string()] = testing_support::slurp(e.path());
    o.require(!a.empty() && a == b, "bundles differ");
    if (o.pass) o.detail = std::to_string(a.size()) + " files byte-identical";
    return o;
}

HypeSeries dated(const std::string& e, const std::vector<double>& v, Date start) {
    HypeSeries s{e, SeriesKind::cap_adjusted, {}, v};
    for (std::size_t i = 0; i < v.size(); ++i) s.dates.push_back(start + static_cast<int>(i));
    return s;
}

Outcome correlation_suite() {
    Outcome o;
    std::vector<double> a, aff, neg, other;
    for (int i = 0; i < 40; ++i) {
        a.push_back(std::sin(0.4 * i) + 0.02 * i);
        aff.push_back(3.5 * a.back() - 2.0);
        neg.push_back(-0.7 * a.back() + 5.0);
        other.push_back(std::cos(0.9 * i) + 0.001 * i * i);
    }
    const double rp = stats::pearson_corr(std::span<const double>(a), std::span<const double>(aff));
    const double rn = stats::pearson_corr(std::span<const double>(a), std::span<const double>(neg));
    o.require(std::abs(rp - 1.0) <= 1e-12, "affine r = " + fmt(rp));
    o.require(std::abs(rn + 1.0) <= 1e-12, "negated r = " + fmt(rn));
    const auto h = dated("A", a, Date(2024, 1, 1));
    const auto e = dated("X", other, Date(2024, 1, 6));
    const double ab = compare_external(h, e, 7).change_correlation;
    const double ba = compare_external(e, h, 7).change_correlation;
    o.require(std::abs(ab - ba) <= 1e-12, "compare_external asymmetric");
    if (o.pass) o.detail = "affine " + fmt(rp) + ", negated " + fmt(rn) + ", swap delta " + fmt(std::abs(ab - ba));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"sum-to-one invariants", sum_to_one},
        {"cluster averages from published tables", cluster_reproduction},
        {"threshold classification membership", threshold_membership},
        {"regression kernel", regression_kernel},
        {"power-fit kernel", power_kernel},
        {"normality battery", normality_battery},
        {"signal round trip", signal_round_trip},
        {"report determinism", determinism},
        {"correlation properties", correlation_suite},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}

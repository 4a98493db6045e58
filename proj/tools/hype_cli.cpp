// hype: command-line front end for the hype index pipeline.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hype/hype.hpp"

namespace {

using hype::pipeline::Stage;

// Config keys settable from the command line; flag spelling uses '-' for '_'.
const std::vector<std::pair<std::string, std::string>> kRunKeys = {
    {"universe", "Universe file (single 'ticker' column)"},
    {"headlines", "Headline export(s), comma separated"},
    {"headlines-format", "csv|jsonl (default: by extension)"},
    {"market-caps", "Market-cap panel CSV (date,ticker,market_cap)"},
    {"sectors", "Sector map CSV (ticker,sector)"},
    {"start", "First calendar date YYYY-MM-DD"},
    {"end", "Last calendar date YYYY-MM-DD"},
    {"normalize", "daily|overall"},
    {"window", "Smoothing window in trading days"},
    {"method", "thresholds|kmeans1d"},
    {"k", "Number of hype groups"},
    {"cutpoints", "Cap-adjusted thresholds, high to low (a,b)"},
    {"raw-cutpoints", "Raw-index thresholds, high to low (a,b)"},
    {"z-threshold", "Event z-score threshold"},
    {"baseline-window", "Trailing window for event z-scores"},
    {"momentum-window", "Rolling window for hype momentum"},
    {"external-entity", "Entity compared with external series (default: market)"},
    {"levels", "ticker,sector"},
    {"out", "Output directory"},
    {"format", "csv|json"},
};

struct RunArgs {
    std::string config;
    std::map<std::string, std::string> values;
    std::vector<std::string> externals;
};

void add_run_options(CLI::App* app, RunArgs& args) {
    app->add_option("--config", args.config, "TOML run configuration");
    for (const auto& [key, help] : kRunKeys) app->add_option("--" + key, args.values[key], help);
    app->add_option("--external", args.externals, "External series NAME=PATH (repeatable)");
}

hype::RunConfig build_config(CLI::App* app, const RunArgs& args) {
    hype::RunConfig cfg = args.config.empty() ? hype::RunConfig{} : hype::load_config(args.config);
    for (const auto& [key, help] : kRunKeys) {
        if (app->count("--" + key) > 0) hype::set_key(cfg, key, args.values.at(key));
    }
    for (const auto& e : args.externals) {
        auto src = hype::parse_external_arg(e);
        bool replaced = false;
        for (auto& existing : cfg.externals) {
            if (existing.name == src.name) {
                existing = src;
                replaced = true;
            }
        }
        if (!replaced) cfg.externals.push_back(src);
    }
    return cfg;
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

int fail(hype::ErrorKind kind, const std::string& message) {
    std::cerr << "error kind=" << hype::to_string(kind) << " code=" << static_cast<int>(kind)
              << " message=" << one_line(message) << '\n';
    return static_cast<int>(kind);
}

std::size_t parse_index(const std::string& text, const std::string& what) {
    const auto v = hype::csv::parse_int(text, 0, what);
    if (v < 0) throw hype::UsageError(what + " must be >= 0");
    return static_cast<std::size_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hype index pipeline: news-share and capitalization-adjusted attention indices"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, Stage>> stages = {
        {"ingest", Stage::ingest},     {"compute", Stage::compute}, {"classify", Stage::classify},
        {"stats", Stage::stats},       {"signals", Stage::signals}, {"report", Stage::report},
    };
    const std::map<std::string, std::string> descriptions = {
        {"ingest", "Validate inputs and write the aligned count and cap panels"},
        {"compute", "Raw, normalized, cap-adjusted and smoothed indices"},
        {"classify", "Long-run hype groups and cluster bands"},
        {"stats", "Normality battery, correlations and weight regressions"},
        {"signals", "Events, neutrality, momentum and external comparisons"},
        {"report", "Run every stage into one bundle"},
    };
    std::map<std::string, RunArgs> run_args;
    std::map<std::string, CLI::App*> run_apps;
    for (const auto& [name, stage] : stages) {
        auto* sub = app.add_subcommand(name, descriptions.at(name));
        add_run_options(sub, run_args[name]);
        run_apps[name] = sub;
    }

    hype::synth::SynthSpec spec;
    std::string synth_out = "synth";
    std::string synth_start, synth_noise = "stratified", synth_intensity;
    std::vector<std::string> shocks, overrides;
    auto* synth = app.add_subcommand("synth", "Write a seeded synthetic corpus and config");
    synth->add_option("--seed", spec.seed, "RNG seed");
    synth->add_option("--tickers", spec.n_tickers, "Number of tickers");
    synth->add_option("--days", spec.n_days, "Number of trading days");
    synth->add_option("--sectors", spec.n_sectors, "Number of sectors (1-11)");
    synth->add_option("--start", synth_start, "First date YYYY-MM-DD");
    synth->add_option("--intensity", synth_intensity, "Base intensity range LO,HI");
    synth->add_option("--intensity-override", overrides, "TICKER_INDEX:LAMBDA (repeatable)");
    synth->add_option("--shock", shocks, "DAY:TICKER_INDEX:MULTIPLIER (repeatable)");
    synth->add_option("--noise", synth_noise, "stratified|poisson");
    synth->add_option("--block", spec.block, "Stratification block length");
    synth->add_option("--cap-vol", spec.cap_vol, "Daily log market-cap volatility");
    synth->add_option("--out", synth_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(hype::ErrorKind::usage, e.what());
    }

    try {
        if (synth->parsed()) {
            if (!synth_start.empty()) spec.start = hype::detail::parse_date_arg("start", synth_start);
            if (synth_noise == "stratified") spec.noise = hype::synth::Noise::stratified;
            else if (synth_noise == "poisson") spec.noise = hype::synth::Noise::poisson;
            else throw hype::UsageError("noise must be stratified or poisson");
            if (!synth_intensity.empty()) {
                const auto parts = hype::detail::split_list(synth_intensity);
                if (parts.size() != 2) throw hype::UsageError("intensity: expected LO,HI");
                spec.intensity_min = hype::detail::parse_real("intensity", parts[0]);
                spec.intensity_max = hype::detail::parse_real("intensity", parts[1]);
            }
            auto split = [](const std::string& s) {
                std::vector<std::string> out;
                std::size_t start = 0;
                for (auto pos = s.find(':'); pos != std::string::npos; pos = s.find(':', start)) {
                    out.push_back(s.substr(start, pos - start));
                    start = pos + 1;
                }
                out.push_back(s.substr(start));
                return out;
            };
            for (const auto& o : overrides) {
                const auto p = split(o);
                if (p.size() != 2) throw hype::UsageError("intensity-override: expected INDEX:LAMBDA, got " + o);
                spec.intensity_override[parse_index(p[0], "ticker index")] = hype::detail::parse_real("lambda", p[1]);
            }
            for (const auto& s : shocks) {
                const auto p = split(s);
                if (p.size() != 3) throw hype::UsageError("shock: expected DAY:TICKER:MULT, got " + s);
                spec.shocks.push_back({parse_index(p[0], "shock day"), parse_index(p[1], "shock ticker"),
                                       hype::detail::parse_real("multiplier", p[2])});
            }
            for (const auto& f : hype::pipeline::write_synthetic(spec, synth_out)) {
                std::cout << (std::filesystem::path(synth_out) / f).string() << '\n';
            }
            return 0;
        }
        for (const auto& [name, stage] : stages) {
            auto* sub = run_apps.at(name);
            if (!sub->parsed()) continue;
            const auto cfg = build_config(sub, run_args.at(name));
            const auto result = hype::pipeline::run(cfg, stage);
            for (const auto& f : result.files) std::cout << (cfg.out / f).string() << '\n';
            for (const auto& s : result.skipped) std::cerr << "skipped: " << one_line(s) << '\n';
            return 0;
        }
    } catch (const hype::Error& e) {
        return fail(e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail(hype::ErrorKind::numerical, std::string("internal: ") + e.what());
    }
    return fail(hype::ErrorKind::usage, "no subcommand");
}

// dimersim.cpp — command line front end.
//
//   dimersim simulate --config FILE [--route full|reduced|both] [--out DIR] [--set key=value]...
//   dimersim preset NAME [--out DIR] [--route ...] [--jobs N]
//   dimersim sweep --config FILE --axis PATH (--values a,b,c | --range lo:hi:n[:log])
//                  --reduce saturation_P|saturation_eta|peak_C [--out DIR] [--jobs N]
//   dimersim validate --config FILE
//
// Exit codes: 0 success, 2 configuration error, 3 integration failure.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dimer/errors.hpp"
#include "dimer/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIntegration = 3;

dimer::ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                                  const std::string& route_flag) {
    dimer::KeyValues kv = dimer::parse_kv_file(path);
    for (const auto& ov : overrides) dimer::apply_override(kv, ov);
    if (!route_flag.empty()) kv.set("route", route_flag);
    return dimer::ScenarioConfig::from_kv(kv);
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> v;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw dimer::ConfigError("--values: not a number: '" + item + "'");
        }
    }
    if (v.empty()) throw dimer::ConfigError("--values: no values given");
    return v;
}

std::vector<double> parse_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3 && parts.size() != 4)
        throw dimer::ConfigError("--range: expected lo:hi:count or lo:hi:count:log");
    double lo = 0, hi = 0;
    int count = 0;
    try {
        lo = std::stod(parts[0]);
        hi = std::stod(parts[1]);
        count = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw dimer::ConfigError("--range: bad number in '" + spec + "'");
    }
    bool log = false;
    if (parts.size() == 4) {
        if (parts[3] == "log") log = true;
        else if (parts[3] == "linear") log = false;
        else throw dimer::ConfigError("--range: spacing must be linear or log");
    }
    if (count < 1) throw dimer::ConfigError("--range: count must be >= 1");
    return log ? dimer::log_spaced(lo, hi, count) : dimer::lin_spaced(lo, hi, count);
}

void report_run(const dimer::RunResult& r) {
    for (const auto& rr : r.routes) {
        const auto& t = rr.trajectory;
        std::printf("%s [%s]: %zu samples", r.config.name.c_str(),
                    rr.route == dimer::Route::Full ? "full" : "reduced", t.samples.size());
        if (rr.failed) {
            std::printf("  FAILED at t=%.6g", rr.failed_at);
        } else {
            std::printf("  satP=%.6g satEta=%.6g peakC=%.6g", t.saturation_p(), t.saturation_eta(),
                        t.peak_concurrence());
        }
        if (!rr.csv_path.empty()) std::printf("  -> %s", rr.csv_path.c_str());
        std::printf("\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dimersim — driven dissipative dimer simulator"};
    app.set_version_flag("--version", dimer::version_string());
    app.require_subcommand(1);

    std::string config_path, out_dir, route_flag, preset_name, axis, values_csv, range_spec, reduce_str;
    std::vector<std::string> overrides;
    int jobs = 0;

    auto* sim = app.add_subcommand("simulate", "integrate one scenario from a config file");
    sim->add_option("--config", config_path, "scenario config file")->required();
    sim->add_option("--route", route_flag, "full | reduced | both");
    sim->add_option("--out", out_dir, "output directory (CSV + JSON)");
    sim->add_option("--set", overrides, "override config keys, key=value");

    auto* pre = app.add_subcommand("preset", "run a named figure preset");
    pre->add_option("name", preset_name, "fig1 fig2 fig3 fig4a fig4b fig5a fig5b fig6a fig6b fig7a fig7b")
        ->required();
    pre->add_option("--out", out_dir, "output directory");
    pre->add_option("--route", route_flag, "full | reduced | both");
    pre->add_option("--jobs", jobs, "sweep worker threads (0 = hardware)");

    auto* sw = app.add_subcommand("sweep", "sweep one parameter over a value grid");
    sw->add_option("--config", config_path, "base scenario config file")->required();
    sw->add_option("--axis", axis, "parameter path, e.g. pulse.tau_p or params.J")->required();
    sw->add_option("--values", values_csv, "comma-separated values");
    sw->add_option("--range", range_spec, "lo:hi:count[:log|linear]");
    sw->add_option("--reduce", reduce_str, "saturation_P | saturation_eta | peak_C")->required();
    sw->add_option("--out", out_dir, "output directory");
    sw->add_option("--jobs", jobs, "worker threads (0 = hardware)");
    sw->add_option("--set", overrides, "override config keys, key=value");

    auto* val = app.add_subcommand("validate", "parse and check a config file, run nothing");
    val->add_option("--config", config_path, "scenario config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            const dimer::ScenarioConfig cfg = load_config(config_path, overrides, route_flag);
            const dimer::RunResult r = dimer::run(cfg, out_dir);
            report_run(r);
            return r.any_failed() ? kExitIntegration : kExitOk;
        }
        if (pre->parsed()) {
            const dimer::Preset p = dimer::preset(preset_name);
            bool failed = false;
            for (dimer::ScenarioConfig cfg : p.runs) {
                if (!route_flag.empty()) {
                    dimer::KeyValues kv = cfg.to_kv();
                    kv.set("route", route_flag);
                    cfg = dimer::ScenarioConfig::from_kv(kv);
                }
                const dimer::RunResult r = dimer::run(cfg, out_dir);
                report_run(r);
                failed = failed || r.any_failed();
            }
            for (const dimer::SweepSpec& spec : p.sweeps) {
                const dimer::SweepResult s = dimer::sweep(spec, out_dir, jobs);
                std::size_t ok = 0;
                for (const auto& pt : s.points) ok += pt.ok ? 1 : 0;
                std::printf("%s sweep %s: %zu/%zu points ok", spec.base.name.c_str(), spec.axis.c_str(), ok,
                            s.points.size());
                if (!s.csv_path.empty()) std::printf("  -> %s", s.csv_path.c_str());
                std::printf("\n");
                failed = failed || ok != s.points.size();
            }
            return failed ? kExitIntegration : kExitOk;
        }
        if (sw->parsed()) {
            if (values_csv.empty() == range_spec.empty())
                throw dimer::ConfigError("sweep: give exactly one of --values or --range");
            dimer::SweepSpec spec;
            spec.base = load_config(config_path, overrides, route_flag);
            spec.axis = axis;
            spec.values = values_csv.empty() ? parse_range(range_spec) : parse_values(values_csv);
            spec.reduce = dimer::parse_reduce(reduce_str);
            const dimer::SweepResult s = dimer::sweep(spec, out_dir, jobs);
            std::size_t ok = 0;
            for (const auto& pt : s.points) ok += pt.ok ? 1 : 0;
            std::printf("sweep %s: %zu/%zu points ok", spec.axis.c_str(), ok, s.points.size());
            if (!s.csv_path.empty()) std::printf("  -> %s", s.csv_path.c_str());
            std::printf("\n");
            return ok == s.points.size() ? kExitOk : kExitIntegration;
        }
        if (val->parsed()) {
            const dimer::ScenarioConfig cfg = load_config(config_path, {}, "");
            std::printf("%s: ok (t in [%.6g, %.6g], %zu pulse segment%s, route %s)\n", config_path.c_str(),
                        cfg.resolved_start(), cfg.resolved_end(), cfg.train.segments.size(),
                        cfg.train.segments.size() == 1 ? "" : "s",
                        cfg.route == dimer::RouteSelection::Full      ? "full"
                        : cfg.route == dimer::RouteSelection::Reduced ? "reduced"
                                                                      : "both");
            return kExitOk;
        }
    } catch (const dimer::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const dimer::UnknownPreset& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const dimer::IntegrationFailed& e) {
        std::fprintf(stderr, "integration failed at t=%.6g: %s\n", e.time, e.what());
        return kExitIntegration;
    }
    return kExitOk;
}

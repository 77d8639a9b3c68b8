// scenarios.hpp — scenario configuration, figure presets, the parameter sweep
// harness, and CSV/JSON emission.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dimer/config.hpp"
#include "dimer/master_equation.hpp"

namespace dimer {

enum class RouteSelection { Full, Reduced, Both };

struct ScenarioConfig {
    std::string name = "scenario";
    DimerParams params;
    PulseTrain train;
    std::optional<double> t_start;  // nullopt: earliest center - 5 tau (0 undriven)
    std::optional<double> t_end;    // nullopt: max(15/kappa, last center + 5 tau + 10/kappa)
    double dt = 1e-3;
    double sample_interval = 0.05;
    RouteSelection route = RouteSelection::Full;

    double resolved_start() const;
    double resolved_end() const;  // throws ConfigError when underdetermined (kappa = 0, no t_end)
    void validate() const;        // throws ConfigError

    static ScenarioConfig from_kv(const KeyValues& kv);  // throws ConfigError on unknown/invalid keys
    KeyValues to_kv() const;
};

struct SweepSpec {
    ScenarioConfig base;
    std::string axis;            // params.J, params.omega1, ..., pulse.tau_p, pulse.<n>.tau_p, pulse.e0, ...
    std::vector<double> values;  // nonempty, positive
    enum class Reduce { SaturationP, SaturationEta, PeakC } reduce = Reduce::SaturationP;

    void validate() const;
};

std::vector<double> log_spaced(double lo, double hi, int count);
std::vector<double> lin_spaced(double lo, double hi, int count);

// Set one parameter by dotted path on a copy of the config.
ScenarioConfig with_axis_value(const ScenarioConfig& base, const std::string& axis, double value);

SweepSpec::Reduce parse_reduce(const std::string& name);       // throws ConfigError
const char* reduce_name(SweepSpec::Reduce r);

// Figure presets. fig1/fig3 expand to a family of single-pulse runs,
// fig2 to one tau_p sweep per coupling J, the rest to one run each.
struct Preset {
    std::string name;
    std::vector<ScenarioConfig> runs;
    std::vector<SweepSpec> sweeps;
};
Preset preset(const std::string& name);  // throws UnknownPreset

// Run one scenario; writes <out_dir>/<name>_<route>.csv and .json per route
// when out_dir is nonempty. On IntegrationFailed the partial trajectory is
// flushed and the sidecar is marked failed.
struct RouteRun {
    Route route = Route::Full;
    Trajectory trajectory;
    bool failed = false;
    double failed_at = 0.0;
    std::string csv_path;
    std::string json_path;
};
struct RunResult {
    ScenarioConfig config;
    std::vector<RouteRun> routes;
    bool any_failed() const;
};
RunResult run(const ScenarioConfig& cfg, const std::string& out_dir = "");

// Run every sweep point independently (jobs > 1: worker threads; results are
// identical either way). Failed points are recorded, never fabricated.
struct SweepPoint {
    double axis_value = 0.0;
    bool ok = false;
    double reduced = 0.0;
    double saturation_p = 0.0;
    double saturation_eta = 0.0;
    double peak_concurrence = 0.0;
};
struct SweepResult {
    SweepSpec spec;
    std::vector<SweepPoint> points;
    std::string csv_path;
    std::string json_path;
};
SweepResult sweep(const SweepSpec& spec, const std::string& out_dir = "", int jobs = 0);

// Serialization helpers (shared with the CLI).
std::string trajectory_csv(const Trajectory& t);
std::string run_sidecar_json(const ScenarioConfig& cfg, const RouteRun& rr);
std::string sweep_csv(const SweepResult& s);
std::string sweep_sidecar_json(const SweepResult& s);
std::string version_string();

}  // namespace dimer

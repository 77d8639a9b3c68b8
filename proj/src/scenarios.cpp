// scenarios.cpp

#include "dimer/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dimer/errors.hpp"

namespace dimer {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

constexpr double kFig1J = 1.5;

}  // namespace

std::string version_string() { return std::string("dimersim ") + DIMERSIM_VERSION; }

// ------------------------------------------------------------ ScenarioConfig

double ScenarioConfig::resolved_start() const {
    if (t_start) return *t_start;
    return train.suggested_start();
}

double ScenarioConfig::resolved_end() const {
    if (t_end) return *t_end;
    const double kappa = std::max(params.kappa1, params.kappa2);
    if (kappa <= 0.0)
        throw ConfigError("config: time.end = auto needs kappa > 0; set time.end explicitly");
    return std::max(15.0 / kappa, train.last_center_plus_tail() + 10.0 / kappa);
}

void ScenarioConfig::validate() const {
    try {
        params.validate();
        train.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(dt > 0.0)) throw ConfigError("config: time.dt must be > 0");
    if (!(sample_interval >= dt)) throw ConfigError("config: time.sample must be >= time.dt");
    const double a = resolved_start();
    const double b = resolved_end();
    if (!(a < b)) throw ConfigError("config: time.start must be < time.end");
}

namespace {

RouteSelection parse_route(const std::string& s) {
    if (s == "full") return RouteSelection::Full;
    if (s == "reduced") return RouteSelection::Reduced;
    if (s == "both") return RouteSelection::Both;
    throw ConfigError("config: route must be full, reduced or both (got '" + s + "')");
}

const char* route_name(RouteSelection r) {
    switch (r) {
        case RouteSelection::Full: return "full";
        case RouteSelection::Reduced: return "reduced";
        case RouteSelection::Both: return "both";
    }
    return "full";
}

const char* route_name(Route r) { return r == Route::Full ? "full" : "reduced"; }

}  // namespace

ScenarioConfig ScenarioConfig::from_kv(const KeyValues& kv) {
    ScenarioConfig c;
    std::size_t max_pulse = 0;
    for (const auto& [key, value] : kv.entries) {
        if (key == "name") { c.name = value; continue; }
        if (key == "route") { c.route = parse_route(value); continue; }
        if (key == "params.omega1") { c.params.omega1 = kv.require_number(key); continue; }
        if (key == "params.omega2") { c.params.omega2 = kv.require_number(key); continue; }
        if (key == "params.J") { c.params.J = kv.require_number(key); continue; }
        if (key == "params.kappa1") { c.params.kappa1 = kv.require_number(key); continue; }
        if (key == "params.kappa2") { c.params.kappa2 = kv.require_number(key); continue; }
        if (key == "params.T1") { c.params.T1 = kv.require_number(key); continue; }
        if (key == "params.T2") { c.params.T2 = kv.require_number(key); continue; }
        if (key == "time.dt") { c.dt = kv.require_number(key); continue; }
        if (key == "time.sample") { c.sample_interval = kv.require_number(key); continue; }
        if (key == "time.start") {
            if (value != "auto") c.t_start = kv.require_number(key);
            continue;
        }
        if (key == "time.end") {
            if (value != "auto") c.t_end = kv.require_number(key);
            continue;
        }
        if (key.rfind("pulse.", 0) == 0) {
            const auto rest = key.substr(6);
            const auto dot = rest.find('.');
            if (dot == std::string::npos) throw ConfigError("config: bad pulse key '" + key + "'");
            std::size_t n = 0;
            try {
                n = std::stoul(rest.substr(0, dot));
            } catch (const std::exception&) {
                throw ConfigError("config: bad pulse index in '" + key + "'");
            }
            if (n == 0) throw ConfigError("config: pulse segments are numbered from 1");
            max_pulse = std::max(max_pulse, n);
            continue;  // fields picked up below once the count is known
        }
        throw ConfigError("config: unknown key '" + key + "'");
    }
    c.train.segments.resize(max_pulse);
    for (std::size_t n = 1; n <= max_pulse; ++n) {
        const std::string base = "pulse." + std::to_string(n) + ".";
        GaussianSegment& s = c.train.segments[n - 1];
        bool any = false;
        for (const char* field : {"e0", "tau_p", "center", "omega"}) {
            const auto v = kv.get(base + field);
            if (v) any = true;
        }
        if (!any) throw ConfigError("config: pulse segment " + std::to_string(n) + " has no keys");
        s.e0 = kv.get_number(base + "e0", 1.0);
        s.tau_p = kv.get_number(base + "tau_p", 1.0);
        s.t_center = kv.get_number(base + "center", 0.0);
        s.omega = kv.get_number(base + "omega", 0.0);
    }
    for (const auto& [key, value] : kv.entries) {  // reject unknown pulse fields
        if (key.rfind("pulse.", 0) != 0) continue;
        const auto rest = key.substr(6);
        const auto dot = rest.find('.');
        const std::string field = rest.substr(dot + 1);
        if (field != "e0" && field != "tau_p" && field != "center" && field != "omega")
            throw ConfigError("config: unknown pulse field '" + key + "'");
    }
    c.validate();
    return c;
}

KeyValues ScenarioConfig::to_kv() const {
    KeyValues kv;
    kv.set("name", name);
    kv.set("route", route_name(route));
    kv.set("params.omega1", fmt17(params.omega1));
    kv.set("params.omega2", fmt17(params.omega2));
    kv.set("params.J", fmt17(params.J));
    kv.set("params.kappa1", fmt17(params.kappa1));
    kv.set("params.kappa2", fmt17(params.kappa2));
    kv.set("params.T1", fmt17(params.T1));
    kv.set("params.T2", fmt17(params.T2));
    kv.set("time.start", fmt17(resolved_start()));
    kv.set("time.end", fmt17(resolved_end()));
    kv.set("time.dt", fmt17(dt));
    kv.set("time.sample", fmt17(sample_interval));
    for (std::size_t n = 0; n < train.segments.size(); ++n) {
        const std::string base = "pulse." + std::to_string(n + 1) + ".";
        const GaussianSegment& s = train.segments[n];
        kv.set(base + "e0", fmt17(s.e0));
        kv.set(base + "tau_p", fmt17(s.tau_p));
        kv.set(base + "center", fmt17(s.t_center));
        kv.set(base + "omega", fmt17(s.omega));
    }
    return kv;
}

// -------------------------------------------------------------------- sweeps

void SweepSpec::validate() const {
    base.validate();
    if (values.empty()) throw ConfigError("sweep: values must be nonempty");
    for (double v : values)
        if (!(v > 0.0)) throw ConfigError("sweep: values must be positive");
    (void)with_axis_value(base, axis, values.front());  // path check
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> v;
    if (count <= 0 || !(lo > 0.0) || !(hi > 0.0)) return v;
    v.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        v.push_back(lo);
        return v;
    }
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < count; ++i)
        v.push_back(std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(count - 1)));
    return v;
}

std::vector<double> lin_spaced(double lo, double hi, int count) {
    std::vector<double> v;
    if (count <= 0) return v;
    v.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        v.push_back(lo);
        return v;
    }
    for (int i = 0; i < count; ++i)
        v.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return v;
}

ScenarioConfig with_axis_value(const ScenarioConfig& base, const std::string& axis, double value) {
    ScenarioConfig c = base;
    auto set_pulse_field = [&](GaussianSegment& s, const std::string& field) {
        if (field == "tau_p") s.tau_p = value;
        else if (field == "e0") s.e0 = value;
        else if (field == "center") s.t_center = value;
        else if (field == "omega") s.omega = value;
        else throw ConfigError("sweep: unknown pulse field '" + field + "'");
    };
    if (axis == "params.omega1") c.params.omega1 = value;
    else if (axis == "params.omega2") c.params.omega2 = value;
    else if (axis == "params.J") c.params.J = value;
    else if (axis == "params.kappa1") c.params.kappa1 = value;
    else if (axis == "params.kappa2") c.params.kappa2 = value;
    else if (axis == "params.T1") c.params.T1 = value;
    else if (axis == "params.T2") c.params.T2 = value;
    else if (axis.rfind("pulse.", 0) == 0) {
        const std::string rest = axis.substr(6);
        const auto dot = rest.find('.');
        if (dot == std::string::npos) {
            if (c.train.segments.empty()) throw ConfigError("sweep: config has no pulse segments");
            for (auto& s : c.train.segments) set_pulse_field(s, rest);
        } else {
            std::size_t n = 0;
            try {
                n = std::stoul(rest.substr(0, dot));
            } catch (const std::exception&) {
                throw ConfigError("sweep: bad pulse index in '" + axis + "'");
            }
            if (n == 0 || n > c.train.segments.size())
                throw ConfigError("sweep: pulse index out of range in '" + axis + "'");
            set_pulse_field(c.train.segments[n - 1], rest.substr(dot + 1));
        }
    } else {
        throw ConfigError("sweep: unknown axis '" + axis + "'");
    }
    return c;
}

SweepSpec::Reduce parse_reduce(const std::string& name) {
    if (name == "saturation_P") return SweepSpec::Reduce::SaturationP;
    if (name == "saturation_eta") return SweepSpec::Reduce::SaturationEta;
    if (name == "peak_C") return SweepSpec::Reduce::PeakC;
    throw ConfigError("sweep: reduce must be saturation_P, saturation_eta or peak_C (got '" + name + "')");
}

const char* reduce_name(SweepSpec::Reduce r) {
    switch (r) {
        case SweepSpec::Reduce::SaturationP: return "saturation_P";
        case SweepSpec::Reduce::SaturationEta: return "saturation_eta";
        case SweepSpec::Reduce::PeakC: return "peak_C";
    }
    return "saturation_P";
}

// ------------------------------------------------------------------- presets

namespace {

ScenarioConfig figure_base(const std::string& name) {
    ScenarioConfig c;
    c.name = name;
    c.params = DimerParams{1.0, 1.0, kFig1J, 0.1, 0.1, 0.1, 0.1};
    c.dt = 1e-3;
    c.sample_interval = 0.05;
    c.route = RouteSelection::Full;
    return c;
}

PulseTrain train_at(double tau, std::initializer_list<double> centers) {
    PulseTrain t;
    for (double c : centers) t.segments.push_back(GaussianSegment{1.0, tau, c, 0.0});
    return t;
}

std::string tau_tag(double x) {  // tau in units of 1/J
    std::ostringstream os;
    os << "tp" << x << "J";
    return os.str();
}

std::vector<ScenarioConfig> fig1_family(const std::string& prefix) {
    std::vector<ScenarioConfig> runs;
    for (double x : {0.01, 0.1, 0.5, 1.0, 10.0}) {
        ScenarioConfig c = figure_base(prefix + "_" + tau_tag(x));
        c.train = train_at(x / kFig1J, {0.0});
        runs.push_back(std::move(c));
    }
    return runs;
}

}  // namespace

Preset preset(const std::string& name) {
    Preset p;
    p.name = name;
    if (name == "fig1" || name == "fig3") {
        // single Gaussian pulses, widths 0.01..10 in units of 1/J
        p.runs = fig1_family(name);
        return p;
    }
    if (name == "fig2") {
        // saturation values versus tau_p for several couplings; J = omega is
        // avoided (the |gg>-singlet degeneracy there traps population and the
        // saturation curves lose their shape, see docs/notes.md)
        for (double J : {1.2, 1.5, 2.0}) {
            std::ostringstream nm;
            nm << "fig2_J" << J;
            ScenarioConfig base = figure_base(nm.str());
            base.params.J = J;
            base.train = train_at(0.01 / J, {0.0});
            SweepSpec s;
            s.base = base;
            s.axis = "pulse.tau_p";
            s.values = log_spaced(0.01 / J, 10.0 / J, 40);
            s.reduce = SweepSpec::Reduce::SaturationEta;
            p.sweeps.push_back(std::move(s));
        }
        return p;
    }
    const auto two_pulse = [&](double x) {
        ScenarioConfig c = figure_base(name);
        c.train = train_at(x / kFig1J, {0.0, 15.0});
        return c;
    };
    if (name == "fig4a") { p.runs = {two_pulse(0.01)}; return p; }
    if (name == "fig4b" || name == "fig7a") { p.runs = {two_pulse(0.1)}; return p; }
    if (name == "fig5a") { p.runs = {two_pulse(0.5)}; return p; }
    if (name == "fig5b") { p.runs = {two_pulse(1.0)}; return p; }
    if (name == "fig6a") { p.runs = {two_pulse(10.0)}; return p; }
    if (name == "fig6b" || name == "fig7b") {
        ScenarioConfig c = figure_base(name);
        c.train = train_at(10.0 / kFig1J, {0.0, 25.0, 35.0, 45.0});
        p.runs = {c};
        return p;
    }
    throw UnknownPreset("unknown preset '" + name + "'");
}

// ------------------------------------------------------------------- run/emit

std::string trajectory_csv(const Trajectory& t) {
    std::ostringstream os;
    os << "t,p_ee,p_eg,p_ge,p_gg,P,eta_total,concurrence,rho11,rho22,rho33,rho44\n";
    for (const auto& s : t.samples) {
        os << fmt17(s.t);
        for (double v : s.pops) os << ',' << fmt17(v);
        os << ',' << fmt17(s.p_acceptor) << ',' << fmt17(s.eta_total) << ',' << fmt17(s.concurrence);
        for (double v : s.eig_pops) os << ',' << fmt17(v);
        os << '\n';
    }
    return os.str();
}

namespace {

nlohmann::json config_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["name"] = cfg.name;
    j["route"] = route_name(cfg.route);
    j["params"] = {{"omega1", cfg.params.omega1}, {"omega2", cfg.params.omega2}, {"J", cfg.params.J},
                   {"kappa1", cfg.params.kappa1}, {"kappa2", cfg.params.kappa2},
                   {"T1", cfg.params.T1},         {"T2", cfg.params.T2}};
    j["pulse"] = nlohmann::json::array();
    for (const auto& s : cfg.train.segments)
        j["pulse"].push_back({{"e0", s.e0}, {"tau_p", s.tau_p}, {"center", s.t_center}, {"omega", s.omega}});
    j["time"] = {{"start", cfg.resolved_start()},
                 {"end", cfg.resolved_end()},
                 {"dt", cfg.dt},
                 {"sample", cfg.sample_interval}};
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
}

}  // namespace

std::string run_sidecar_json(const ScenarioConfig& cfg, const RouteRun& rr) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["generator"] = version_string();
    j["kind"] = "run";
    j["name"] = cfg.name;
    j["route"] = route_name(rr.route);
    j["status"] = rr.failed ? "failed" : "ok";
    if (rr.failed) j["failed_at"] = rr.failed_at;
    j["config"] = config_json(cfg);
    const Trajectory& t = rr.trajectory;
    j["summary"] = {{"saturation_P", t.saturation_p()},
                    {"saturation_eta", t.saturation_eta()},
                    {"peak_C", t.peak_concurrence()},
                    {"peak_C_time", t.peak_concurrence_time()}};
    j["invariants"] = {{"max_trace_err", t.max_trace_err()},
                       {"max_herm_err", t.max_herm_err()},
                       {"min_eigenvalue", t.min_eigenvalue()}};
    j["samples"] = t.samples.size();
    return j.dump(2) + "\n";
}

bool RunResult::any_failed() const {
    for (const auto& r : routes)
        if (r.failed) return true;
    return false;
}

RunResult run(const ScenarioConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    RunResult result;
    result.config = cfg;

    std::vector<Route> routes;
    if (cfg.route == RouteSelection::Full || cfg.route == RouteSelection::Both) routes.push_back(Route::Full);
    if (cfg.route == RouteSelection::Reduced || cfg.route == RouteSelection::Both) routes.push_back(Route::Reduced);

    const TimeSpan span{cfg.resolved_start(), cfg.resolved_end()};
    EvolveOptions opt;
    opt.dt = cfg.dt;
    opt.sample_interval = cfg.sample_interval;

    for (Route r : routes) {
        RouteRun rr;
        rr.route = r;
        Trajectory partial;
        try {
            rr.trajectory = evolve(cfg.params, cfg.train, span, opt, r, nullptr, &partial);
        } catch (const IntegrationFailed& e) {
            rr.failed = true;
            rr.failed_at = e.time;
            rr.trajectory = std::move(partial);
        }
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            const std::string stem = (std::filesystem::path(out_dir) / (cfg.name + "_" + route_name(r))).string();
            rr.csv_path = stem + ".csv";
            rr.json_path = stem + ".json";
            write_file(rr.csv_path, trajectory_csv(rr.trajectory));
            write_file(rr.json_path, run_sidecar_json(cfg, rr));
        }
        result.routes.push_back(std::move(rr));
    }
    return result;
}

// -------------------------------------------------------------------- sweep

std::string sweep_csv(const SweepResult& s) {
    std::ostringstream os;
    os << s.spec.axis << ',' << reduce_name(s.spec.reduce) << '\n';
    for (const auto& pt : s.points) {
        os << fmt17(pt.axis_value) << ',';
        if (pt.ok) os << fmt17(pt.reduced);
        os << '\n';
    }
    return os.str();
}

std::string sweep_sidecar_json(const SweepResult& s) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["generator"] = version_string();
    j["kind"] = "sweep";
    j["name"] = s.spec.base.name;
    j["axis"] = s.spec.axis;
    j["reduce"] = reduce_name(s.spec.reduce);
    j["base_config"] = config_json(s.spec.base);
    j["points"] = nlohmann::json::array();
    for (const auto& pt : s.points) {
        nlohmann::json q = {{"value", pt.axis_value}, {"ok", pt.ok}};
        if (pt.ok) {
            q["reduced"] = pt.reduced;
            q["saturation_P"] = pt.saturation_p;
            q["saturation_eta"] = pt.saturation_eta;
            q["peak_C"] = pt.peak_concurrence;
        }
        j["points"].push_back(std::move(q));
    }
    return j.dump(2) + "\n";
}

SweepResult sweep(const SweepSpec& spec, const std::string& out_dir, int jobs) {
    spec.validate();
    SweepResult result;
    result.spec = spec;
    result.points.resize(spec.values.size());

    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
    jobs = std::min<int>(jobs, static_cast<int>(spec.values.size()));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> hard_error{false};
    std::string error_text;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= spec.values.size() || hard_error.load()) break;
            SweepPoint& pt = result.points[i];
            pt.axis_value = spec.values[i];
            try {
                const ScenarioConfig cfg = with_axis_value(spec.base, spec.axis, spec.values[i]);
                const TimeSpan span{cfg.resolved_start(), cfg.resolved_end()};
                EvolveOptions opt;
                opt.dt = cfg.dt;
                opt.sample_interval = cfg.sample_interval;
                const Trajectory t = evolve(cfg.params, cfg.train, span, opt, Route::Full);
                pt.saturation_p = t.saturation_p();
                pt.saturation_eta = t.saturation_eta();
                pt.peak_concurrence = t.peak_concurrence();
                switch (spec.reduce) {
                    case SweepSpec::Reduce::SaturationP: pt.reduced = pt.saturation_p; break;
                    case SweepSpec::Reduce::SaturationEta: pt.reduced = pt.saturation_eta; break;
                    case SweepSpec::Reduce::PeakC: pt.reduced = pt.peak_concurrence; break;
                }
                pt.ok = true;
            } catch (const IntegrationFailed&) {
                pt.ok = false;  // recorded as missing
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error_text = e.what();
                hard_error.store(true);
                break;
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (hard_error.load()) throw ConfigError("sweep: " + error_text);

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::string stem = (std::filesystem::path(out_dir) / (spec.base.name + "_sweep")).string();
        result.csv_path = stem + ".csv";
        result.json_path = stem + ".json";
        write_file(result.csv_path, sweep_csv(result));
        write_file(result.json_path, sweep_sidecar_json(result));
    }
    return result;
}

}  // namespace dimer

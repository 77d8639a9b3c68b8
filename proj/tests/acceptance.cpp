// acceptance.cpp — end-to-end acceptance battery. Each numbered criterion
// prints exactly one [PASS]/[FAIL] line; the exit code is the number of
// failures. Trajectories are shared between criteria through a cache and the
// wall time of each timed criterion covers the runs it was first to demand.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dimer/eig4.hpp"
#include "dimer/master_equation.hpp"
#include "dimer/scenarios.hpp"

using dimer::cplx;
using dimer::DimerParams;
using dimer::Mat4;
using dimer::Route;
using dimer::ScenarioConfig;
using dimer::Trajectory;

namespace {

struct Criterion {
    int number;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;  // 0 = no stated limit
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

// ---- shared trajectory cache -------------------------------------------------

std::map<std::string, Trajectory> g_cache;

const Trajectory& cached(const std::string& key) { return g_cache.at(key); }

void run_jobs(std::vector<std::pair<std::string, std::function<Trajectory()>>> jobs) {
    std::atomic<std::size_t> next{0};
    std::vector<std::pair<std::string, Trajectory>> results(jobs.size());
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) break;
            results[i] = {jobs[i].first, jobs[i].second()};
        }
    };
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    n = std::min<unsigned>(n, static_cast<unsigned>(jobs.size()));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& [key, traj] : results) g_cache[key] = std::move(traj);
}

Trajectory run_config(const ScenarioConfig& cfg, Route route) {
    dimer::EvolveOptions opt;
    opt.dt = cfg.dt;
    opt.sample_interval = cfg.sample_interval;
    return dimer::evolve(cfg.params, cfg.train, dimer::TimeSpan{cfg.resolved_start(), cfg.resolved_end()}, opt,
                         route);
}

// fig1 member lookup by the tau_p multiple of 1/J
ScenarioConfig fig1_member(double x) {
    const dimer::Preset p = dimer::preset("fig1");
    for (const auto& c : p.runs)
        if (std::abs(c.train.segments[0].tau_p - x / c.params.J) < 1e-12) return c;
    std::abort();
}

Mat4 basis_state(int idx) {
    Mat4 r;
    r(idx, idx) = 1.0;
    return r;
}

Mat4 gibbs_state(const Mat4& h, double temperature) {
    const auto e = dimer::kern::jacobi_hermitian(h);
    Mat4 g;
    double z = 0.0;
    for (int k = 0; k < 4; ++k) z += std::exp(-e.w[static_cast<std::size_t>(k)] / temperature);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < 4; ++k)
                acc += std::exp(-e.w[static_cast<std::size_t>(k)] / temperature) * e.v(i, k) * std::conj(e.v(j, k));
            g(i, j) = acc / z;
        }
    return g;
}

Mat4 random_density(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Mat4 g;
    for (auto& zz : g.m) zz = cplx(n(rng), n(rng));
    Mat4 rho = dimer::kern::matmul(g, dimer::kern::adjoint(g));
    const double tr = dimer::kern::trace(rho).real();
    for (auto& zz : rho.m) zz /= tr;
    return rho;
}

std::array<cplx, 4> random_u2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    const double theta = 0.5 * u(rng);
    const double a = u(rng), b = u(rng), g = u(rng);
    const cplx ea = std::polar(1.0, a), eb = std::polar(1.0, b), eg = std::polar(1.0, g);
    return {eg * ea * std::cos(theta), eg * eb * std::sin(theta), -eg * std::conj(eb) * std::sin(theta),
            eg * std::conj(ea) * std::cos(theta)};
}

Mat4 kron2(const std::array<cplx, 4>& a, const std::array<cplx, 4>& b) {
    Mat4 m;
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int j1 = 0; j1 < 2; ++j1)
                for (int j2 = 0; j2 < 2; ++j2)
                    m(i1 * 2 + i2, j1 * 2 + j2) =
                        a[static_cast<std::size_t>(i1 * 2 + j1)] * b[static_cast<std::size_t>(i2 * 2 + j2)];
    return m;
}

// maximum drop from a running maximum inside [t0, t1]
double max_drawdown(const Trajectory& t, double t0, double t1) {
    double peak = -1.0, drop = 0.0;
    for (const auto& s : t.samples) {
        if (s.t < t0 || s.t > t1) continue;
        peak = std::max(peak, s.p_acceptor);
        if (peak >= 0.0) drop = std::max(drop, peak - s.p_acceptor);
    }
    return drop;
}

double max_p_in(const Trajectory& t, double t0, double t1) {
    double mx = -1.0;
    for (const auto& s : t.samples)
        if (s.t >= t0 && s.t <= t1) mx = std::max(mx, s.p_acceptor);
    return mx;
}

double p_at(const Trajectory& t, double when) {
    double best = 1e300, val = 0.0;
    for (const auto& s : t.samples)
        if (std::abs(s.t - when) < best) {
            best = std::abs(s.t - when);
            val = s.p_acceptor;
        }
    return val;
}

// ---- criteria ------------------------------------------------------------------

Criterion criterion_1() {
    Criterion c{1, "eigen-oracle: closed forms vs numeric diagonalization", false, "", 0.0, 1.0};
    const double t0 = now_seconds();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        DimerParams p;
        p.omega1 = u(rng);
        p.omega2 = u(rng);
        p.J = u(rng);
        const cplx e(u(rng), rep % 2 ? u(rng) : 0.0);
        auto wc = dimer::closed_form_eigenvalues(p, e);
        auto wn = dimer::eigensystem(dimer::full_hamiltonian(p, e)).eps;
        std::sort(wc.begin(), wc.end());
        std::sort(wn.begin(), wn.end());
        for (int i = 0; i < 4; ++i)
            worst = std::max(worst, std::abs(wc[static_cast<std::size_t>(i)] - wn[static_cast<std::size_t>(i)]));
    }
    DimerParams fig;
    fig.J = 1.5;
    auto w = dimer::closed_form_eigenvalues(fig, 0.0);
    const bool exact = std::abs(w[0] + 1.5) < 1e-12 && std::abs(w[1] - 1.5) < 1e-12 &&
                       std::abs(w[2] - 1.0) < 1e-12 && std::abs(w[3] + 1.0) < 1e-12;
    c.seconds = now_seconds() - t0;
    c.pass = worst < 1e-9 && exact;
    c.detail = "worst |closed-numeric| = " + fmt(worst) + " over 1000 draws; fig spectrum exact to 1e-12";
    return c;
}

Criterion criterion_2() {
    Criterion c{2, "closed-system Rabi oracle", false, "", 0.0, 5.0};
    const double t0 = now_seconds();
    DimerParams p;
    p.J = 1.5;
    p.kappa1 = p.kappa2 = 0.0;
    const Mat4 rho0 = basis_state(dimer::kEG);
    dimer::EvolveOptions opt;
    opt.dt = 1e-3;
    opt.sample_interval = 0.05;
    const Trajectory t = dimer::evolve(p, dimer::PulseTrain{}, dimer::TimeSpan{0.0, 20.0 / p.J}, opt,
                                       Route::Full, &rho0);
    double worst = 0.0;
    for (const auto& s : t.samples)
        worst = std::max(worst, std::abs(s.p_acceptor - std::pow(std::sin(p.J * s.t), 2)));
    c.seconds = now_seconds() - t0;
    c.pass = worst < 1e-6;
    c.detail = "max |P - sin^2(Jt)| = " + fmt(worst);
    return c;
}

Criterion criterion_3() {
    Criterion c{3, "thermalization to the Gibbs state + detailed balance", false, "", 0.0, 10.0};
    const double t0 = now_seconds();
    // J = 2 so the excitation-number-frozen sectors carry negligible weight
    DimerParams p;
    p.J = 2.0;
    const Mat4 rho0 = basis_state(dimer::kEG);
    dimer::EvolveOptions opt;
    opt.dt = 1e-3;
    opt.sample_interval = 0.5;
    const Trajectory t = dimer::evolve(p, dimer::PulseTrain{}, dimer::TimeSpan{0.0, 50.0 / 0.1}, opt,
                                       Route::Full, &rho0);
    const Mat4 gibbs = gibbs_state(dimer::bare_hamiltonian(p), p.T1);
    const double dev = dimer::kern::max_abs_diff(t.final_rho_bare, gibbs);

    // detailed balance on a frame with every channel open
    const auto frame = dimer::eigensystem(dimer::full_hamiltonian(p, 0.5));
    const dimer::LindbladRates r = dimer::rates(frame, p);
    double worst_ratio = 0.0;
    for (int m = 0; m < 6; ++m) {
        if (r.xi[static_cast<std::size_t>(m + 6)] < 1e-300) continue;
        const double ratio = r.xi[static_cast<std::size_t>(m)] / r.xi[static_cast<std::size_t>(m + 6)];
        const double boltz = std::exp(r.gap_of_m[static_cast<std::size_t>(m)] / p.T1);
        worst_ratio = std::max(worst_ratio, std::abs(ratio / boltz - 1.0));
    }
    c.seconds = now_seconds() - t0;
    c.pass = dev < 1e-3 && worst_ratio < 1e-10;
    c.detail = "max |rho - gibbs| = " + fmt(dev) + "; worst balance-ratio rel err = " + fmt(worst_ratio);
    return c;
}

Criterion criterion_5_prepare_and_check() {
    Criterion c{5, "fig1 family: saturation and the sharp-pulse extremes", false, "", 0.0, 60.0};
    const double t0 = now_seconds();
    std::vector<std::pair<std::string, std::function<Trajectory()>>> jobs;
    for (double x : {0.01, 0.1, 0.5, 1.0, 10.0}) {
        const ScenarioConfig cfg = fig1_member(x);
        jobs.emplace_back("fig1:" + fmt(x), [cfg] { return run_config(cfg, Route::Full); });
    }
    run_jobs(std::move(jobs));
    c.seconds = now_seconds() - t0;

    bool saturated = true;
    double max_slope = 0.0;
    std::vector<double> sat_p, sat_eta;
    for (double x : {0.01, 0.1, 0.5, 1.0, 10.0}) {
        const Trajectory& t = cached("fig1:" + fmt(x));
        max_slope = std::max({max_slope, std::abs(t.final_slope_p()), std::abs(t.final_slope_eta())});
        saturated = saturated && std::abs(t.final_slope_p()) < 1e-4 && std::abs(t.final_slope_eta()) < 1e-4;
        sat_p.push_back(t.saturation_p());
        sat_eta.push_back(t.saturation_eta());
    }
    const bool sharp_max_p = sat_p[0] >= *std::max_element(sat_p.begin(), sat_p.end()) - 1e-12;
    const bool sharp_min_eta = sat_eta[0] <= *std::min_element(sat_eta.begin(), sat_eta.end()) + 1e-12;
    c.pass = saturated && sharp_max_p && sharp_min_eta;
    c.detail = "max final slope = " + fmt(max_slope) + "; satP(0.01/J) = " + fmt(sat_p[0]) +
               " (family max), satEta(0.01/J) = " + fmt(sat_eta[0]) + " (family min)";
    return c;
}

Criterion criterion_4() {
    Criterion c{4, "CPTP sanity on every figure preset", false, "", 0.0, 0.0};
    const double t0 = now_seconds();
    // fig1/fig3 members are already cached; add the multi-pulse presets
    std::vector<std::pair<std::string, std::function<Trajectory()>>> jobs;
    for (const char* name : {"fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b"}) {
        const ScenarioConfig cfg = dimer::preset(name).runs.at(0);
        jobs.emplace_back(name, [cfg] { return run_config(cfg, Route::Full); });
    }
    run_jobs(std::move(jobs));
    c.seconds = now_seconds() - t0;

    double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
    for (const auto& [key, t] : g_cache) {
        worst_trace = std::max(worst_trace, t.max_trace_err());
        worst_herm = std::max(worst_herm, t.max_herm_err());
        worst_eig = std::min(worst_eig, t.min_eigenvalue());
    }
    c.pass = worst_trace < 1e-9 && worst_herm < 1e-9 && worst_eig > -1e-6;
    c.detail = "max trace err = " + fmt(worst_trace) + ", max herm err = " + fmt(worst_herm) +
               ", min eigenvalue = " + fmt(worst_eig) + " across " + std::to_string(g_cache.size()) +
               " preset trajectories";
    return c;
}

Criterion criterion_6() {
    Criterion c{6, "fig2 sweep: monotone saturation P, interior eta maximum", false, "", 0.0, 300.0};
    const double t0 = now_seconds();
    const dimer::Preset p = dimer::preset("fig2");
    bool ok = true;
    std::string note;
    for (const auto& spec : p.sweeps) {
        const dimer::SweepResult s = dimer::sweep(spec, "", 0);
        std::vector<double> sp, se;
        for (const auto& pt : s.points) {
            if (!pt.ok) {
                ok = false;
                note += spec.base.name + ": failed point; ";
                continue;
            }
            sp.push_back(pt.saturation_p);
            se.push_back(pt.saturation_eta);
        }
        bool monotone = true;
        for (std::size_t i = 1; i < sp.size(); ++i) monotone = monotone && sp[i] <= sp[i - 1] + 1e-3;
        const double inner = *std::max_element(se.begin() + 1, se.end() - 1);
        const bool interior = inner > se.front() && inner > se.back();
        ok = ok && monotone && interior;
        note += spec.base.name + (monotone ? ": P monotone" : ": P NOT monotone") +
                (interior ? ", eta interior max; " : ", eta max NOT interior; ");
    }
    c.seconds = now_seconds() - t0;
    c.pass = ok;
    c.detail = note;
    return c;
}

Criterion criterion_7() {
    Criterion c{7, "fig3: sharper pulse, larger peak concurrence", false, "", 0.0, 0.0};
    const double peak_sharp = cached("fig1:0.01").peak_concurrence();
    const double peak_wide = cached("fig1:10").peak_concurrence();
    c.pass = peak_sharp > peak_wide;
    c.detail = "peak C = " + fmt(peak_sharp) + " (tau_p = 0.01/J) vs " + fmt(peak_wide) + " (tau_p = 10/J)";
    return c;
}

Criterion criterion_8() {
    Criterion c{8, "fig4/fig5 second-pulse dichotomy", false, "", 0.0, 0.0};
    bool ok = true;
    std::string note;
    const double J = 1.5;
    for (const char* name : {"fig4a", "fig4b"}) {
        const Trajectory& t = cached(name);
        const double tau = (std::string(name) == "fig4a" ? 0.01 : 0.1) / J;
        const double pre_max = max_p_in(t, 5.0 * tau, 15.0 - 5.0 * tau);
        const double dip = max_drawdown(t, 15.0, 23.0);
        const bool good = pre_max > 0.5 && dip >= 0.05;
        ok = ok && good;
        note += std::string(name) + ": maxP_pre = " + fmt(pre_max) + " (>0.5), post-pulse dip = " + fmt(dip) + "; ";
    }
    for (const char* name : {"fig5a", "fig5b"}) {
        const Trajectory& t = cached(name);
        const double tau = (std::string(name) == "fig5a" ? 0.5 : 1.0) / J;
        const double pre_max = max_p_in(t, 5.0 * tau, 15.0 - 5.0 * tau);
        const double pre_val = p_at(t, 15.0 - 5.0 * tau);
        const double after = t.saturation_p();
        const bool good = pre_max < 0.5 && after >= pre_val + 0.05;
        ok = ok && good;
        note += std::string(name) + ": maxP_pre = " + fmt(pre_max) + " (<0.5), satP after = " + fmt(after) +
                " vs " + fmt(pre_val) + " before; ";
    }
    c.pass = ok;
    c.detail = note;
    return c;
}

Criterion criterion_9() {
    Criterion c{9, "fig6b/7b: capped P, enhanced concurrence under the train", false, "", 0.0, 0.0};
    const Trajectory& t = cached("fig6b");
    double max_p = 0.0;
    for (const auto& s : t.samples) max_p = std::max(max_p, s.p_acceptor);
    const double peak_train = t.peak_concurrence();
    const double peak_single = cached("fig1:10").peak_concurrence();
    c.pass = max_p <= 0.5 + 1e-3 && peak_train > peak_single;
    c.detail = "max P = " + fmt(max_p) + " (<= 0.5+1e-3); peak C = " + fmt(peak_train) +
               " vs single-pulse " + fmt(peak_single);
    return c;
}

Criterion criterion_10() {
    Criterion c{10, "route cross-check: full vs reduced", false, "", 0.0, 0.0};
    // undriven thermalization populations must agree to 1e-6
    DimerParams p;
    p.J = 2.0;
    const Mat4 rho0 = basis_state(dimer::kEG);
    dimer::EvolveOptions opt;
    opt.dt = 1e-3;
    opt.sample_interval = 0.5;
    const dimer::TimeSpan span{0.0, 100.0};
    const Trajectory full = dimer::evolve(p, dimer::PulseTrain{}, span, opt, Route::Full, &rho0);
    const Trajectory red = dimer::evolve(p, dimer::PulseTrain{}, span, opt, Route::Reduced, &rho0);
    double worst = 0.0;
    for (std::size_t i = 0; i < full.samples.size(); ++i)
        for (int k = 0; k < 4; ++k)
            worst = std::max(worst, std::abs(full.samples[i].eig_pops[static_cast<std::size_t>(k)] -
                                             red.samples[i].eig_pops[static_cast<std::size_t>(k)]));

    // driven fig1 presets: measure and report the saturated-P gap
    std::vector<std::pair<std::string, std::function<Trajectory()>>> jobs;
    for (double x : {0.01, 10.0}) {
        const ScenarioConfig cfg = fig1_member(x);
        jobs.emplace_back("fig1red:" + fmt(x), [cfg] { return run_config(cfg, Route::Reduced); });
    }
    run_jobs(std::move(jobs));
    std::string gaps;
    double max_gap = 0.0;
    for (double x : {0.01, 10.0}) {
        const double g = std::abs(cached("fig1:" + fmt(x)).saturation_p() -
                                  cached("fig1red:" + fmt(x)).saturation_p());
        max_gap = std::max(max_gap, g);
        gaps += "tau_p=" + fmt(x) + "/J: " + fmt(g) + " ";
    }
    c.pass = worst < 1e-6;
    c.detail = "undriven pop gap = " + fmt(worst) + "; driven saturated-P gaps (" + gaps +
               (max_gap > 0.02 ? ") exceed 0.02 as documented in docs/notes.md" : ") within 0.02");
    return c;
}

Criterion criterion_11() {
    Criterion c{11, "concurrence battery: pinned states + local-unitary invariance", false, "", 0.0, 0.0};
    const double s = 1.0 / std::sqrt(2.0);
    auto pure = [](const std::array<cplx, 4>& amp) {
        Mat4 rho;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                rho(i, j) = amp[static_cast<std::size_t>(i)] * std::conj(amp[static_cast<std::size_t>(j)]);
        return rho;
    };
    const double c_bell = dimer::concurrence(pure({0.0, s, s, 0.0}));
    Mat4 gg;
    gg(dimer::kGG, dimer::kGG) = 1.0;
    const double c_prod = dimer::concurrence(gg);
    const Mat4 phi = pure({s, 0.0, 0.0, s});
    Mat4 werner;
    for (int i = 0; i < 16; ++i) werner.m[static_cast<std::size_t>(i)] = 0.5 * phi.m[static_cast<std::size_t>(i)];
    for (int i = 0; i < 4; ++i) werner(i, i) += 0.125;
    const double c_werner = dimer::concurrence(werner);

    std::mt19937_64 rng(111);
    double worst = 0.0;
    for (int rep = 0; rep < 10'000; ++rep) {
        const Mat4 rho = random_density(rng);
        const Mat4 local = kron2(random_u2(rng), random_u2(rng));
        const Mat4 rot = dimer::kern::matmul(local, dimer::kern::matmul(rho, dimer::kern::adjoint(local)));
        worst = std::max(worst, std::abs(dimer::concurrence(rho) - dimer::concurrence(rot)));
    }
    c.pass = std::abs(c_bell - 1.0) < 1e-10 && std::abs(c_prod) < 1e-10 && std::abs(c_werner - 0.25) < 1e-10 &&
             worst < 1e-9;
    c.detail = "Bell = " + fmt(c_bell) + ", product = " + fmt(c_prod) + ", Werner(1/2) = " + fmt(c_werner) +
               "; worst local-unitary deviation = " + fmt(worst) + " over 1e4 states";
    return c;
}

}  // namespace

int main() {
    std::vector<Criterion> results;
    results.push_back(criterion_1());
    results.push_back(criterion_2());
    results.push_back(criterion_3());
    results.push_back(criterion_5_prepare_and_check());  // fills the fig1 cache
    results.push_back(criterion_4());                    // fills the remaining presets
    results.push_back(criterion_6());
    results.push_back(criterion_7());
    results.push_back(criterion_8());
    results.push_back(criterion_9());
    results.push_back(criterion_10());
    results.push_back(criterion_11());

    std::sort(results.begin(), results.end(), [](const Criterion& a, const Criterion& b) {
        return a.number < b.number;
    });

    int failures = 0;
    for (auto& c : results) {
        if (c.limit_seconds > 0.0 && c.seconds > c.limit_seconds) {
            c.pass = false;
            c.detail += " [over time budget: " + fmt(c.seconds) + "s > " + fmt(c.limit_seconds) + "s]";
        }
        std::printf("[%s] %2d. %s — %s (%.2fs)\n", c.pass ? "PASS" : "FAIL", c.number, c.name.c_str(),
                    c.detail.c_str(), c.seconds);
        failures += c.pass ? 0 : 1;
    }
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures;
}

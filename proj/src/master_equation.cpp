// master_equation.cpp

#include "dimer/master_equation.hpp"

#include <algorithm>
#include <cmath>

#include "dimer/eig4.hpp"
#include "dimer/errors.hpp"

namespace dimer {

namespace {

double bose_occupation(double gap, double temperature) {
    const double x = gap / temperature;
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

constexpr double kZeroGap = 1e-9;

}  // namespace

std::array<double, 4> LindbladRates::out_rates() const {
    std::array<double, 4> eta{};
    for (int m = 0; m < 6; ++m) {
        const auto [src, dst] = kJumpPairs[static_cast<std::size_t>(m)];
        eta[static_cast<std::size_t>(src - 1)] += xi[static_cast<std::size_t>(m)];      // downward leaves src
        eta[static_cast<std::size_t>(dst - 1)] += xi[static_cast<std::size_t>(m + 6)];  // upward leaves dst
    }
    return eta;
}

LindbladRates rates(const EigenFrame& frame, const DimerParams& p) {
    LindbladRates r;
    for (int m = 0; m < 6; ++m) {
        const auto [src, dst] = kJumpPairs[static_cast<std::size_t>(m)];
        const double gap = frame.gap(src, dst);
        r.gap_of_m[static_cast<std::size_t>(m)] = gap;
        if (gap < kZeroGap) continue;
        const double sp1 = std::norm(frame.s1(src - 1, dst - 1));
        const double sp2 = std::norm(frame.s2(src - 1, dst - 1));
        double down = 0.0, up = 0.0;
        const double n1 = bose_occupation(gap, p.T1);
        const double n2 = bose_occupation(gap, p.T2);
        down += p.kappa1 * sp1 * (n1 + 1.0) + p.kappa2 * sp2 * (n2 + 1.0);
        up += p.kappa1 * sp1 * n1 + p.kappa2 * sp2 * n2;
        r.xi[static_cast<std::size_t>(m)] = gap * down;
        r.xi[static_cast<std::size_t>(m + 6)] = gap * up;
    }
    return r;
}

Mat4 lindblad_apply(const LindbladRates& r, const Mat4& rho_eigen) {
    const std::array<double, 4> eta = r.out_rates();
    Mat4 out;
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
            out(k, l) = -(eta[static_cast<std::size_t>(k)] + eta[static_cast<std::size_t>(l)]) * rho_eigen(k, l);
    for (int m = 0; m < 6; ++m) {
        const auto [src, dst] = kJumpPairs[static_cast<std::size_t>(m)];
        const int s = src - 1, d = dst - 1;
        out(d, d) += 2.0 * r.xi[static_cast<std::size_t>(m)] * rho_eigen(s, s).real();
        out(s, s) += 2.0 * r.xi[static_cast<std::size_t>(m + 6)] * rho_eigen(d, d).real();
    }
    return out;
}

Mat4 lindblad_superoperator(const LindbladRates& r, const EigenFrame&, const DensityState& rho) {
    if (rho.basis != Basis::Eigen) throw BasisMismatch("lindblad_superoperator: state is not in the eigenbasis");
    return lindblad_apply(r, rho.rho);
}

// ---------------------------------------------------------------- full route

namespace {

// Derivative evaluation with a frame cache: the Hamiltonian depends on time
// only through E(t), so identical drive values (in particular the exact zeros
// far from every pulse) reuse the previous eigenframe. Frames are
// phase-aligned to their predecessor to keep the label frame continuous.
class FullDerivative {
public:
    FullDerivative(const DimerParams& p, const PulseTrain& train)
        : p_(p), train_(train), h_bare_(bare_hamiltonian(p)), dissipative_(p.kappa1 > 0.0 || p.kappa2 > 0.0) {}

    Mat4 operator()(double t, const Mat4& rho_bare) {
        const cplx e = train_.amplitude(t);
        const Mat4 h = kern::add(h_bare_, drive_hamiltonian(e));
        Mat4 d;
        kern::ops().minus_i_commutator(d, h, rho_bare);
        if (dissipative_) {
            const EigenFrame& f = frame_for(h, e);
            const Mat4 rho_e = kern::conj_similarity(f.u, rho_bare);
            const Mat4 l = lindblad_apply(rates(f, p_), rho_e);
            d = kern::add(d, kern::similarity(f.u, l));
        }
        return d;
    }

    const EigenFrame& frame_at(double t) {
        const cplx e = train_.amplitude(t);
        return frame_for(kern::add(h_bare_, drive_hamiltonian(e)), e);
    }

private:
    const EigenFrame& frame_for(const Mat4& h, cplx e) {
        if (!have_frame_ || e != cached_e_) {
            frame_ = eigensystem(h, have_frame_ ? &frame_ : nullptr);
            cached_e_ = e;
            have_frame_ = true;
        }
        return frame_;
    }

    DimerParams p_;
    PulseTrain train_;
    Mat4 h_bare_;
    bool dissipative_;
    bool have_frame_ = false;
    cplx cached_e_{};
    EigenFrame frame_{};
};

Mat4 rk4_step_full(FullDerivative& deriv, const Mat4& rho, double t, double h) {
    const Mat4 k1 = deriv(t, rho);
    Mat4 tmp;
    kern::ops().lincomb(tmp, rho, 0.5 * h, k1);
    const Mat4 k2 = deriv(t + 0.5 * h, tmp);
    kern::ops().lincomb(tmp, rho, 0.5 * h, k2);
    const Mat4 k3 = deriv(t + 0.5 * h, tmp);
    kern::ops().lincomb(tmp, rho, h, k3);
    const Mat4 k4 = deriv(t + h, tmp);
    Mat4 next = rho;
    kern::ops().rk4_update(next, k1, k2, k3, k4, h);
    // renormalize trace drift beyond 1e-12
    const double tr = kern::trace(next).real();
    if (std::abs(tr - 1.0) > 1e-12 && tr != 0.0) {
        const double inv = 1.0 / tr;
        for (auto& z : next.m) z *= inv;
    }
    return next;
}

}  // namespace

DensityState step_full(const DensityState& rho_bare, const DimerParams& p, const PulseTrain& train,
                       double t, double dt) {
    if (rho_bare.basis != Basis::Bare) throw BasisMismatch("step_full: state is not in the bare basis");
    FullDerivative deriv(p, train);
    DensityState out;
    out.rho = rk4_step_full(deriv, rho_bare.rho, t, dt);
    out.basis = Basis::Bare;
    out.time = t + dt;
    const double mineig = kern::min_eigenvalue(out.rho);
    if (mineig < -1e-6) throw StepRejected(mineig);
    return out;
}

// ------------------------------------------------------------- reduced route

double ReducedState::pop(int label) const {
    if (label == 1) return 1.0 - x[0] - x[1] - x[2];
    return x[static_cast<std::size_t>(label - 2)];
}

namespace {
// coherence slot for label pair (k,l), 1-based, k<l
constexpr int coh_slot(int k, int l) {
    if (k == 1) return l - 2;  // (1,2)->0 (1,3)->1 (1,4)->2
    if (k == 2) return l;      // (2,3)->3 (2,4)->4
    return 5;                  // (3,4)
}
static_assert(coh_slot(1, 2) == 0 && coh_slot(1, 3) == 1 && coh_slot(1, 4) == 2 && coh_slot(2, 3) == 3 &&
              coh_slot(2, 4) == 4 && coh_slot(3, 4) == 5);
}  // namespace

Mat4 ReducedState::to_matrix() const {
    Mat4 rho;
    for (int label = 1; label <= 4; ++label) rho(label - 1, label - 1) = pop(label);
    for (int k = 1; k <= 4; ++k) {
        for (int l = k + 1; l <= 4; ++l) {
            const cplx c = coh[static_cast<std::size_t>(coh_slot(k, l))];
            rho(k - 1, l - 1) = c;
            rho(l - 1, k - 1) = std::conj(c);
        }
    }
    return rho;
}

ReducedState ReducedState::from_matrix(const Mat4& rho_eigen, double t) {
    ReducedState s;
    s.time = t;
    s.x = {rho_eigen(1, 1).real(), rho_eigen(2, 2).real(), rho_eigen(3, 3).real()};
    for (int k = 1; k <= 4; ++k)
        for (int l = k + 1; l <= 4; ++l)
            s.coh[static_cast<std::size_t>(coh_slot(k, l))] = rho_eigen(k - 1, l - 1);
    return s;
}

ReducedSystem reduced_population_system(const LindbladRates& r) {
    const std::array<double, 4> eta = r.out_rates();
    const auto& xi = r.xi;
    ReducedSystem sys;
    // rows: balance equations for the stored populations (labels 2, 3, 4 with
    // label 1 eliminated). The (3,3) entry and the sign of r[2] are kept
    // verbatim from the source system; see docs/notes.md for the measured
    // cost of not symmetrizing them.
    sys.m = {{{2.0 * (xi[8] + eta[1]), 2.0 * (xi[8] - xi[6]), 2.0 * (xi[8] - xi[7])},
              {2.0 * (xi[10] - xi[0]), 2.0 * (xi[10] + eta[2]), 2.0 * (xi[10] - xi[9])},
              {2.0 * (xi[11] - xi[1]), 2.0 * (xi[11] - xi[3]), 2.0 * (xi[11] + eta[2])}}};
    sys.r = {2.0 * xi[8], 2.0 * xi[10], -2.0 * xi[11]};
    return sys;
}

namespace {

struct ReducedDeriv {
    std::array<double, 3> dx{};
    std::array<cplx, 6> dcoh{};
};

ReducedDeriv reduced_rhs(const ReducedState& s, const EigenFrame& frame, const LindbladRates& r) {
    const ReducedSystem sys = reduced_population_system(r);
    const std::array<double, 4> eta = r.out_rates();
    ReducedDeriv d;
    for (int i = 0; i < 3; ++i) {
        double acc = sys.r[static_cast<std::size_t>(i)];
        for (int j = 0; j < 3; ++j)
            acc -= sys.m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * s.x[static_cast<std::size_t>(j)];
        d.dx[static_cast<std::size_t>(i)] = acc;
    }
    for (int k = 1; k <= 4; ++k) {
        for (int l = k + 1; l <= 4; ++l) {
            const int slot = coh_slot(k, l);
            const cplx c = s.coh[static_cast<std::size_t>(slot)];
            const double decay = eta[static_cast<std::size_t>(k - 1)] + eta[static_cast<std::size_t>(l - 1)];
            const double eps_lk = frame.eps[static_cast<std::size_t>(l - 1)] - frame.eps[static_cast<std::size_t>(k - 1)];
            d.dcoh[static_cast<std::size_t>(slot)] = (cplx(-decay, eps_lk)) * c;
        }
    }
    return d;
}

ReducedState reduced_apply(const ReducedState& s, const ReducedDeriv& d, double w) {
    ReducedState out = s;
    for (int i = 0; i < 3; ++i) out.x[static_cast<std::size_t>(i)] += w * d.dx[static_cast<std::size_t>(i)];
    for (int i = 0; i < 6; ++i) out.coh[static_cast<std::size_t>(i)] += w * d.dcoh[static_cast<std::size_t>(i)];
    return out;
}

ReducedDeriv rk4_combine(const ReducedDeriv& k1, const ReducedDeriv& k2, const ReducedDeriv& k3,
                         const ReducedDeriv& k4) {
    ReducedDeriv d;
    for (int i = 0; i < 3; ++i)
        d.dx[static_cast<std::size_t>(i)] =
            k1.dx[static_cast<std::size_t>(i)] + 2.0 * k2.dx[static_cast<std::size_t>(i)] +
            2.0 * k3.dx[static_cast<std::size_t>(i)] + k4.dx[static_cast<std::size_t>(i)];
    for (int i = 0; i < 6; ++i)
        d.dcoh[static_cast<std::size_t>(i)] =
            k1.dcoh[static_cast<std::size_t>(i)] + 2.0 * k2.dcoh[static_cast<std::size_t>(i)] +
            2.0 * k3.dcoh[static_cast<std::size_t>(i)] + k4.dcoh[static_cast<std::size_t>(i)];
    return d;
}

}  // namespace

ReducedState step_reduced(const ReducedState& s, const EigenFrame& frame, const LindbladRates& r, double dt) {
    const ReducedDeriv k1 = reduced_rhs(s, frame, r);
    const ReducedDeriv k2 = reduced_rhs(reduced_apply(s, k1, 0.5 * dt), frame, r);
    const ReducedDeriv k3 = reduced_rhs(reduced_apply(s, k2, 0.5 * dt), frame, r);
    const ReducedDeriv k4 = reduced_rhs(reduced_apply(s, k3, dt), frame, r);
    ReducedState out = reduced_apply(s, rk4_combine(k1, k2, k3, k4), dt / 6.0);
    out.time = s.time + dt;
    return out;
}

// ------------------------------------------------------------------- driver

namespace {

double pulse_step_cap(const PulseTrain& train, double t, double h) {
    for (const auto& s : train.segments) {
        const double lo = s.t_center - 5.0 * s.tau_p;
        const double hi = s.t_center + 5.0 * s.tau_p;
        if (t >= lo && t <= hi) {
            h = std::min(h, s.tau_p / 10.0);
        } else if (t < lo && t + h > lo + 1e-15) {
            h = std::min(h, lo - t);  // land on the window edge, never jump a pulse
        }
    }
    return h;
}

ObservableSample make_sample(double t, const Mat4& rho_bare, const Mat4& rho_eigen, double energy,
                             const DimerParams& p) {
    ObservableSample s;
    s.t = t;
    s.pulse_energy = energy;
    s.pops = {rho_bare(0, 0).real(), rho_bare(1, 1).real(), rho_bare(2, 2).real(), rho_bare(3, 3).real()};
    s.eig_pops = {rho_eigen(0, 0).real(), rho_eigen(1, 1).real(), rho_eigen(2, 2).real(), rho_eigen(3, 3).real()};
    s.p_acceptor = s.pops[0] + s.pops[2];
    s.eta_total = total_efficiency(s.p_acceptor, p, energy);
    s.concurrence = concurrence(rho_bare);
    s.trace_err = std::abs(kern::trace(rho_bare).real() - 1.0) +
                  std::abs(kern::trace(rho_bare).imag());
    s.herm_err = kern::hermiticity_residual(rho_bare);
    s.min_eig = kern::min_eigenvalue(rho_bare);
    return s;
}

}  // namespace

Trajectory evolve(const DimerParams& p, const PulseTrain& train, TimeSpan span, const EvolveOptions& opt,
                  Route route, const Mat4* rho0_bare, Trajectory* partial_out) {
    p.validate();
    train.validate();
    if (!(opt.dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
    if (!(opt.sample_interval >= opt.dt)) throw std::invalid_argument("evolve: sample_interval must be >= dt");

    Trajectory traj;
    traj.route = route;

    Mat4 rho0;
    if (rho0_bare != nullptr) {
        rho0 = *rho0_bare;
    } else {
        rho0(kGG, kGG) = 1.0;  // both pigments in their ground states
    }

    FullDerivative deriv(p, train);
    const double t0 = span.start;
    const double t1 = span.end;

    // reduced-route state lives in the label frame; full-route state in bare
    Mat4 rho_bare = rho0;
    ReducedState red;
    if (route == Route::Reduced) {
        const EigenFrame& f0 = deriv.frame_at(t0);
        red = ReducedState::from_matrix(kern::conj_similarity(f0.u, rho0), t0);
    }

    double energy = 0.0;
    double i_prev = train.intensity(t0);

    auto emit = [&](double t) {
        Mat4 rb, re;
        if (route == Route::Full) {
            rb = rho_bare;
            const EigenFrame& f = deriv.frame_at(t);
            re = kern::conj_similarity(f.u, rb);
        } else {
            re = red.to_matrix();
            const EigenFrame& f = deriv.frame_at(t);
            rb = kern::similarity(f.u, re);
        }
        traj.samples.push_back(make_sample(t, rb, re, energy, p));
        traj.final_rho_bare = rb;
    };

    emit(t0);
    if (!(t1 > t0)) return traj;  // zero-length span: single sample

    const auto n_samples = static_cast<long>(std::ceil((t1 - t0) / opt.sample_interval - 1e-9));
    double t = t0;
    try {
        for (long k = 1; k <= n_samples; ++k) {
            const double t_target = std::min(t0 + static_cast<double>(k) * opt.sample_interval, t1);
            while (t < t_target - 1e-12) {
                double h = std::min(opt.dt, t_target - t);
                h = pulse_step_cap(train, t, h);
                if (route == Route::Full) {
                    int halvings = 0;
                    for (;;) {
                        const Mat4 next = rk4_step_full(deriv, rho_bare, t, h);
                        const double g = kern::gershgorin_lower_bound(next);
                        const double mineig = (g >= opt.positivity_floor) ? g : kern::min_eigenvalue(next);
                        if (mineig >= opt.positivity_floor) {
                            rho_bare = next;
                            break;
                        }
                        if (++halvings > opt.max_halvings)
                            throw IntegrationFailed("positivity lost after max step halvings", t);
                        h *= 0.5;
                    }
                } else {
                    // one RK4 step with the frame and rates refreshed per stage
                    const EigenFrame f1 = deriv.frame_at(t);
                    const LindbladRates r1 = rates(f1, p);
                    const ReducedDeriv k1 = reduced_rhs(red, f1, r1);
                    const EigenFrame f2 = deriv.frame_at(t + 0.5 * h);
                    const LindbladRates r2 = rates(f2, p);
                    const ReducedDeriv k2 = reduced_rhs(reduced_apply(red, k1, 0.5 * h), f2, r2);
                    const ReducedDeriv k3 = reduced_rhs(reduced_apply(red, k2, 0.5 * h), f2, r2);
                    const EigenFrame f4 = deriv.frame_at(t + h);
                    const LindbladRates r4 = rates(f4, p);
                    const ReducedDeriv k4 = reduced_rhs(reduced_apply(red, k3, h), f4, r4);
                    red = reduced_apply(red, rk4_combine(k1, k2, k3, k4), h / 6.0);
                }
                const double t_new = (t_target - t - h < 1e-12) ? t_target : t + h;
                const double i_new = train.intensity(t_new);
                energy += 0.5 * (i_prev + i_new) * (t_new - t);
                i_prev = i_new;
                t = t_new;
            }
            t = t_target;
            red.time = t;
            emit(t);
        }
    } catch (const IntegrationFailed&) {
        if (partial_out != nullptr) *partial_out = traj;
        throw;
    }
    return traj;
}

// ------------------------------------------------------------------ summaries

namespace {

std::size_t tail_start(std::size_t n) { return n - std::max<std::size_t>(1, n / 10); }

double tail_mean(const std::vector<ObservableSample>& s, double ObservableSample::* field) {
    if (s.empty()) return 0.0;
    double acc = 0.0;
    const std::size_t k0 = tail_start(s.size());
    for (std::size_t i = k0; i < s.size(); ++i) acc += s[i].*field;
    return acc / static_cast<double>(s.size() - k0);
}

double tail_slope(const std::vector<ObservableSample>& s, double ObservableSample::* field) {
    if (s.size() < 3) return 0.0;
    const std::size_t k0 = tail_start(s.size());
    const std::size_t n = s.size() - k0;
    if (n < 2) return 0.0;
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = k0; i < s.size(); ++i) {
        st += s[i].t;
        sy += s[i].*field;
        stt += s[i].t * s[i].t;
        sty += s[i].t * (s[i].*field);
    }
    const double dn = static_cast<double>(n);
    const double denom = dn * stt - st * st;
    if (denom == 0.0) return 0.0;
    return (dn * sty - st * sy) / denom;
}

}  // namespace

double Trajectory::saturation_p() const { return tail_mean(samples, &ObservableSample::p_acceptor); }
double Trajectory::saturation_eta() const { return tail_mean(samples, &ObservableSample::eta_total); }

double Trajectory::peak_concurrence() const {
    double mx = 0.0;
    for (const auto& s : samples) mx = std::max(mx, s.concurrence);
    return mx;
}

double Trajectory::peak_concurrence_time() const {
    double mx = -1.0, t = 0.0;
    for (const auto& s : samples)
        if (s.concurrence > mx) {
            mx = s.concurrence;
            t = s.t;
        }
    return t;
}

double Trajectory::final_slope_p() const { return tail_slope(samples, &ObservableSample::p_acceptor); }
double Trajectory::final_slope_eta() const { return tail_slope(samples, &ObservableSample::eta_total); }

double Trajectory::max_trace_err() const {
    double mx = 0.0;
    for (const auto& s : samples) mx = std::max(mx, s.trace_err);
    return mx;
}

double Trajectory::max_herm_err() const {
    double mx = 0.0;
    for (const auto& s : samples) mx = std::max(mx, s.herm_err);
    return mx;
}

double Trajectory::min_eigenvalue() const {
    double mn = 1.0;
    for (const auto& s : samples) mn = std::min(mn, s.min_eig);
    return mn;
}

}  // namespace dimer

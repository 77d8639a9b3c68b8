// master_equation.hpp — dissipator rates and jump structure in the
// instantaneous eigenbasis, plus the two integration routes:
//   Full    — RK4 on d rho/dt = -i[H(t), rho] + L rho, state carried in the
//             bare basis, dissipator rebuilt from the instantaneous frame at
//             every stage. Production path.
//   Reduced — RK4 on the label-frame population/coherence system (the
//             3-population balance matrix M, source R and exponential
//             coherence decay), kept verbatim as a cross-check of the full
//             route. It models thermalization only; see docs/notes.md.

#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "dimer/hamiltonian.hpp"
#include "dimer/observables.hpp"
#include "dimer/pulse.hpp"

namespace dimer {

// Jump m (1..6) is the downward transition src -> dst between labels;
// pi_m = |dst><src|, pi_{m+6} = pi_m† (upward). Rate xi_m uses the gap of its
// own jump: eps_src - eps_dst.
inline constexpr std::array<std::pair<int, int>, 6> kJumpPairs = {{
    {2, 3}, {2, 4}, {2, 1}, {3, 4}, {3, 1}, {4, 1},
}};

struct LindbladRates {
    std::array<double, 12> xi{};       // xi[m-1], m = 1..12
    std::array<double, 6> gap_of_m{};  // the level gap each m (and m+6) refers to

    // eta_k: total rate leaving label k (1-based), i.e. the sum of xi_mu over
    // jumps annihilating |eps_k>.
    std::array<double, 4> out_rates() const;
};

// Rates per the flat-Ohmic thermal form: for each jump with gap d,
//   xi_m    = d * sum_l kappa_l |s^(l)_{ij}|^2 (N_l(d) + 1)
//   xi_m+6  = d * sum_l kappa_l |s^(l)_{ij}|^2  N_l(d)
// with N_l the Bose occupation at bath temperature T_l. Gaps below 1e-9 get
// rate 0 (the would-be secular dephasing channel is dropped).
LindbladRates rates(const EigenFrame& frame, const DimerParams& p);

// L rho for an eigenbasis density matrix:
//   L rho = -sum_mu xi_mu ({pi_mu† pi_mu, rho} - 2 pi_mu rho pi_mu†)
// Trace-free and Hermiticity-preserving.
Mat4 lindblad_apply(const LindbladRates& r, const Mat4& rho_eigen);

// DensityState wrapper enforcing the eigenbasis tag.
Mat4 lindblad_superoperator(const LindbladRates& r, const EigenFrame& frame, const DensityState& rho);

enum class Route { Full, Reduced };

struct ObservableSample {
    double t = 0.0;
    double p_acceptor = 0.0;
    double eta_total = 0.0;
    double concurrence = 0.0;
    std::array<double, 4> pops{};      // bare populations: ee, eg, ge, gg
    std::array<double, 4> eig_pops{};  // eigenbasis populations: eps1..eps4
    double pulse_energy = 0.0;         // integral of |E|^2 up to t
    double trace_err = 0.0;            // |tr rho - 1|
    double herm_err = 0.0;             // max |rho - rho†|
    double min_eig = 0.0;              // smallest eigenvalue of rho
};

struct Trajectory {
    Route route = Route::Full;
    std::vector<ObservableSample> samples;
    Mat4 final_rho_bare{};  // bare-basis state at the last sample

    // plateau scalars: mean over the final 10% of samples
    double saturation_p() const;
    double saturation_eta() const;
    double peak_concurrence() const;
    double peak_concurrence_time() const;
    // least-squares slope over the final 10% of samples
    double final_slope_p() const;
    double final_slope_eta() const;
    double max_trace_err() const;
    double max_herm_err() const;
    double min_eigenvalue() const;
};

struct TimeSpan {
    double start = 0.0;
    double end = 0.0;
};

struct EvolveOptions {
    double dt = 1e-3;
    double sample_interval = 0.05;
    int max_halvings = 20;
    double positivity_floor = -1e-6;
};

// One RK4 step of the full master equation from a bare-basis state; the
// frame (hence rates and jumps) is re-evaluated at every stage time.
// Throws StepRejected when the result dips below the positivity floor.
DensityState step_full(const DensityState& rho_bare, const DimerParams& p, const PulseTrain& train,
                       double t, double dt);

// Label-frame reduced state: three stored populations (labels 2, 3, 4; the
// label-1 population follows from unit trace) and the six independent
// coherences rho_kl for label pairs (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).
struct ReducedState {
    std::array<double, 3> x{};
    std::array<std::complex<double>, 6> coh{};
    double time = 0.0;

    double pop(int label) const;  // 1..4
    Mat4 to_matrix() const;
    static ReducedState from_matrix(const Mat4& rho_eigen, double t);
};

// One RK4 step of the reduced system with frozen frame/rates (as used by the
// driver, which refreshes them per stage via the functional form below).
ReducedState step_reduced(const ReducedState& s, const EigenFrame& frame, const LindbladRates& r, double dt);

// The verbatim reduced population system dX/dt = -M X + R (3x3 M, source R).
struct ReducedSystem {
    std::array<std::array<double, 3>, 3> m{};
    std::array<double, 3> r{};
};
ReducedSystem reduced_population_system(const LindbladRates& r);

// Integrate from rho(t0) = |gg><gg| (or rho0 when given, bare basis),
// sampling observables every sample_interval. Throws IntegrationFailed when
// step halving is exhausted; the samples collected so far are stored in
// *partial_out when given, so callers can flush marked partial output.
Trajectory evolve(const DimerParams& p, const PulseTrain& train, TimeSpan span, const EvolveOptions& opt,
                  Route route, const Mat4* rho0_bare = nullptr, Trajectory* partial_out = nullptr);

}  // namespace dimer

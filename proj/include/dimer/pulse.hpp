// pulse.hpp — Gaussian pulse trains: instantaneous complex drive amplitude
// and the cumulative |E|^2 integral that normalizes the efficiency.

#pragma once

#include <complex>
#include <vector>

namespace dimer {

struct GaussianSegment {
    double e0 = 1.0;      // area amplitude: integral of the envelope over all time
    double tau_p = 1.0;   // Gaussian width parameter (appears literally in the envelope)
    double t_center = 0.0;
    double omega = 0.0;   // carrier frequency, phase referenced to t_center

    void validate() const;  // tau_p > 0, e0 >= 0
};

struct PulseTrain {
    std::vector<GaussianSegment> segments;  // empty = undriven

    // E(t) = sum over segments of e0/(sqrt(2 pi) tau) exp(-(t-tc)^2/(2 tau^2)) exp(i omega (t-tc))
    std::complex<double> amplitude(double t) const;
    double intensity(double t) const;  // |E(t)|^2

    bool empty() const { return segments.empty(); }
    void validate() const;

    // earliest center - 5 tau (0 for an empty train); default trajectory start
    double suggested_start() const;
    // latest center + 5 tau (0 for an empty train)
    double last_center_plus_tail() const;
};

// Integral of |E(t')|^2 over [t0, t1] by trapezoid quadrature on a grid fine
// enough for ~1e-7 relative accuracy. Inside the integrator the same integral
// is accumulated on the ODE step grid instead.
double energy_integral(const PulseTrain& train, double t0, double t1);

}  // namespace dimer

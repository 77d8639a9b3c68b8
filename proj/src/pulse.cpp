// pulse.cpp

#include "dimer/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dimer {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2 pi)
}

void GaussianSegment::validate() const {
    if (!(tau_p > 0.0)) throw std::invalid_argument("GaussianSegment: tau_p must be > 0");
    if (!(e0 >= 0.0)) throw std::invalid_argument("GaussianSegment: e0 must be >= 0");
}

void PulseTrain::validate() const {
    for (const auto& s : segments) s.validate();
}

std::complex<double> PulseTrain::amplitude(double t) const {
    std::complex<double> e = 0.0;
    for (const auto& s : segments) {
        const double x = (t - s.t_center) / s.tau_p;
        if (std::abs(x) > 60.0) continue;  // exp underflows well before this
        const double env = s.e0 * kInvSqrt2Pi / s.tau_p * std::exp(-0.5 * x * x);
        if (s.omega == 0.0) {
            e += env;
        } else {
            const double ph = s.omega * (t - s.t_center);
            e += env * std::complex<double>(std::cos(ph), std::sin(ph));
        }
    }
    return e;
}

double PulseTrain::intensity(double t) const { return std::norm(amplitude(t)); }

double PulseTrain::suggested_start() const {
    if (segments.empty()) return 0.0;
    double t = 1e300;
    for (const auto& s : segments) t = std::min(t, s.t_center - 5.0 * s.tau_p);
    return t;
}

double PulseTrain::last_center_plus_tail() const {
    if (segments.empty()) return 0.0;
    double t = -1e300;
    for (const auto& s : segments) t = std::max(t, s.t_center + 5.0 * s.tau_p);
    return t;
}

double energy_integral(const PulseTrain& train, double t0, double t1) {
    if (train.empty() || !(t1 > t0)) return 0.0;
    double tau_min = 1e300;
    for (const auto& s : train.segments) tau_min = std::min(tau_min, s.tau_p);
    const double h_target = tau_min / 200.0;
    const auto n = static_cast<long>(std::ceil((t1 - t0) / h_target));
    const long steps = std::clamp(n, 16L, 40'000'000L);
    const double h = (t1 - t0) / static_cast<double>(steps);
    double acc = 0.5 * (train.intensity(t0) + train.intensity(t1));
    for (long i = 1; i < steps; ++i) acc += train.intensity(t0 + h * static_cast<double>(i));
    return acc * h;
}

}  // namespace dimer

// Pulse envelope values, superposition, and the |E|^2 integral against the
// analytic Gaussian result.

#include <doctest.h>

#include <cmath>
#include <random>

#include "dimer/pulse.hpp"

using dimer::GaussianSegment;
using dimer::PulseTrain;

namespace {

PulseTrain single(double e0, double tau, double tc, double omega = 0.0) {
    PulseTrain t;
    t.segments.push_back(GaussianSegment{e0, tau, tc, omega});
    return t;
}

// analytic integral of |E|^2 over the whole line for one segment
double full_energy(double e0, double tau) { return e0 * e0 / (2.0 * std::sqrt(M_PI) * tau); }

}  // namespace

TEST_SUITE("pulse") {

TEST_CASE("empty train is silent") {
    const PulseTrain t;
    CHECK(t.amplitude(0.0) == std::complex<double>(0.0));
    CHECK(t.amplitude(12.3) == std::complex<double>(0.0));
    CHECK(dimer::energy_integral(t, -10.0, 10.0) == 0.0);
}

TEST_CASE("peak value of the unit segment") {
    const PulseTrain t = single(1.0, 1.0, 0.0);
    CHECK(t.amplitude(0.0).real() == doctest::Approx(0.3989422804014327).epsilon(1e-14));
    CHECK(t.amplitude(0.0).imag() == 0.0);
}

TEST_CASE("superposition of two segments") {
    PulseTrain two = single(1.0, 1.0, 0.0);
    two.segments.push_back(GaussianSegment{1.0, 1.0, 15.0, 0.0});
    const PulseTrain one = single(1.0, 1.0, 0.0);
    const PulseTrain other = single(1.0, 1.0, 15.0);
    const double mid = 7.5;
    CHECK(two.amplitude(mid).real() ==
          doctest::Approx(one.amplitude(mid).real() + other.amplitude(mid).real()).epsilon(1e-14));
    CHECK(two.amplitude(mid).real() == doctest::Approx(2.0 * one.amplitude(mid).real()).epsilon(1e-12));
}

TEST_CASE("carrier rotates the phase, not the magnitude") {
    const PulseTrain t = single(1.0, 0.5, 2.0, 3.0);
    const PulseTrain plain = single(1.0, 0.5, 2.0, 0.0);
    for (double dt : {-0.7, 0.0, 0.3, 1.1}) {
        const auto z = t.amplitude(2.0 + dt);
        CHECK(std::abs(z) == doctest::Approx(std::abs(plain.amplitude(2.0 + dt))).epsilon(1e-13));
        if (std::abs(z) > 1e-12)
            CHECK(std::remainder(std::arg(z) - 3.0 * dt, 2.0 * M_PI) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("energy integral reaches the analytic Gaussian total") {
    const PulseTrain t = single(1.0, 1.0, 0.0);
    const double total = dimer::energy_integral(t, -10.0, 10.0);
    CHECK(total == doctest::Approx(0.28209479177387814).epsilon(1e-6));
    CHECK(total == doctest::Approx(full_energy(1.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("halving tau doubles the total energy at fixed area") {
    const double e1 = dimer::energy_integral(single(1.0, 1.0, 0.0), -10.0, 10.0);
    const double e2 = dimer::energy_integral(single(1.0, 0.5, 0.0), -10.0, 10.0);
    CHECK(e2 == doctest::Approx(2.0 * e1).epsilon(1e-6));
}

TEST_CASE("energy integral is monotone nondecreasing in t") {
    PulseTrain t = single(0.7, 0.3, 0.0);
    t.segments.push_back(GaussianSegment{1.3, 1.0, 4.0, 0.0});
    double prev = 0.0;
    for (double x = -2.0; x <= 8.0; x += 0.25) {
        const double e = dimer::energy_integral(t, -2.0, x);
        CHECK(e >= prev - 1e-15);
        prev = e;
    }
}

TEST_CASE("amplitude is smooth: finite differences match the envelope derivative") {
    const PulseTrain t = single(1.0, 0.8, 1.0);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2.0, 4.0);
    for (int rep = 0; rep < 50; ++rep) {
        const double x = u(rng);
        const double h = 1e-5;
        const double fd = (t.amplitude(x + h).real() - t.amplitude(x - h).real()) / (2.0 * h);
        const double analytic = -(x - 1.0) / (0.8 * 0.8) * t.amplitude(x).real();
        CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
    }
}

TEST_CASE("segment validation") {
    GaussianSegment s{1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = GaussianSegment{-0.5, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = GaussianSegment{0.0, 1.0, 0.0, 0.0};
    CHECK_NOTHROW(s.validate());
}

}  // TEST_SUITE

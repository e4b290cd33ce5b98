#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "polsim/core_model.hpp"
#include "polsim/errors.hpp"
#include "setups.hpp"

using namespace polsim;

namespace {

PhysicalConfig unit_config() {
    PhysicalConfig p;
    p.G = 3.0;
    p.Omega = 1.0;
    p.OmegaS = 2.0;
    p.gamma = 4.0;  // C6 gamma / OmegaS^2 = 1
    p.C6 = 1.0;
    p.c = 9.0;
    p.L = 10.0;
    p.x_gate = 5.0;
    return p;
}

}  // namespace

TEST_CASE("unit-scaled config has z_b = 1") {
    const DerivedScales s = derive_scales(unit_config());
    CHECK(s.z_b == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.l_abs == doctest::Approx(9.0 * 4.0 / 9.0));
    CHECK(s.d_b == doctest::Approx(s.z_b / s.l_abs));
    CHECK(s.d == doctest::Approx(s.d_b * 10.0));
    CHECK(s.Gamma_eit == doctest::Approx(1.0 / (4.0 * std::sqrt(s.d))));
}

TEST_CASE("blockade radius satisfies C6 / z_b^6 = OmegaS^2 / gamma") {
    PhysicalConfig p = setups::experimental();
    const DerivedScales s = derive_scales(p);
    CHECK(p.C6 / std::pow(s.z_b, 6) == doctest::Approx(p.OmegaS * p.OmegaS / p.gamma).epsilon(1e-13));
    CHECK(s.z_b == doctest::Approx(8.7e-6).epsilon(0.01));
    CHECK(s.d_b == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(2.0 * s.d == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("C6 scaling by s^6 scales z_b by s") {
    PhysicalConfig p = unit_config();
    p.L = 1e3;
    const double z0 = derive_scales(p).z_b;
    for (double s : {0.5, 2.0, 7.0}) {
        PhysicalConfig q = p;
        q.C6 *= std::pow(s, 6);
        CHECK(derive_scales(q).z_b == doctest::Approx(s * z0).epsilon(1e-14));
    }
}

TEST_CASE("transparency width is bounded by Gamma and tends to it for large OmegaS") {
    for (double d : {1.0, 10.0, 25.0}) {
        for (double r : {0.5, 1.0, 4.0}) {
            const double w = transparency_width(1.0, r, 1.0, d);
            CHECK(w <= 1.0 / std::sqrt(d) * (1.0 + 1e-15));
        }
    }
    CHECK(transparency_width(1.0, 1e4, 1.0, 25.0) == doctest::Approx(1.0 / 5.0).epsilon(1e-6));
}

TEST_CASE("transparency width decreases with d and with Omega / OmegaS") {
    double prev = 1e300;
    for (double d = 1.0; d <= 100.0; d += 3.0) {
        const double w = transparency_width(1.0, 2.0, 1.0, d);
        CHECK(w < prev);
        prev = w;
    }
    prev = 1e300;
    for (double omega = 0.2; omega <= 4.0; omega += 0.2) {
        // Fixed Omega, shrinking OmegaS raises Omega / OmegaS.
        const double w = transparency_width(1.0, 4.2 - omega, 1.0, 25.0);
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("z_b larger than L is a warning-class error that can be overridden") {
    PhysicalConfig p = unit_config();
    p.L = 0.5;
    p.x_gate = 0.25;
    CHECK_THROWS_AS(derive_scales(p), BlockadeExceedsMedium);
    CHECK_THROWS_AS(derive_scales(p), ConfigWarning);
    CHECK_NOTHROW(derive_scales(p, SizeCheck::allow_oversized));
}

TEST_CASE("validation rejects non-positive rates and a gate outside the medium") {
    PhysicalConfig p = unit_config();
    p.gamma = 0.0;
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = unit_config();
    p.x_gate = 11.0;
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = unit_config();
    p.C6 = -1.0;
    CHECK_THROWS_AS(derive_scales(p), ConfigError);
}

TEST_CASE("phi is stored modulo 2 pi") {
    CHECK(wrap_phase(two_pi + 0.25) == doctest::Approx(0.25));
    CHECK(wrap_phase(-0.25) == doctest::Approx(two_pi - 0.25));
    CHECK(wrap_phase(two_pi) == 0.0);
    PhysicalConfig p = unit_config();
    p.phi = -pi;
    CHECK(to_medium(p).phi == doctest::Approx(pi));
}

TEST_CASE("van der Waals potential") {
    const PhysicalConfig p = unit_config();
    const double z_b = derive_scales(p).z_b;
    CHECK(vdw_potential(z_b, p) == doctest::Approx(p.OmegaS * p.OmegaS / p.gamma));
    CHECK(vdw_potential(2.0 * z_b, p) == doctest::Approx(p.OmegaS * p.OmegaS / (64.0 * p.gamma)));
    CHECK(vdw_potential(-1.7, p) == vdw_potential(1.7, p));
    CHECK(vdw_potential(1e6, p) < 1e-35);
    CHECK_THROWS_AS(vdw_potential(0.0, p), DomainError);
    const double ref = vdw_potential(0.3, p) * std::pow(0.3, 6);
    for (double dz : {0.01, 0.7, 3.0, 40.0}) {
        CHECK(vdw_potential(dz, p) * std::pow(dz, 6) == doctest::Approx(ref).epsilon(1e-14));
    }
    const Medium m = to_medium(p);
    CHECK(m.potential(1.0) == doctest::Approx(m.rydberg_control * m.rydberg_control));
    CHECK_THROWS_AS(m.potential(0.0), DomainError);
}

TEST_CASE("medium round trip through an SI config") {
    const Medium m = make_medium(2.5, 7.0, 3.0, 1.5, 2.5, 40.0, 0.4);
    const Medium back = to_medium(to_physical(m));
    CHECK(back.d_b == doctest::Approx(m.d_b));
    CHECK(back.length == doctest::Approx(m.length));
    CHECK(back.gate == doctest::Approx(m.gate));
    CHECK(back.control == doctest::Approx(m.control));
    CHECK(back.rydberg_control == doctest::Approx(m.rydberg_control));
    CHECK(back.coupling == doctest::Approx(m.coupling));
    CHECK(back.phi == doctest::Approx(m.phi));
    CHECK(back.free_space == doctest::Approx(m.free_space));
}

TEST_CASE("with_blockade_depth rescales G only") {
    PhysicalConfig p = unit_config();
    const PhysicalConfig q = with_blockade_depth(p, 3.5);
    CHECK(derive_scales(q).d_b == doctest::Approx(3.5).epsilon(1e-13));
    CHECK(q.Omega == p.Omega);
    CHECK(q.C6 == p.C6);
}

TEST_CASE("Gaussian pulse spectrum is normalized with analytic moments") {
    const double duration = 1e-6 * two_pi * 3.05e6;
    const std::vector<double> grid = linspace(-10.0 / duration, 10.0 / duration, 2001);
    const PulseSpec pulse = gaussian_pulse_spectrum(duration, grid);
    double norm = 0.0, mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = std::norm(pulse.amplitudes[i]) * pulse.weights[i];
        norm += w;
        mean += w * grid[i];
        var += w * grid[i] * grid[i];
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(mean) < 1e-12 / duration);
    // FWHM T of |E(t)|^2 gives spectral intensity variance 2 ln 2 / T^2.
    CHECK(var == doctest::Approx(2.0 * std::log(2.0) / (duration * duration)).epsilon(1e-8));
    CHECK(gaussian_spectral_variance(duration) == doctest::Approx(var).epsilon(1e-8));
}

TEST_CASE("longer pulses concentrate at resonance") {
    const std::vector<double> grid = linspace(-1.0, 1.0, 401);
    const PulseSpec a = gaussian_pulse_spectrum(10.0, grid);
    const PulseSpec b = gaussian_pulse_spectrum(100.0, grid);
    CHECK(std::norm(b.amplitudes[200]) > std::norm(a.amplitudes[200]));
}

TEST_CASE("pulse grid validation") {
    CHECK_THROWS_AS(gaussian_pulse_spectrum(1.0, {0.0, 1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(gaussian_pulse_spectrum(1.0, {0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(gaussian_pulse_spectrum(0.0, {-1.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("trapezoid weights integrate linear functions exactly") {
    const std::vector<double> grid = {0.0, 0.1, 0.5, 0.6, 2.0};
    const std::vector<double> w = trapezoid_weights(grid);
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        s0 += w[i];
        s1 += w[i] * grid[i];
    }
    CHECK(s0 == doctest::Approx(2.0));
    CHECK(s1 == doctest::Approx(2.0));
}

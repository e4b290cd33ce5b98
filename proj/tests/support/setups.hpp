#pragma once

// Parameter sets shared by the unit and acceptance tests.

#include <cmath>

#include "polsim/core_model.hpp"

namespace setups {

// Experimental example: gamma/2pi = 3.05 MHz, Omega/2pi = 5 MHz,
// OmegaS/2pi = 20 MHz, 100S_1/2 van der Waals coefficient, d_b = 5 and
// L = 5 z_b (2d = 50), gate in the middle.
inline polsim::PhysicalConfig experimental() {
    using polsim::two_pi;
    polsim::PhysicalConfig p;
    p.gamma = two_pi * 3.05e6;
    p.Omega = two_pi * 5e6;
    p.OmegaS = two_pi * 20e6;
    p.C6 = two_pi * 56.2e12 * 1e-36;
    p.G = 1.0;
    p.L = 1.0;
    p = polsim::with_blockade_depth(p, 5.0);
    const double z_b = polsim::derive_scales(p, polsim::SizeCheck::allow_oversized).z_b;
    p.L = 5.0 * z_b;
    p.x_gate = 2.5 * z_b;
    return p;
}

// Gate-free transparency-window example: 2d = 50, gamma / Omega = 0.5,
// G / Omega = 10, OmegaS = ratio * Omega.
inline polsim::Medium transparency(double ratio) {
    const double omega = 2.0;
    return polsim::make_medium(5.0, 5.0, 2.5, omega, ratio * omega, 10.0 * omega);
}

// Slow-light example with OmegaS >> G, where the leading-order velocities
// are accurate at the percent level.
inline polsim::Medium slow_light() { return polsim::make_medium(1.0, 10.0, 5.0, 1.0, 20.0, 10.0); }

}  // namespace setups

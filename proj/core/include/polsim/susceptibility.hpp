#pragma once

#include "polsim/core_model.hpp"
#include "polsim/quadrature.hpp"

namespace polsim {

// Complex response of the medium at one (position, frequency) point, in
// units of 1/z_b so that i * integral(chi dz) is dimensionless.
struct SusceptibilityTriple {
    cplx chi_r;  // right-moving mode
    cplx chi_l;  // left-moving mode
    cplx chi_c;  // cross coupling
};

// xi = omega + i - Omega^2 / omega (gamma units). omega = 0 throws SingularFrequency.
cplx xi(double omega, const Medium& medium);

// Full finite-frequency response at distance dz from the gate (omega in units
// of gamma, dz in units of z_b). dz = 0 is the fully blockaded limit
// (V -> infinity). Throws SingularFrequency for omega = 0 and PoleError when
// the common denominator vanishes.
SusceptibilityTriple susceptibilities(double dz, double omega, const Medium& medium);

// Gate-free response (V = 0 everywhere).
SusceptibilityTriple free_susceptibilities(double omega, const Medium& medium);

// CW response d_b / (dz^6 + 2i); chi_r = -chi_l = -chi_c = chi0 at omega -> 0.
cplx chi0_cw(double dz, double d_b);

// i * integral over the real line of dz / (dz^6 + 2i) = (pi / 3) (1 + i)^(1/3).
cplx nu_infinity();

// nu(z, x) = i * integral_0^z chi0(z' - x) dz', adaptive, absolute tolerance 1e-10.
QuadratureResult nu(double z, double x, double d_b, const QuadratureOptions& options = {});

// nu(L, x) on the medium's own length.
cplx nu_full(double x, const Medium& medium);

}  // namespace polsim

#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace polsim {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Laser, atom and medium parameters in SI units (rates in rad/s, lengths in m).
// G = g sqrt(rho_a) is the collective probe coupling; gamma is the half
// scattering rate of |p_left>, |p_right> (they decay at 2 gamma).
struct PhysicalConfig {
    double G = 0.0;
    double Omega = 0.0;
    double OmegaS = 0.0;
    double gamma = 0.0;
    double phi = 0.0;
    double c = 299792458.0;
    double C6 = 0.0;       // rad/s * m^6
    double L = 0.0;
    double x_gate = 0.0;
};

// Throws ConfigError on non-positive rates/lengths or a gate outside [0, L].
void validate(const PhysicalConfig& config);

// phi reduced to [0, 2 pi).
double wrap_phase(double phi);
PhysicalConfig normalized(PhysicalConfig config);

struct DerivedScales {
    double z_b = 0.0;           // blockade radius, C6 / z_b^6 = OmegaS^2 / gamma
    double l_abs = 0.0;         // resonant absorption length c gamma / G^2
    double d_b = 0.0;           // optical depth per blockade radius z_b / l_abs
    double d = 0.0;             // half the total optical depth, d_b L / z_b
    double Gamma_eit = 0.0;     // Omega^2 / (gamma sqrt(d))
    double delta_omega0 = 0.0;  // transparency width of the gate-free medium
};

enum class SizeCheck { strict, allow_oversized };

// Raises BlockadeExceedsMedium when z_b > L unless the check is relaxed.
DerivedScales derive_scales(const PhysicalConfig& config, SizeCheck check = SizeCheck::strict);

// Width of the n = 0 transmission window for half optical depth d.
double transparency_width(double Omega, double OmegaS, double gamma, double d);

// Level shift C6 / dz^6. dz = 0 is a DomainError.
double vdw_potential(double dz, const PhysicalConfig& config);

// Dimensionless description used by every solver: lengths in units of z_b,
// frequencies in units of gamma.
struct Medium {
    double d_b = 1.0;
    double length = 10.0;           // L / z_b
    double gate = 5.0;              // x_gate / z_b
    double control = 1.0;           // Omega / gamma
    double rydberg_control = 1.0;   // OmegaS / gamma
    double coupling = 10.0;         // G / gamma
    double phi = 0.0;
    double free_space = 0.01;       // gamma z_b / c = d_b / coupling^2

    // V(dz) / gamma with dz in units of z_b, so potential(1) = rydberg_control^2.
    double potential(double dz) const;
    double optical_depth() const { return d_b * length; }
};

Medium make_medium(double d_b, double length, double gate, double control, double rydberg_control,
                   double coupling, double phi = 0.0);
Medium to_medium(const PhysicalConfig& config, SizeCheck check = SizeCheck::strict);

// SI configuration with gamma = 1 rad/s and z_b = 1 m reproducing the medium.
PhysicalConfig to_physical(const Medium& medium);

// Rescales G so the medium has the requested optical depth per blockade radius.
PhysicalConfig with_blockade_depth(PhysicalConfig config, double d_b);

struct PulseSpec {
    double duration = 0.0;               // FWHM of the temporal intensity profile
    std::vector<double> omega_grid;
    std::vector<cplx> amplitudes;        // E0(omega), sum |E0|^2 w = 1
    std::vector<double> weights;         // trapezoid quadrature weights on omega_grid
};

// Gaussian pulse centred on resonance. Throws DomainError for a
// non-increasing grid or non-positive duration.
PulseSpec gaussian_pulse_spectrum(double duration, std::vector<double> omega_grid);

// Spectral intensity variance of a Gaussian pulse with the given FWHM duration.
double gaussian_spectral_variance(double duration);

std::vector<double> trapezoid_weights(std::span<const double> grid);
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace polsim

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "polsim/core_model.hpp"

namespace polsim {

// Momentum k is measured in 1/l_abs and frequencies in gamma, so the photon
// kinetic term c k becomes coupling^2 * k.
enum class Regime {
    free,          // no gate interaction, basis (E_r, E_l, P_r, P_l, D, S)
    blockaded,     // V -> infinity, |s> projected out: (E_r, E_l, P_r, P_l, D)
    finite_shift,  // 6x6 with a finite level shift on S, for convergence checks
};

inline constexpr double default_finite_shift = 1e6;

struct BlochMatrix {
    double k = 0.0;
    Regime regime = Regime::free;
    Eigen::MatrixXcd entries;
};

BlochMatrix build_bloch_matrix(double k, Regime regime, const Medium& medium,
                               double shift = default_finite_shift);

struct Composition {
    double photon_right = 0.0;
    double photon_left = 0.0;
    double atomic = 0.0;
};

// Squared-magnitude weights of a (not necessarily normalized) eigenvector.
Composition composition(const Eigen::VectorXcd& eigenvector);

enum class BranchKind { dark, bright };

struct PolaritonBranch {
    std::vector<double> k;
    std::vector<cplx> omega;
    std::vector<Composition> fractions;
    BranchKind kind = BranchKind::bright;
};

struct SpectrumOptions {
    double shift = default_finite_shift;
    double dark_threshold = 1e-12;     // |omega(0)| below this marks a dark branch
    double ambiguity = 1e-6;           // competing overlap assignments closer than this fail
    double degeneracy = 1e-8;          // eigenvalues closer than this share an eigenspace
};

// Eigenbranches over k_grid, tracked by maximal eigenvector overlap with the
// previous sample. Throws TrackingAmbiguity when the assignment is not unique.
std::vector<PolaritonBranch> spectrum(std::span<const double> k_grid, Regime regime, const Medium& medium,
                                      const SpectrumOptions& options = {});

// 401 points over k l_abs in [-2, 2].
std::vector<double> default_momentum_grid();

// Zero-momentum dark-state amplitudes (right null vectors of the Bloch
// matrix), unit norm. Free regime returns {right-moving, left-moving}; the
// blockaded regime the single stationary-light state. These are the complex
// conjugates of the operator coefficients of the polariton annihilation
// operators.
std::vector<Eigen::VectorXcd> analytic_dark_states(Regime regime, const Medium& medium);

struct SlowLightVelocities {
    double right = 0.0;  // v / c
    double left = 0.0;
};

// Leading-order group velocities, v_r/c = Omega^2/(G^2+Omega^2),
// v_l/c = -OmegaS^2/(G^2+OmegaS^2).
SlowLightVelocities slow_light_velocities(const Medium& medium);

// Coefficient of k^2 (units gamma l_abs^2) for the stationary-light branch,
// -i 2 G^2 Omega^2 / (G^2 + 2 Omega^2) / gamma in these units.
cplx stationary_light_coefficient(const Medium& medium);

struct DispersionFit {
    bool quadratic = false;
    double v_group = 0.0;           // Re(slope) in units of c
    cplx slope{};                   // fitted complex k coefficient in gamma l_abs units
    cplx diffusion_coeff{};         // fitted k^2 coefficient; for free branches the loss curvature
    double relative_residual = 0.0;
    int samples = 0;
};

// Least-squares fit omega(k) = c0 + c1 k + c2 k^2 over |k| l_abs <= window.
// quadratic marks the blockaded regime, where c2 is the diffusion
// coefficient; for free branches c1 gives the group velocity. Throws FitError for a non-dark branch, too few
// samples or a relative residual above 1e-3.
DispersionFit fit_dispersion(const PolaritonBranch& branch, Regime regime, const Medium& medium,
                             double window = 0.01);

}  // namespace polsim

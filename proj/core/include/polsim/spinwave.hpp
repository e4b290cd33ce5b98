#pragma once

#include <vector>

#include <Eigen/Dense>

#include "polsim/core_model.hpp"
#include "polsim/quadrature.hpp"

namespace polsim {

// Gate spin-wave coherence rho(x, y) sampled on a uniform grid over [0, L]
// (units of z_b). Discrete traces use the trapezoid weights.
struct SpinWaveDensityMatrix {
    std::vector<double> grid;
    std::vector<double> weights;
    Eigen::MatrixXcd rho;
    bool is_initial = false;

    double trace() const;
    double purity() const;  // sum_ij w_i w_j |rho_ij|^2
    // Spectrum of W^{1/2} rho W^{1/2}, ascending.
    Eigen::VectorXd eigenvalues() const;
};

// rho0(x, y) = sin(pi x / L) sin(pi y / L), scaled to unit discrete trace.
// Throws DomainError for N < 64 or L <= 0.
SpinWaveDensityMatrix initial_sine_mode(double length, int samples);

// Multiplier rho(x, y) / rho0(x, y) after one CW target photon has scattered
// off a gate excitation in superposition of x and y. nu_x = nu(L, x) and
// nu_y = nu(L, y) are passed in so callers can reuse them across a grid.
cplx coherence_factor(double x, double y, cplx nu_x, cplx nu_y, const Medium& medium,
                      const QuadratureOptions& options = {});

// 1 - (nu_x + conj(nu_y)) / ((1 + nu_x)(1 + conj(nu_y))), the limit of
// coherence_factor for |x - y| much larger than z_b.
cplx far_separation_factor(cplx nu_x, cplx nu_y);

// Applies coherence_factor to every element of rho0. The medium's length
// must match the grid's extent. The upper triangle is computed and the
// lower triangle filled by conjugation.
SpinWaveDensityMatrix evolve_cw(const SpinWaveDensityMatrix& rho0, const Medium& medium,
                                const QuadratureOptions& options = {});

struct SpinWaveSummary {
    double trace = 0.0;
    double purity = 0.0;
    double min_coherence_ratio = 1.0;  // min |rho / rho0| over elements with |rho0| > 1e-12 max
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    bool psd_warning = false;          // some eigenvalue below -1e-8
};

SpinWaveSummary summarize(const SpinWaveDensityMatrix& rho, const SpinWaveDensityMatrix& rho0);

// Loss of the dissipative blockade mechanism, 1 - exp(-4 d_b).
double blockade_loss_baseline(double d_b);

}  // namespace polsim

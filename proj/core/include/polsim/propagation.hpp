#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "polsim/core_model.hpp"

namespace polsim {

using Matrix2c = Eigen::Matrix2cd;

struct TwoModeField {
    std::vector<double> z;       // units of z_b
    std::vector<cplx> e_right;
    std::vector<cplx> e_left;
    double omega = 0.0;          // units of gamma
    double x_gate = 0.0;
};

struct ScatterResult {
    double omega = 0.0;
    cplx T{};
    cplx R{};
    double A = 0.0;              // 1 - |T|^2 - |R|^2
    int n_gate = 0;
};

ScatterResult make_scatter(double omega, cplx T, cplx R, int n_gate);

// Which susceptibility drives the propagation.
enum class Coupling {
    full,     // finite-frequency response with the gate's V(z - x)
    cw,       // CW parameterization chi_r = -chi_l = -chi_c = chi0
    no_gate,  // finite-frequency response with V = 0
};

// M(z - x, omega) = [[chi_r, chi_c e^{i phi}], [-chi_c e^{-i phi}, chi_l]].
Matrix2c propagation_matrix(double dz, double omega, const Medium& medium, Coupling coupling = Coupling::full);

struct GridSpec {
    double inner_step = 1.0 / 400.0;   // within inner_halfwidth of the gate
    double outer_step = 1.0 / 50.0;
    double inner_halfwidth = 3.0;
    double max_phase_step = 0.05;      // cap on h * ||M|| per step
    double richardson_tol = 1e-8;
    int max_refinements = 5;
    std::size_t max_nodes = 1u << 22;  // step budget for any single integration
    double segment_condition = 1e6;    // start a new segment beyond this
    double condition_limit = 1e12;     // a single step above this is fatal
};

struct BvpSolution {
    TwoModeField field;
    ScatterResult scatter;
    double error_estimate = 0.0;     // Richardson estimate on (T, R)
    int segments = 1;                // >1: conditioning forced interval splitting
    int refinements = 0;
    bool ill_conditioned = false;    // whole-medium fundamental matrix exceeded condition_limit
};

// Integrates i dE/dz = M(z - x) E across [0, L] with E_r(0) = 1, E_l(L) = 0.
// Uses a fixed-step RK4 fundamental matrix, split into well-conditioned
// segments joined by scattering-matrix composition. omega = 0 is only
// accepted with Coupling::cw. A grid beyond grid.max_nodes (reachable at
// very large |omega|) raises ConvergenceError.
BvpSolution solve_bvp(double omega, const Medium& medium, Coupling coupling = Coupling::full,
                      const GridSpec& grid = {});

// Closed-form CW fields and coefficients on the given grid (or a default grid)
// using the full nu(z, x) quadrature, so finite-size corrections are kept.
BvpSolution cw_analytic(const Medium& medium, std::span<const double> z_grid = {});

// Bulk CW coefficients with nu(L, x) = d_b nu_infinity.
ScatterResult bulk_cw_scatter(double d_b, double phi);

// Transmission/reflection without a gate. omega = 0 maps to T = 1, R = 0.
std::vector<ScatterResult> t0_spectrum(std::span<const double> omega_grid, const Medium& medium,
                                       const GridSpec& grid = {});

// Gate present; omega = 0 is taken from cw_analytic.
std::vector<ScatterResult> r1_spectrum(std::span<const double> omega_grid, const Medium& medium,
                                       const GridSpec& grid = {});

// Quadratic fit of 1 - |T0| in omega^2 over samples with |T0| > 0.9;
// returns 1 / sqrt(linear coefficient). Throws FitError with fewer than 5.
double fitted_transparency_width(std::span<const ScatterResult> t0_results);

// Solver node positions for a medium and grid spec (before refinement).
std::vector<double> solver_grid(const Medium& medium, double omega, Coupling coupling, const GridSpec& grid);

}  // namespace polsim

#pragma once

#include <span>

#include "polsim/core_model.hpp"
#include "polsim/propagation.hpp"

namespace polsim {

struct SwitchFidelities {
    double classical = 0.0;  // 1 - |T1(0)|^2
    double quantum = 0.0;    // |R1(0)|^2
    double gate = 0.0;       // |R1(0)|^2, the phase-gate fidelity
    double loss = 0.0;       // A = classical - quantum
};

SwitchFidelities switch_fidelities(const ScatterResult& cw);
// Bulk CW coefficients, nu(L, x) = d_b nu_infinity.
SwitchFidelities switch_fidelities(double d_b, double phi = 0.0);
// Finite medium through cw_analytic.
SwitchFidelities switch_fidelities(const Medium& medium);

// Critical d_b below which the blockade phase gate cannot reach a pi phase.
inline constexpr double pi_phase_threshold = 6.0;

struct BlockadeGateBaseline {
    double fidelity = 0.0;  // exp(-5 pi / (4 d_b))
    bool feasible = false;  // d_b >= pi_phase_threshold
};

BlockadeGateBaseline blockade_gate_baseline(double d_b);

// Classical switch fidelity of the dissipative blockade, 1 - exp(-4 d_b).
double blockade_switch_baseline(double d_b);

// |sum_w R1(omega) |E0(omega)|^2 w|. The spectrum must be sampled on the
// pulse grid, otherwise GridMismatch.
double pulse_router_fidelity(const PulseSpec& pulse, std::span<const ScatterResult> r1);

struct TransistorFidelity {
    double eta = 0.0;  // dominant eigenvalue of the evolved spin wave (simplified retrieval)
    double classical = 0.0;
    double quantum = 0.0;
};

// Evolves the sine-mode spin wave of the medium under one CW target photon
// and multiplies the switch fidelities by its dominant-mode weight.
TransistorFidelity transistor_fidelity(const Medium& medium, int samples = 256);

struct TimingEstimates {
    double tau_spread = 0.0;        // s, d (gamma / Omega^2 + gamma / OmegaS^2)
    double reconversion = 0.0;      // d^2 / (1 + d)^2
};

TimingEstimates timing_estimates(const PhysicalConfig& config, SizeCheck check = SizeCheck::strict);
double reconversion_efficiency(double d);

struct FidelityReport {
    double d_b = 0.0;
    double f_classical_switch = 0.0;
    double f_quantum_switch = 0.0;
    double f_gate = 0.0;
    double f_gate_blockade_baseline = 0.0;
    bool blockade_phase_feasible = false;
    double f_switch_blockade_baseline = 0.0;
    double loss = 0.0;
    double eta_retrieval_estimate = 0.0;
    double transistor_classical = 0.0;
    double transistor_quantum = 0.0;
};

// Single-point report for a dimensionless medium. samples <= 0 skips the
// spin-wave part (eta and transistor fields stay zero).
FidelityReport fidelity_report(const Medium& medium, int samples = 256);

}  // namespace polsim

#include "polsim/fidelity.hpp"

#include <cmath>

#include "polsim/errors.hpp"
#include "polsim/spinwave.hpp"

namespace polsim {

SwitchFidelities switch_fidelities(const ScatterResult& cw) {
    SwitchFidelities f;
    f.classical = 1.0 - std::norm(cw.T);
    f.quantum = std::norm(cw.R);
    f.gate = f.quantum;
    f.loss = f.classical - f.quantum;
    return f;
}

SwitchFidelities switch_fidelities(double d_b, double phi) {
    if (d_b < 0.0) throw DomainError("d_b must be non-negative");
    return switch_fidelities(bulk_cw_scatter(d_b, phi));
}

SwitchFidelities switch_fidelities(const Medium& medium) { return switch_fidelities(cw_analytic(medium).scatter); }

BlockadeGateBaseline blockade_gate_baseline(double d_b) {
    if (!(d_b > 0.0)) throw DomainError("blockade gate baseline needs d_b > 0");
    return {std::exp(-5.0 * pi / (4.0 * d_b)), d_b >= pi_phase_threshold};
}

double blockade_switch_baseline(double d_b) {
    if (d_b < 0.0) throw DomainError("d_b must be non-negative");
    return 1.0 - std::exp(-4.0 * d_b);
}

double pulse_router_fidelity(const PulseSpec& pulse, std::span<const ScatterResult> r1) {
    const std::size_t n = pulse.omega_grid.size();
    if (r1.size() != n) throw GridMismatch("reflection spectrum and pulse grid differ in length");
    cplx sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = pulse.omega_grid[i];
        if (std::abs(r1[i].omega - w) > 1e-12 * std::max(1.0, std::abs(w))) {
            throw GridMismatch("reflection spectrum sampled off the pulse grid at index " + std::to_string(i));
        }
        sum += r1[i].R * std::norm(pulse.amplitudes[i]) * pulse.weights[i];
    }
    return std::abs(sum);
}

TransistorFidelity transistor_fidelity(const Medium& medium, int samples) {
    const SpinWaveDensityMatrix rho0 = initial_sine_mode(medium.length, samples);
    const SpinWaveDensityMatrix rho = evolve_cw(rho0, medium);
    const Eigen::VectorXd ev = rho.eigenvalues();
    TransistorFidelity t;
    t.eta = ev[ev.size() - 1] / rho.trace();
    const SwitchFidelities f = switch_fidelities(medium);
    t.classical = t.eta * f.classical;
    t.quantum = t.eta * f.quantum;
    return t;
}

double reconversion_efficiency(double d) {
    if (d < 0.0) throw DomainError("optical depth must be non-negative");
    return d * d / ((1.0 + d) * (1.0 + d));
}

TimingEstimates timing_estimates(const PhysicalConfig& config, SizeCheck check) {
    const DerivedScales s = derive_scales(config, check);
    TimingEstimates t;
    t.tau_spread = s.d * (config.gamma / (config.Omega * config.Omega) + config.gamma / (config.OmegaS * config.OmegaS));
    t.reconversion = reconversion_efficiency(s.d);
    return t;
}

FidelityReport fidelity_report(const Medium& medium, int samples) {
    FidelityReport r;
    r.d_b = medium.d_b;
    const SwitchFidelities f = switch_fidelities(medium);
    r.f_classical_switch = f.classical;
    r.f_quantum_switch = f.quantum;
    r.f_gate = f.gate;
    r.loss = f.loss;
    if (medium.d_b > 0.0) {
        const BlockadeGateBaseline b = blockade_gate_baseline(medium.d_b);
        r.f_gate_blockade_baseline = b.fidelity;
        r.blockade_phase_feasible = b.feasible;
    }
    r.f_switch_blockade_baseline = blockade_switch_baseline(medium.d_b);
    if (samples > 0) {
        const TransistorFidelity t = transistor_fidelity(medium, samples);
        r.eta_retrieval_estimate = t.eta;
        r.transistor_classical = t.classical;
        r.transistor_quantum = t.quantum;
    }
    return r;
}

}  // namespace polsim

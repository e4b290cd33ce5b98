#include "polsim/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polsim/errors.hpp"

namespace polsim {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError(std::string(name) + " must be positive and finite (got " + std::to_string(value) + ")");
    }
}

}  // namespace

void validate(const PhysicalConfig& config) {
    require_positive(config.G, "G");
    require_positive(config.Omega, "Omega");
    require_positive(config.OmegaS, "OmegaS");
    require_positive(config.gamma, "gamma");
    require_positive(config.c, "c");
    require_positive(config.C6, "C6");
    require_positive(config.L, "L");
    if (!std::isfinite(config.phi)) throw ConfigError("phi must be finite");
    if (!(config.x_gate >= 0.0 && config.x_gate <= config.L)) {
        throw ConfigError("x_gate must lie in [0, L]");
    }
}

double wrap_phase(double phi) {
    double wrapped = std::fmod(phi, two_pi);
    if (wrapped < 0.0) wrapped += two_pi;
    if (wrapped >= two_pi) wrapped = 0.0;
    return wrapped;
}

PhysicalConfig normalized(PhysicalConfig config) {
    config.phi = wrap_phase(config.phi);
    return config;
}

double transparency_width(double Omega, double OmegaS, double gamma, double d) {
    const double r2 = (Omega * Omega) / (OmegaS * OmegaS);
    const double r4 = r2 * r2;
    const double Gamma = Omega * Omega / (gamma * std::sqrt(d));
    const double bracket = (1.0 + 2.0 * r2 + 2.0 * r4) + 0.5 * d * r4;
    return Gamma / std::sqrt(bracket);
}

DerivedScales derive_scales(const PhysicalConfig& config, SizeCheck check) {
    validate(config);
    DerivedScales s;
    s.z_b = std::pow(config.C6 * config.gamma / (config.OmegaS * config.OmegaS), 1.0 / 6.0);
    s.l_abs = config.c * config.gamma / (config.G * config.G);
    s.d_b = s.z_b / s.l_abs;
    s.d = s.d_b * config.L / s.z_b;
    s.Gamma_eit = config.Omega * config.Omega / (config.gamma * std::sqrt(s.d));
    s.delta_omega0 = transparency_width(config.Omega, config.OmegaS, config.gamma, s.d);
    if (check == SizeCheck::strict && s.z_b > config.L) {
        throw BlockadeExceedsMedium(s.z_b, config.L);
    }
    return s;
}

double vdw_potential(double dz, const PhysicalConfig& config) {
    if (dz == 0.0) throw DomainError("van der Waals potential is singular at dz = 0");
    const double dz2 = dz * dz;
    return config.C6 / (dz2 * dz2 * dz2);
}

double Medium::potential(double dz) const {
    if (dz == 0.0) throw DomainError("van der Waals potential is singular at dz = 0");
    const double dz2 = dz * dz;
    return rydberg_control * rydberg_control / (dz2 * dz2 * dz2);
}

Medium make_medium(double d_b, double length, double gate, double control, double rydberg_control,
                   double coupling, double phi) {
    if (!(d_b >= 0.0)) throw ConfigError("d_b must be non-negative");
    if (!(length > 0.0)) throw ConfigError("length must be positive");
    if (!(gate >= 0.0 && gate <= length)) throw ConfigError("gate must lie in [0, length]");
    if (!(control > 0.0) || !(rydberg_control > 0.0) || !(coupling > 0.0)) {
        throw ConfigError("Rabi frequencies and coupling must be positive");
    }
    Medium m;
    m.d_b = d_b;
    m.length = length;
    m.gate = gate;
    m.control = control;
    m.rydberg_control = rydberg_control;
    m.coupling = coupling;
    m.phi = wrap_phase(phi);
    m.free_space = d_b / (coupling * coupling);
    return m;
}

Medium to_medium(const PhysicalConfig& config, SizeCheck check) {
    const DerivedScales s = derive_scales(config, check);
    Medium m;
    m.d_b = s.d_b;
    m.length = config.L / s.z_b;
    m.gate = config.x_gate / s.z_b;
    m.control = config.Omega / config.gamma;
    m.rydberg_control = config.OmegaS / config.gamma;
    m.coupling = config.G / config.gamma;
    m.phi = wrap_phase(config.phi);
    m.free_space = config.gamma * s.z_b / config.c;
    return m;
}

PhysicalConfig to_physical(const Medium& medium) {
    PhysicalConfig p;
    p.gamma = 1.0;
    p.G = medium.coupling;
    p.Omega = medium.control;
    p.OmegaS = medium.rydberg_control;
    p.phi = medium.phi;
    p.c = medium.coupling * medium.coupling / medium.d_b;
    p.C6 = medium.rydberg_control * medium.rydberg_control;
    p.L = medium.length;
    p.x_gate = medium.gate;
    return p;
}

PhysicalConfig with_blockade_depth(PhysicalConfig config, double d_b) {
    if (!(d_b > 0.0)) throw ConfigError("d_b must be positive");
    const DerivedScales s = derive_scales(config, SizeCheck::allow_oversized);
    // d_b = z_b G^2 / (c gamma)
    config.G = std::sqrt(d_b * config.c * config.gamma / s.z_b);
    return config;
}

std::vector<double> trapezoid_weights(std::span<const double> grid) {
    std::vector<double> w(grid.size(), 0.0);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double h = 0.5 * (grid[i + 1] - grid[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    return w;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out;
    if (count <= 0) return out;
    if (count == 1) return {lo};
    out.reserve(static_cast<std::size_t>(count));
    const double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) out.push_back(lo + step * i);
    out.back() = hi;
    return out;
}

double gaussian_spectral_variance(double duration) {
    // Intensity exp(-4 ln2 t^2 / T^2) -> spectral intensity exp(-omega^2 T^2 / (4 ln2)).
    return 2.0 * std::numbers::ln2 / (duration * duration);
}

PulseSpec gaussian_pulse_spectrum(double duration, std::vector<double> omega_grid) {
    if (!(duration > 0.0)) throw DomainError("pulse duration must be positive");
    if (omega_grid.size() < 3) throw DomainError("pulse grid needs at least three samples");
    for (std::size_t i = 1; i < omega_grid.size(); ++i) {
        if (!(omega_grid[i] > omega_grid[i - 1])) throw DomainError("pulse grid must be strictly increasing");
    }
    PulseSpec pulse;
    pulse.duration = duration;
    pulse.weights = trapezoid_weights(omega_grid);
    const double var = gaussian_spectral_variance(duration);
    pulse.amplitudes.resize(omega_grid.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        const double w = omega_grid[i];
        const double intensity = std::exp(-0.5 * w * w / var);
        pulse.amplitudes[i] = cplx(std::sqrt(intensity), 0.0);
        norm += intensity * pulse.weights[i];
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : pulse.amplitudes) a *= scale;
    pulse.omega_grid = std::move(omega_grid);
    return pulse;
}

}  // namespace polsim

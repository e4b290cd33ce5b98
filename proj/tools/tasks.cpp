#include "tasks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "polsim/errors.hpp"
#include "polsim/fidelity.hpp"
#include "polsim/parallel.hpp"
#include "polsim/polariton_spectrum.hpp"
#include "polsim/propagation.hpp"
#include "polsim/spinwave.hpp"
#include "polsim/susceptibility.hpp"

namespace polsim::runner {

namespace {

class Csv {
public:
    Csv(std::initializer_list<std::string> header) {
        bool first = true;
        for (const std::string& h : header) {
            out_ << (first ? "" : ",") << h;
            first = false;
        }
        out_ << '\n';
        columns_ = header.size();
    }

    void row(std::initializer_list<double> values) {
        if (values.size() != columns_) throw std::logic_error("csv row width mismatch");
        bool first = true;
        for (double v : values) {
            out_ << (first ? "" : ",") << format_number(v);
            first = false;
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    std::size_t columns_ = 0;
};

// Thread-safe warning sink; the final list is sorted so it does not depend on
// scheduling.
class Warnings {
public:
    void add(const std::string& w) {
        std::lock_guard lock(guard_);
        items_.push_back(w);
    }
    std::vector<std::string> sorted() {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
        return items_;
    }

private:
    std::mutex guard_;
    std::vector<std::string> items_;
};

Medium medium_for(const PhysicalConfig& p, bool allow_oversized, Warnings& warnings) {
    try {
        return to_medium(p, SizeCheck::strict);
    } catch (const BlockadeExceedsMedium& e) {
        if (!allow_oversized) throw;
        warnings.add(std::string(e.what()) + " (allowed by allow_oversized_blockade)");
        return to_medium(p, SizeCheck::allow_oversized);
    }
}

DerivedScales scales_of(const PhysicalConfig& p) { return derive_scales(p, SizeCheck::allow_oversized); }

Csv scatter_table() {
    return Csv{"omega [rad/s]", "re_T [1]", "im_T [1]", "re_R [1]", "im_R [1]", "abs_T [1]", "abs_R [1]",
               "abs2_T [1]", "abs2_R [1]", "A [1]", "n_gate [1]", "d_b [1]"};
}

void scatter_row(Csv& csv, const ScatterResult& s, double gamma, double d_b) {
    csv.row({s.omega * gamma, s.T.real(), s.T.imag(), s.R.real(), s.R.imag(), std::abs(s.T), std::abs(s.R),
             std::norm(s.T), std::norm(s.R), s.A, static_cast<double>(s.n_gate), d_b});
}

std::vector<double> omega_grid(const ExperimentConfig& cfg) {
    std::vector<double> w = cfg.omega->values();
    for (double& x : w) x /= cfg.physical.gamma;
    return w;
}

TaskOutput run_spectrum(const ExperimentConfig& cfg) {
    TaskOutput out;
    Warnings warnings;
    const Medium m = medium_for(cfg.physical, cfg.allow_oversized_blockade, warnings);
    const DerivedScales s = scales_of(cfg.physical);
    SpectrumOptions options;
    options.shift = cfg.shift;
    const auto branches = spectrum(cfg.k_labs.values(), cfg.regime, m, options);

    Csv csv{"k_l_abs [1]", "k [1/m]", "branch_id [1]", "re_omega [rad/s]", "im_omega [rad/s]", "frac_right [1]",
            "frac_left [1]", "frac_atomic [1]", "dark [1]"};
    const std::size_t nk = branches.empty() ? 0 : branches.front().k.size();
    for (std::size_t i = 0; i < nk; ++i) {
        for (std::size_t b = 0; b < branches.size(); ++b) {
            const auto& br = branches[b];
            const auto& f = br.fractions[i];
            csv.row({br.k[i], br.k[i] / s.l_abs, static_cast<double>(b), br.omega[i].real() * cfg.physical.gamma,
                     br.omega[i].imag() * cfg.physical.gamma, f.photon_right, f.photon_left, f.atomic,
                     br.kind == BranchKind::dark ? 1.0 : 0.0});
        }
    }
    out.artifacts.push_back({".csv", csv.str()});

    int dark = 0;
    for (const auto& br : branches) dark += br.kind == BranchKind::dark;

    // Fits use their own dense grid inside the window around k = 0.
    json fits = json::array();
    const auto dense = spectrum(linspace(-cfg.fit_window, cfg.fit_window, 41), cfg.regime, m, options);
    for (const auto& br : dense) {
        if (br.kind != BranchKind::dark) continue;
        try {
            const DispersionFit fit = fit_dispersion(br, cfg.regime, m, cfg.fit_window);
            const double to_si = cfg.physical.gamma * s.l_abs * s.l_abs;
            fits.push_back({{"v_group [m/s]", fit.v_group * cfg.physical.c},
                            {"re_k2_coeff [m^2 rad/s]", fit.diffusion_coeff.real() * to_si},
                            {"im_k2_coeff [m^2 rad/s]", fit.diffusion_coeff.imag() * to_si},
                            {"relative_residual", fit.relative_residual}});
        } catch (const FitError& e) {
            warnings.add(std::string("dispersion fit: ") + e.what());
        }
    }
    out.results["dark_branches"] = dark;
    out.results["branches"] = branches.size();
    out.results["dark_fits"] = fits;
    if (cfg.regime == Regime::free) {
        const SlowLightVelocities v = slow_light_velocities(m);
        out.results["leading_order_v_right [m/s]"] = v.right * cfg.physical.c;
        out.results["leading_order_v_left [m/s]"] = v.left * cfg.physical.c;
    } else {
        const cplx c2 = stationary_light_coefficient(m) * cfg.physical.gamma * s.l_abs * s.l_abs;
        out.results["leading_order_im_k2_coeff [m^2 rad/s]"] = c2.imag();
    }
    out.warnings = warnings.sorted();
    return out;
}

TaskOutput run_t0(const ExperimentConfig& cfg) {
    TaskOutput out;
    Warnings warnings;
    const Medium m = medium_for(cfg.physical, cfg.allow_oversized_blockade, warnings);
    const auto t0 = t0_spectrum(omega_grid(cfg), m);
    Csv csv = scatter_table();
    for (const auto& s : t0) scatter_row(csv, s, cfg.physical.gamma, m.d_b);
    out.artifacts.push_back({".csv", csv.str()});
    out.results["delta_omega0_formula [rad/s]"] = scales_of(cfg.physical).delta_omega0;
    try {
        out.results["delta_omega0_fit [rad/s]"] = fitted_transparency_width(t0) * cfg.physical.gamma;
    } catch (const FitError& e) {
        warnings.add(std::string("transparency width fit: ") + e.what());
    }
    out.warnings = warnings.sorted();
    return out;
}

TaskOutput run_propagate(const ExperimentConfig& cfg) {
    TaskOutput out;
    Warnings warnings;
    const Medium m = medium_for(cfg.physical, cfg.allow_oversized_blockade, warnings);
    const double gamma = cfg.physical.gamma;
    if (cfg.omega) {
        Csv csv = scatter_table();
        for (const auto& s : r1_spectrum(omega_grid(cfg), m)) scatter_row(csv, s, gamma, m.d_b);
        out.artifacts.push_back({".csv", csv.str()});
    }
    if (cfg.field_omega) {
        const double w = *cfg.field_omega / gamma;
        const BvpSolution sol = w == 0.0 ? cw_analytic(m) : solve_bvp(w, m);
        const double z_b = scales_of(cfg.physical).z_b;
        Csv csv{"z [m]", "re_E_right [1]", "im_E_right [1]", "re_E_left [1]", "im_E_left [1]"};
        for (std::size_t i = 0; i < sol.field.z.size(); ++i) {
            csv.row({sol.field.z[i] * z_b, sol.field.e_right[i].real(), sol.field.e_right[i].imag(),
                     sol.field.e_left[i].real(), sol.field.e_left[i].imag()});
        }
        out.artifacts.push_back({"_field.csv", csv.str()});
        out.results["field_error_estimate"] = sol.error_estimate;
        out.results["field_segments"] = sol.segments;
        if (sol.ill_conditioned) warnings.add("field solve: whole-medium fundamental matrix was ill-conditioned");
    }
    if (cfg.pulse) {
        const double r0 = std::abs(cw_analytic(m).scatter.R);
        Csv csv{"duration [s]", "fidelity [1]", "abs_R1_cw [1]"};
        for (double duration : cfg.pulse->durations) {
            const double d = duration * gamma;
            const double sigma = std::sqrt(gaussian_spectral_variance(d));
            const double span = cfg.pulse->span_sigmas * sigma;
            const PulseSpec pulse = gaussian_pulse_spectrum(d, linspace(-span, span, cfg.pulse->points));
            const auto r1 = r1_spectrum(pulse.omega_grid, m);
            csv.row({duration, pulse_router_fidelity(pulse, r1), r0});
        }
        out.artifacts.push_back({cfg.omega ? "_pulse.csv" : ".csv", csv.str()});
        const TimingEstimates te = timing_estimates(cfg.physical, SizeCheck::allow_oversized);
        out.results["abs_R1_cw"] = r0;
        out.results["tau_spread [s]"] = te.tau_spread;
        out.results["reconversion"] = te.reconversion;
    }
    out.warnings = warnings.sorted();
    return out;
}

TaskOutput run_cw(const ExperimentConfig& cfg) {
    TaskOutput out;
    Warnings warnings;
    const std::size_t n = cfg.d_b_values.size();
    std::vector<ScatterResult> results(n);
    std::vector<double> couplings(n);
    parallel_for(n, [&](std::size_t i) {
        const PhysicalConfig p = with_blockade_depth(cfg.physical, cfg.d_b_values[i]);
        couplings[i] = p.G;
        if (cfg.bulk) {
            results[i] = bulk_cw_scatter(cfg.d_b_values[i], wrap_phase(p.phi));
        } else {
            results[i] = cw_analytic(medium_for(p, cfg.allow_oversized_blockade, warnings)).scatter;
        }
    });
    Csv csv{"d_b [1]", "G [rad/s]", "re_T [1]", "im_T [1]", "re_R [1]", "im_R [1]", "abs_T [1]", "abs_R [1]",
            "abs2_T [1]", "abs2_R [1]", "A [1]"};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = results[i];
        csv.row({cfg.d_b_values[i], couplings[i], s.T.real(), s.T.imag(), s.R.real(), s.R.imag(), std::abs(s.T),
                 std::abs(s.R), std::norm(s.T), std::norm(s.R), s.A});
    }
    out.artifacts.push_back({".csv", csv.str()});
    out.results["mode"] = cfg.bulk ? "bulk" : "finite";
    out.results["reflection_threshold_d_b"] = 1.0 / std::abs(nu_infinity());
    out.warnings = warnings.sorted();
    return out;
}

TaskOutput run_spinwave(const ExperimentConfig& cfg) {
    TaskOutput out;
    Warnings warnings;
    const PhysicalConfig p = cfg.spin_d_b ? with_blockade_depth(cfg.physical, *cfg.spin_d_b) : cfg.physical;
    const Medium m = medium_for(p, cfg.allow_oversized_blockade, warnings);
    const double z_b = scales_of(p).z_b;
    const SpinWaveDensityMatrix rho0 = initial_sine_mode(m.length, cfg.samples);
    const SpinWaveDensityMatrix rho = evolve_cw(rho0, m);
    const SpinWaveSummary s = summarize(rho, rho0);

    Csv csv{"x [m]", "y [m]", "re_rho0 [1/z_b]", "re_rho [1/z_b]", "im_rho [1/z_b]", "abs_ratio [1]"};
    const Eigen::Index n = rho.rho.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const cplx r = rho.rho(i, j);
            const double r0 = rho0.rho(i, j).real();
            csv.row({rho.grid[i] * z_b, rho.grid[j] * z_b, r0, r.real(), r.imag(),
                     r0 != 0.0 ? std::abs(r) / std::abs(r0) : std::nan("")});
        }
    }
    out.artifacts.push_back({".csv", csv.str()});

    const double bulk_loss = bulk_cw_scatter(m.d_b, m.phi).A;
    json summary = {
        {"d_b", m.d_b},
        {"samples", cfg.samples},
        {"trace", s.trace},
        {"purity", s.purity},
        {"min_coherence_ratio", s.min_coherence_ratio},
        {"min_eigenvalue", s.min_eigenvalue},
        {"max_eigenvalue", s.max_eigenvalue},
        {"psd_warning", s.psd_warning},
        {"bulk_far_factor", 1.0 - bulk_loss},
        {"blockade_loss_baseline", blockade_loss_baseline(m.d_b)},
    };
    out.artifacts.push_back({"_summary.json", summary.dump(2) + "\n"});
    out.results = summary;
    if (s.psd_warning) warnings.add("evolved spin wave has an eigenvalue below -1e-8");
    out.warnings = warnings.sorted();
    return out;
}

TaskOutput run_fidelity(const ExperimentConfig& cfg) {
    TaskOutput out;
    Warnings warnings;
    Csv csv{"d_b [1]", "f_classical [1]", "f_quantum [1]", "f_gate [1]", "f_gate_blockade_baseline [1]",
            "blockade_phase_feasible [1]", "f_switch_blockade_baseline [1]", "loss [1]", "eta [1]",
            "transistor_classical [1]", "transistor_quantum [1]"};
    for (double d_b : cfg.d_b_values) {
        const PhysicalConfig p = with_blockade_depth(cfg.physical, d_b);
        const FidelityReport r = fidelity_report(medium_for(p, cfg.allow_oversized_blockade, warnings), cfg.samples);
        // The blockade phase gate cannot reach pi below the threshold, so its
        // fidelity is masked there.
        csv.row({d_b, r.f_classical_switch, r.f_quantum_switch, r.f_gate,
                 r.blockade_phase_feasible ? r.f_gate_blockade_baseline : std::nan(""),
                 r.blockade_phase_feasible ? 1.0 : 0.0, r.f_switch_blockade_baseline, r.loss,
                 r.eta_retrieval_estimate, r.transistor_classical, r.transistor_quantum});
    }
    out.artifacts.push_back({".csv", csv.str()});
    const TimingEstimates te = timing_estimates(cfg.physical, SizeCheck::allow_oversized);
    out.results["tau_spread [s]"] = te.tau_spread;
    out.results["reconversion"] = te.reconversion;
    out.results["eta_model"] = cfg.samples > 0 ? "simplified: dominant spin-wave mode after one CW photon"
                                               : "skipped";
    out.warnings = warnings.sorted();
    return out;
}

PhysicalConfig with_parameter(PhysicalConfig p, const std::string& key, double v) {
    if (key == "d_b") return with_blockade_depth(p, v);
    if (key == "G") p.G = v;
    else if (key == "Omega") p.Omega = v;
    else if (key == "OmegaS") p.OmegaS = v;
    else if (key == "gamma") p.gamma = v;
    else if (key == "phi") p.phi = v;
    else if (key == "C6") p.C6 = v;
    else if (key == "L") p.L = v;
    else if (key == "x_gate") p.x_gate = v;
    validate(p);
    return p;
}

std::string parameter_unit(const std::string& key) {
    if (key == "d_b") return "1";
    if (key == "phi") return "rad";
    if (key == "C6") return "rad/s m^6";
    if (key == "L" || key == "x_gate") return "m";
    return "rad/s";
}

TaskOutput run_scan(const ExperimentConfig& cfg) {
    TaskOutput out;
    Warnings warnings;
    const std::size_t n = cfg.scan_values.size();
    std::vector<ScatterResult> results(n);
    std::vector<Medium> media(n);
    std::vector<double> z_b(n);
    parallel_for(n, [&](std::size_t i) {
        const PhysicalConfig p = with_parameter(cfg.physical, cfg.scan_parameter, cfg.scan_values[i]);
        media[i] = medium_for(p, cfg.allow_oversized_blockade, warnings);
        z_b[i] = scales_of(p).z_b;
        results[i] = cw_analytic(media[i]).scatter;
    });
    Csv csv{"scan_" + cfg.scan_parameter + " [" + parameter_unit(cfg.scan_parameter) + "]", "d_b [1]", "z_b [m]", "length_over_z_b [1]", "re_T [1]", "im_T [1]", "re_R [1]",
            "im_R [1]", "abs_T [1]", "abs_R [1]", "A [1]", "f_classical [1]", "f_quantum [1]"};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = results[i];
        const SwitchFidelities f = switch_fidelities(s);
        csv.row({cfg.scan_values[i], media[i].d_b, z_b[i], media[i].length, s.T.real(), s.T.imag(), s.R.real(),
                 s.R.imag(), std::abs(s.T), std::abs(s.R), s.A, f.classical, f.quantum});
    }
    out.artifacts.push_back({".csv", csv.str()});
    out.results["parameter"] = cfg.scan_parameter;
    out.warnings = warnings.sorted();
    return out;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

json describe_scales(const ExperimentConfig& cfg) {
    const DerivedScales s = scales_of(cfg.physical);
    const Medium m = to_medium(cfg.physical, SizeCheck::allow_oversized);
    return {
        {"z_b [m]", s.z_b},
        {"l_abs [m]", s.l_abs},
        {"d_b", s.d_b},
        {"d", s.d},
        {"Gamma_eit [rad/s]", s.Gamma_eit},
        {"delta_omega0 [rad/s]", s.delta_omega0},
        {"medium",
         {{"d_b", m.d_b},
          {"length [z_b]", m.length},
          {"gate [z_b]", m.gate},
          {"control [gamma]", m.control},
          {"rydberg_control [gamma]", m.rydberg_control},
          {"coupling [gamma]", m.coupling},
          {"phi", m.phi},
          {"free_space", m.free_space}}},
    };
}

TaskOutput execute(const ExperimentConfig& cfg) {
    switch (cfg.task) {
        case Task::spectrum: return run_spectrum(cfg);
        case Task::t0: return run_t0(cfg);
        case Task::propagate: return run_propagate(cfg);
        case Task::cw: return run_cw(cfg);
        case Task::spinwave: return run_spinwave(cfg);
        case Task::fidelity: return run_fidelity(cfg);
        case Task::scan: return run_scan(cfg);
    }
    throw std::logic_error("unhandled task");
}

}  // namespace polsim::runner

#include "polsim/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "polsim/errors.hpp"
#include "polsim/parallel.hpp"
#include "polsim/quadrature.hpp"
#include "polsim/susceptibility.hpp"

namespace polsim {

namespace {

constexpr cplx I{0.0, 1.0};

// Scattering form of a two-port: E_r(out, right) = t E_r(in) + rp E_l(in, right),
// E_l(out, left) = r E_r(in) + tp E_l(in, right).
struct Scattering {
    cplx t{1.0, 0.0};
    cplx r{0.0, 0.0};
    cplx rp{0.0, 0.0};
    cplx tp{1.0, 0.0};
};

Scattering to_scattering(const Matrix2c& p) {
    const cplx p22 = p(1, 1);
    if (p22 == cplx(0.0)) throw ConditioningError("transfer matrix has vanishing (2,2) element");
    return {p.determinant() / p22, -p(1, 0) / p22, p(0, 1) / p22, 1.0 / p22};
}

// Redheffer star product: a on the left, b on the right.
Scattering star(const Scattering& a, const Scattering& b) {
    const cplx denom = 1.0 - a.rp * b.r;
    if (denom == cplx(0.0)) throw ConditioningError("segment composition is singular");
    Scattering s;
    s.t = b.t * a.t / denom;
    s.r = a.r + a.tp * b.r * a.t / denom;
    s.tp = a.tp * b.tp / denom;
    s.rp = b.rp + b.t * a.rp * b.tp / denom;
    return s;
}

double condition_number(const Matrix2c& p) {
    const double frob2 = p.squaredNorm();
    const double det = std::abs(p.determinant());
    if (det == 0.0) return std::numeric_limits<double>::infinity();
    const double disc = std::sqrt(std::max(0.0, frob2 * frob2 - 4.0 * det * det));
    const double s1sq = 0.5 * (frob2 + disc);
    return s1sq / det;
}

double matrix_norm(const Matrix2c& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

std::vector<double> refine(const std::vector<double>& nodes, int level) {
    if (level == 0) return nodes;
    const int parts = 1 << level;
    std::vector<double> out;
    out.reserve((nodes.size() - 1) * parts + 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double a = nodes[i];
        const double h = (nodes[i + 1] - a) / parts;
        for (int p = 0; p < parts; ++p) out.push_back(a + h * p);
    }
    out.push_back(nodes.back());
    return out;
}

struct Integration {
    TwoModeField field;
    cplx T, R;
    int segments = 1;
    bool ill_conditioned = false;
};

Integration integrate_fields(const std::vector<double>& z, double omega, const Medium& m, Coupling coupling,
                             const GridSpec& spec) {
    const bool constant = coupling == Coupling::no_gate;
    const Matrix2c fixed = constant ? propagation_matrix(0.0, omega, m, coupling) : Matrix2c::Zero();
    auto matrix_at = [&](double zz) {
        return constant ? fixed : propagation_matrix(zz - m.gate, omega, m, coupling);
    };

    const std::size_t n = z.size();
    std::vector<Matrix2c> local(n);
    std::vector<std::size_t> seg_start{0};
    std::vector<Scattering> seg_scatter;
    local[0] = Matrix2c::Identity();
    double log_cond = 0.0;

    const Matrix2c id = Matrix2c::Identity();
    Matrix2c m0 = matrix_at(z[0]);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double h = z[j + 1] - z[j];
        const Matrix2c mh = matrix_at(z[j] + 0.5 * h);
        const Matrix2c m1 = matrix_at(z[j + 1]);
        const Matrix2c k1 = -I * m0;
        const Matrix2c k2 = -I * mh * (id + 0.5 * h * k1);
        const Matrix2c k3 = -I * mh * (id + 0.5 * h * k2);
        const Matrix2c k4 = -I * m1 * (id + h * k3);
        const Matrix2c step = id + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        m0 = m1;
        if (condition_number(step) > spec.condition_limit) {
            throw ConditioningError("single integration step exceeds the condition limit; refine the grid");
        }
        local[j + 1] = step * local[j];
        const bool last = j + 2 == n;
        const double cond = condition_number(local[j + 1]);
        if (cond > spec.segment_condition || last) {
            log_cond += std::log(cond);
            seg_scatter.push_back(to_scattering(local[j + 1]));
            if (!last) {
                seg_start.push_back(j + 1);
                local[j + 1] = Matrix2c::Identity();
            }
        }
    }
    if (n == 1) seg_scatter.push_back(Scattering{});

    const std::size_t n_seg = seg_scatter.size();
    std::vector<Scattering> left(n_seg + 1), right(n_seg + 1);
    for (std::size_t k = 0; k < n_seg; ++k) left[k + 1] = star(left[k], seg_scatter[k]);
    for (std::size_t k = n_seg; k-- > 0;) right[k] = star(seg_scatter[k], right[k + 1]);

    Integration out;
    out.segments = static_cast<int>(n_seg);
    out.ill_conditioned = log_cond > std::log(spec.condition_limit);
    out.field.z = z;
    out.field.omega = omega;
    out.field.x_gate = m.gate;
    out.field.e_right.resize(n);
    out.field.e_left.resize(n);
    for (std::size_t k = 0; k < n_seg; ++k) {
        const cplx er = left[k].t / (1.0 - left[k].rp * right[k].r);
        const Eigen::Vector2cd boundary(er, right[k].r * er);
        const std::size_t begin = seg_start[k];
        const std::size_t end = k + 1 < n_seg ? seg_start[k + 1] : n - 1;
        for (std::size_t j = begin; j <= end; ++j) {
            // The closing node of a non-final segment was reset to identity.
            if (j == end && k + 1 < n_seg) continue;
            const Eigen::Vector2cd e = local[j] * boundary;
            out.field.e_right[j] = e[0];
            out.field.e_left[j] = e[1];
        }
    }
    out.field.e_right[n - 1] = left[n_seg].t;
    out.field.e_left[n - 1] = 0.0;
    out.field.e_right[0] = 1.0;
    out.T = left[n_seg].t;
    out.R = left[n_seg].r;
    out.field.e_left[0] = out.R;
    return out;
}

}  // namespace

ScatterResult make_scatter(double omega, cplx T, cplx R, int n_gate) {
    return {omega, T, R, 1.0 - std::norm(T) - std::norm(R), n_gate};
}

Matrix2c propagation_matrix(double dz, double omega, const Medium& m, Coupling coupling) {
    const cplx phase = std::exp(I * m.phi);
    Matrix2c mat;
    if (coupling == Coupling::cw) {
        const cplx chi0 = chi0_cw(dz, m.d_b);
        mat << chi0, -chi0 * phase, chi0 * std::conj(phase), -chi0;
        return mat;
    }
    const SusceptibilityTriple s =
        coupling == Coupling::no_gate ? free_susceptibilities(omega, m) : susceptibilities(dz, omega, m);
    mat << s.chi_r, s.chi_c * phase, -s.chi_c * std::conj(phase), s.chi_l;
    return mat;
}

std::vector<double> solver_grid(const Medium& m, double omega, Coupling coupling, const GridSpec& spec) {
    const double L = m.length;
    std::vector<double> cuts{0.0, L};
    const bool gated = coupling != Coupling::no_gate;
    if (gated) {
        for (double p : {m.gate - spec.inner_halfwidth, m.gate, m.gate + spec.inner_halfwidth}) {
            if (p > 0.0 && p < L) cuts.push_back(p);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const Matrix2c fixed = gated ? Matrix2c::Zero() : propagation_matrix(0.0, omega, m, coupling);
    auto norm_at = [&](double zz) {
        return gated ? matrix_norm(propagation_matrix(zz - m.gate, omega, m, coupling)) : matrix_norm(fixed);
    };

    std::vector<double> nodes{0.0};
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c];
        const double b = cuts[c + 1];
        const double mid = 0.5 * (a + b);
        const bool inner = gated && std::abs(mid - m.gate) <= spec.inner_halfwidth;
        const double base = inner ? spec.inner_step : spec.outer_step;
        const int count = std::max(1, static_cast<int>(std::ceil((b - a) / base - 1e-9)));
        const double h = (b - a) / count;
        for (int i = 0; i < count; ++i) {
            const double lo = a + h * i;
            const double hi = i + 1 == count ? b : a + h * (i + 1);
            const double local_norm = std::max({norm_at(lo), norm_at(0.5 * (lo + hi)), norm_at(hi)});
            const double steps = std::ceil((hi - lo) * local_norm / spec.max_phase_step);
            if (!(steps + static_cast<double>(nodes.size()) <= static_cast<double>(spec.max_nodes))) {
                throw ConvergenceError("step budget of " + std::to_string(spec.max_nodes) + " nodes exceeded at omega = " +
                                       std::to_string(omega));
            }
            const int sub = std::max(1, static_cast<int>(steps));
            for (int s = 1; s <= sub; ++s) nodes.push_back(s == sub ? hi : lo + (hi - lo) * s / sub);
        }
    }
    return nodes;
}

BvpSolution solve_bvp(double omega, const Medium& m, Coupling coupling, const GridSpec& spec) {
    if (omega == 0.0 && coupling != Coupling::cw) throw SingularFrequency();
    if (coupling == Coupling::cw) omega = 0.0;
    const std::vector<double> base = solver_grid(m, omega, coupling, spec);
    const int n_gate = coupling == Coupling::no_gate ? 0 : 1;

    Integration coarse = integrate_fields(base, omega, m, coupling, spec);
    double err = 0.0;
    int level = 0;
    for (;;) {
        ++level;
        if ((base.size() - 1) << level > spec.max_nodes) {
            throw ConvergenceError("step budget of " + std::to_string(spec.max_nodes) +
                                   " nodes exceeded before reaching the Richardson tolerance at omega = " +
                                   std::to_string(omega));
        }
        Integration fine = integrate_fields(refine(base, level), omega, m, coupling, spec);
        err = std::max(std::abs(fine.T - coarse.T), std::abs(fine.R - coarse.R)) / 15.0;
        coarse = std::move(fine);
        if (err <= spec.richardson_tol) break;
        if (level >= spec.max_refinements) {
            throw ConvergenceError("Richardson error " + std::to_string(err) + " above tolerance at omega = " +
                                   std::to_string(omega));
        }
    }
    BvpSolution sol;
    sol.scatter = make_scatter(omega, coarse.T, coarse.R, n_gate);
    sol.field = std::move(coarse.field);
    sol.error_estimate = err;
    sol.segments = coarse.segments;
    sol.refinements = level;
    sol.ill_conditioned = coarse.ill_conditioned;
    return sol;
}

BvpSolution cw_analytic(const Medium& m, std::span<const double> z_grid) {
    std::vector<double> z = z_grid.empty() ? solver_grid(m, 0.0, Coupling::cw, GridSpec{})
                                           : std::vector<double>(z_grid.begin(), z_grid.end());
    std::vector<cplx> nu_z(z.size(), 0.0);
    QuadratureOptions tight;
    tight.abs_tol = 1e-13;
    auto integrand = [&](double zp) { return I * chi0_cw(zp - m.gate, m.d_b); };
    nu_z[0] = integrate(integrand, 0.0, z[0], {m.gate}, tight).value;
    for (std::size_t j = 1; j < z.size(); ++j) {
        nu_z[j] = nu_z[j - 1] + integrate(integrand, z[j - 1], z[j], {m.gate}, tight).value;
    }
    // nu(L, x) from a single adaptive pass over the whole medium.
    const cplx nu_L = integrate(integrand, 0.0, m.length, {m.gate}, tight).value;
    const cplx denom = 1.0 + nu_L;
    const cplx conj_phase = std::exp(-I * m.phi);

    BvpSolution sol;
    sol.field.z = z;
    sol.field.omega = 0.0;
    sol.field.x_gate = m.gate;
    sol.field.e_right.resize(z.size());
    sol.field.e_left.resize(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        sol.field.e_right[j] = 1.0 - nu_z[j] / denom;
        sol.field.e_left[j] = conj_phase * (nu_L - nu_z[j]) / denom;
    }
    sol.scatter = make_scatter(0.0, 1.0 / denom, conj_phase * nu_L / denom, 1);
    return sol;
}

ScatterResult bulk_cw_scatter(double d_b, double phi) {
    const cplx nu = d_b * nu_infinity();
    const cplx denom = 1.0 + nu;
    return make_scatter(0.0, 1.0 / denom, std::exp(-I * phi) * nu / denom, 1);
}

std::vector<ScatterResult> t0_spectrum(std::span<const double> omega_grid, const Medium& m, const GridSpec& spec) {
    std::vector<ScatterResult> out(omega_grid.size());
    parallel_for(omega_grid.size(), [&](std::size_t i) {
        const double w = omega_grid[i];
        out[i] = w == 0.0 ? make_scatter(0.0, 1.0, 0.0, 0) : solve_bvp(w, m, Coupling::no_gate, spec).scatter;
    });
    return out;
}

std::vector<ScatterResult> r1_spectrum(std::span<const double> omega_grid, const Medium& m, const GridSpec& spec) {
    std::vector<ScatterResult> out(omega_grid.size());
    parallel_for(omega_grid.size(), [&](std::size_t i) {
        const double w = omega_grid[i];
        out[i] = w == 0.0 ? cw_analytic(m).scatter : solve_bvp(w, m, Coupling::full, spec).scatter;
    });
    return out;
}

double fitted_transparency_width(std::span<const ScatterResult> t0) {
    std::vector<double> w2, y;
    for (const auto& s : t0) {
        const double mag = std::abs(s.T);
        if (mag > 0.9) {
            w2.push_back(s.omega * s.omega);
            y.push_back(1.0 - mag);
        }
    }
    if (w2.size() < 5) throw FitError("transparency fit needs at least 5 samples with |T0| > 0.9");
    Eigen::MatrixXd a(static_cast<int>(w2.size()), 3);
    Eigen::VectorXd b(static_cast<int>(w2.size()));
    for (int i = 0; i < a.rows(); ++i) {
        a(i, 0) = 1.0;
        a(i, 1) = w2[i];
        a(i, 2) = w2[i] * w2[i];
        b[i] = y[i];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    if (!(c[1] > 0.0)) throw FitError("transparency fit has a non-positive curvature");
    return 1.0 / std::sqrt(c[1]);
}

}  // namespace polsim

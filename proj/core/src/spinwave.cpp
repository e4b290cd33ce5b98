#include "polsim/spinwave.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "polsim/errors.hpp"
#include "polsim/parallel.hpp"
#include "polsim/susceptibility.hpp"

namespace polsim {

namespace {

constexpr cplx I{0.0, 1.0};

double sixth(double u) {
    const double u2 = u * u;
    return u2 * u2 * u2;
}

Eigen::MatrixXcd weighted(const SpinWaveDensityMatrix& s) {
    const int n = static_cast<int>(s.grid.size());
    Eigen::VectorXd root(n);
    for (int i = 0; i < n; ++i) root[i] = std::sqrt(s.weights[i]);
    Eigen::MatrixXcd m = root.asDiagonal() * s.rho * root.asDiagonal();
    // Symmetrize away rounding so the Hermitian solver sees exact input.
    return 0.5 * (m + m.adjoint());
}

}  // namespace

double SpinWaveDensityMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) t += weights[i] * rho(i, i).real();
    return t;
}

double SpinWaveDensityMatrix::purity() const {
    double p = 0.0;
    const std::size_t n = grid.size();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) p += weights[i] * weights[j] * std::norm(rho(i, j));
    }
    return p;
}

Eigen::VectorXd SpinWaveDensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(weighted(*this), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceError("density matrix diagonalization failed");
    return solver.eigenvalues();
}

SpinWaveDensityMatrix initial_sine_mode(double length, int samples) {
    if (samples < 64) throw DomainError("spin-wave grid needs at least 64 samples");
    if (!(length > 0.0)) throw DomainError("spin-wave medium length must be positive");
    SpinWaveDensityMatrix s;
    s.grid = linspace(0.0, length, samples);
    s.weights = trapezoid_weights(s.grid);
    Eigen::VectorXd mode(samples);
    for (int i = 0; i < samples; ++i) mode[i] = std::sin(pi * s.grid[i] / length);
    double norm = 0.0;
    for (int i = 0; i < samples; ++i) norm += s.weights[i] * mode[i] * mode[i];
    mode /= std::sqrt(norm);
    s.rho = (mode * mode.transpose()).cast<cplx>();
    s.is_initial = true;
    return s;
}

cplx coherence_factor(double x, double y, cplx nu_x, cplx nu_y, const Medium& m, const QuadratureOptions& options) {
    if (x == y) return 1.0;
    auto integrand = [x, y](double z) {
        const double a = sixth(z - x);
        const double b = sixth(z - y);
        return cplx(a - b) / (cplx(a, 2.0) * cplx(b, -2.0));
    };
    QuadratureResult q;
    try {
        q = integrate(integrand, 0.0, m.length, {x, y}, options);
    } catch (const QuadratureError& e) {
        throw QuadratureError("spin-wave integral at (x, y) = (" + std::to_string(x) + ", " + std::to_string(y) + ")",
                              e.achieved_error());
    }
    return 1.0 + I * m.d_b * q.value / ((1.0 + nu_x) * (1.0 + std::conj(nu_y)));
}

cplx far_separation_factor(cplx nu_x, cplx nu_y) {
    return 1.0 - (nu_x + std::conj(nu_y)) / ((1.0 + nu_x) * (1.0 + std::conj(nu_y)));
}

SpinWaveDensityMatrix evolve_cw(const SpinWaveDensityMatrix& rho0, const Medium& m, const QuadratureOptions& options) {
    const std::size_t n = rho0.grid.size();
    if (n == 0 || std::abs(rho0.grid.back() - m.length) > 1e-12 * std::max(1.0, m.length) || rho0.grid.front() != 0.0) {
        throw GridMismatch("spin-wave grid does not span the medium [0, L]");
    }
    std::vector<cplx> nus(n);
    parallel_for(n, [&](std::size_t i) { nus[i] = nu(m.length, rho0.grid[i], m.d_b, options).value; });

    SpinWaveDensityMatrix out = rho0;
    out.is_initial = false;
    // Row-wise over the upper triangle; each row writes its own entries.
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx f = coherence_factor(rho0.grid[i], rho0.grid[j], nus[i], nus[j], m, options);
            out.rho(i, j) = f * rho0.rho(i, j);
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        out.rho(i, i) = rho0.rho(i, i);
        for (std::size_t j = i + 1; j < n; ++j) out.rho(j, i) = std::conj(out.rho(i, j));
    }
    return out;
}

SpinWaveSummary summarize(const SpinWaveDensityMatrix& rho, const SpinWaveDensityMatrix& rho0) {
    SpinWaveSummary s;
    s.trace = rho.trace();
    s.purity = rho.purity();
    const double floor = 1e-12 * rho0.rho.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < rho.rho.cols(); ++j) {
        for (Eigen::Index i = 0; i < rho.rho.rows(); ++i) {
            const double base = std::abs(rho0.rho(i, j));
            if (base > floor) s.min_coherence_ratio = std::min(s.min_coherence_ratio, std::abs(rho.rho(i, j)) / base);
        }
    }
    const Eigen::VectorXd ev = rho.eigenvalues();
    s.min_eigenvalue = ev[0];
    s.max_eigenvalue = ev[ev.size() - 1];
    s.psd_warning = s.min_eigenvalue < -1e-8;
    return s;
}

double blockade_loss_baseline(double d_b) {
    if (d_b < 0.0) throw DomainError("d_b must be non-negative");
    return 1.0 - std::exp(-4.0 * d_b);
}

}  // namespace polsim

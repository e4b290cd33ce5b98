#include "polsim/polariton_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "polsim/errors.hpp"

namespace polsim {

namespace {

constexpr cplx I{0.0, 1.0};

enum Slot { er = 0, el = 1, pr = 2, pl = 3, dd = 4, ss = 5 };

int dimension(Regime regime) { return regime == Regime::blockaded ? 5 : 6; }

struct Eigensystem {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;
};

Eigensystem diagonalize(const Eigen::MatrixXcd& h) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h, true);
    if (solver.info() != Eigen::Success) throw ConvergenceError("eigen decomposition failed");
    Eigensystem sys{solver.eigenvalues(), solver.eigenvectors()};
    for (int j = 0; j < sys.vectors.cols(); ++j) sys.vectors.col(j).normalize();
    return sys;
}

// Groups eigenvalues closer than tol into clusters; returns cluster id per index.
std::vector<int> cluster_eigenvalues(const Eigen::VectorXcd& values, double tol) {
    const int n = static_cast<int>(values.size());
    std::vector<int> id(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (id[i] >= 0) continue;
        id[i] = next;
        for (int j = i + 1; j < n; ++j) {
            if (id[j] < 0 && std::abs(values[i] - values[j]) < tol * std::max(1.0, std::abs(values[i]))) id[j] = next;
        }
        ++next;
    }
    return id;
}

}  // namespace

BlochMatrix build_bloch_matrix(double k, Regime regime, const Medium& m, double shift) {
    const int n = dimension(regime);
    const double G = m.coupling;
    const double kinetic = G * G * k;  // c k in gamma units with k in 1/l_abs
    const cplx phase = std::exp(I * m.phi);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    h(er, er) = kinetic;
    h(el, el) = -kinetic;
    h(er, pr) = h(pr, er) = G;
    h(el, pl) = h(pl, el) = G;
    h(pr, pr) = -I;
    h(pl, pl) = -I;
    h(pr, dd) = h(dd, pr) = m.control;
    h(dd, pl) = m.control * phase;
    h(pl, dd) = m.control * std::conj(phase);
    if (n == 6) {
        h(pl, ss) = h(ss, pl) = m.rydberg_control;
        h(ss, ss) = regime == Regime::finite_shift ? shift : 0.0;
    }
    return {k, regime, std::move(h)};
}

Composition composition(const Eigen::VectorXcd& v) {
    const double norm2 = v.squaredNorm();
    Composition c;
    c.photon_right = std::norm(v[er]) / norm2;
    c.photon_left = std::norm(v[el]) / norm2;
    double atomic = 0.0;
    for (int i = 2; i < v.size(); ++i) atomic += std::norm(v[i]);
    c.atomic = atomic / norm2;
    return c;
}

std::vector<double> default_momentum_grid() { return linspace(-2.0, 2.0, 401); }

std::vector<PolaritonBranch> spectrum(std::span<const double> k_grid, Regime regime, const Medium& medium,
                                      const SpectrumOptions& options) {
    if (k_grid.empty()) return {};
    const int n = dimension(regime);

    std::vector<Eigensystem> systems;
    systems.reserve(k_grid.size());
    for (double k : k_grid) systems.push_back(diagonalize(build_bloch_matrix(k, regime, medium, options.shift).entries));

    std::vector<PolaritonBranch> branches(n);
    std::vector<Eigen::VectorXcd> reference(n);

    // Seed branch ids by eigenvalue order at the first sample.
    {
        const Eigensystem& s0 = systems.front();
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (s0.values[a].real() != s0.values[b].real()) return s0.values[a].real() < s0.values[b].real();
            return s0.values[a].imag() < s0.values[b].imag();
        });
        for (int b = 0; b < n; ++b) {
            reference[b] = s0.vectors.col(order[b]);
            branches[b].k.push_back(k_grid[0]);
            branches[b].omega.push_back(s0.values[order[b]]);
            branches[b].fractions.push_back(composition(reference[b]));
        }
    }

    std::vector<int> perm(n);
    for (std::size_t s = 1; s < k_grid.size(); ++s) {
        const Eigensystem& sys = systems[s];
        const std::vector<int> cluster = cluster_eigenvalues(sys.values, options.degeneracy);
        const int n_clusters = *std::max_element(cluster.begin(), cluster.end()) + 1;

        // Orthonormal basis per cluster.
        std::vector<Eigen::MatrixXcd> basis(n_clusters);
        for (int c = 0; c < n_clusters; ++c) {
            std::vector<int> members;
            for (int j = 0; j < n; ++j) if (cluster[j] == c) members.push_back(j);
            Eigen::MatrixXcd cols(n, static_cast<int>(members.size()));
            for (std::size_t m = 0; m < members.size(); ++m) cols.col(static_cast<int>(m)) = sys.vectors.col(members[m]);
            if (members.size() == 1) {
                basis[c] = cols;
            } else {
                Eigen::HouseholderQR<Eigen::MatrixXcd> qr(cols);
                basis[c] = qr.householderQ() * Eigen::MatrixXcd::Identity(n, cols.cols());
            }
        }

        Eigen::MatrixXd overlap(n, n);
        for (int b = 0; b < n; ++b) {
            for (int j = 0; j < n; ++j) overlap(b, j) = (basis[cluster[j]].adjoint() * reference[b]).norm();
        }

        std::iota(perm.begin(), perm.end(), 0);
        std::vector<int> best = perm;
        double best_score = -1.0;
        do {
            double score = 0.0;
            for (int b = 0; b < n; ++b) score += overlap(b, perm[b]);
            if (score > best_score) { best_score = score; best = perm; }
        } while (std::next_permutation(perm.begin(), perm.end()));

        double rival = -1.0;
        std::iota(perm.begin(), perm.end(), 0);
        do {
            bool same_clusters = true;
            for (int b = 0; b < n && same_clusters; ++b) same_clusters = cluster[perm[b]] == cluster[best[b]];
            if (same_clusters) continue;
            double score = 0.0;
            for (int b = 0; b < n; ++b) score += overlap(b, perm[b]);
            rival = std::max(rival, score);
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (rival >= 0.0 && best_score - rival < options.ambiguity) throw TrackingAmbiguity(k_grid[s]);

        for (int b = 0; b < n; ++b) {
            const int j = best[b];
            const Eigen::MatrixXcd& q = basis[cluster[j]];
            Eigen::VectorXcd next;
            if (q.cols() == 1) {
                next = sys.vectors.col(j);
            } else {
                next = q * (q.adjoint() * reference[b]);
                next.normalize();
            }
            reference[b] = next;
            branches[b].k.push_back(k_grid[s]);
            branches[b].omega.push_back(sys.values[j]);
            branches[b].fractions.push_back(composition(next));
        }
    }

    // Dark branches: as many as H(0) has zero eigenvalues, picked by smallest
    // |omega| at the sample nearest k = 0.
    const Eigensystem zero = diagonalize(build_bloch_matrix(0.0, regime, medium, options.shift).entries);
    int n_dark = 0;
    for (int j = 0; j < n; ++j) if (std::abs(zero.values[j]) < options.dark_threshold) ++n_dark;
    std::size_t centre = 0;
    for (std::size_t s = 1; s < k_grid.size(); ++s) if (std::abs(k_grid[s]) < std::abs(k_grid[centre])) centre = s;
    std::vector<int> by_size(n);
    std::iota(by_size.begin(), by_size.end(), 0);
    std::sort(by_size.begin(), by_size.end(),
              [&](int a, int b) { return std::abs(branches[a].omega[centre]) < std::abs(branches[b].omega[centre]); });
    for (int i = 0; i < n; ++i) branches[by_size[i]].kind = i < n_dark ? BranchKind::dark : BranchKind::bright;
    return branches;
}

std::vector<Eigen::VectorXcd> analytic_dark_states(Regime regime, const Medium& m) {
    const double G = m.coupling;
    const double W = m.control;
    const double S = m.rydberg_control;
    const cplx conj_phase = std::exp(-I * m.phi);
    std::vector<Eigen::VectorXcd> states;
    if (regime == Regime::blockaded) {
        Eigen::VectorXcd phi_state = Eigen::VectorXcd::Zero(5);
        phi_state[er] = W;
        phi_state[el] = W * conj_phase;
        phi_state[dd] = -G;
        states.push_back(phi_state.normalized());
        return states;
    }
    Eigen::VectorXcd right = Eigen::VectorXcd::Zero(6);
    right[er] = W * S;
    right[dd] = -G * S;
    right[ss] = G * W * conj_phase;
    Eigen::VectorXcd left = Eigen::VectorXcd::Zero(6);
    left[el] = S;
    left[ss] = -G;
    states.push_back(right.normalized());
    states.push_back(left.normalized());
    return states;
}

SlowLightVelocities slow_light_velocities(const Medium& m) {
    const double G2 = m.coupling * m.coupling;
    const double W2 = m.control * m.control;
    const double S2 = m.rydberg_control * m.rydberg_control;
    return {W2 / (G2 + W2), -S2 / (G2 + S2)};
}

cplx stationary_light_coefficient(const Medium& m) {
    const double G2 = m.coupling * m.coupling;
    const double W2 = m.control * m.control;
    // omega = -i 2 l_abs c Omega^2 / (G^2 + 2 Omega^2) k^2 with c / l_abs = G^2 / gamma.
    return -I * 2.0 * G2 * W2 / (G2 + 2.0 * W2);
}

DispersionFit fit_dispersion(const PolaritonBranch& branch, Regime regime, const Medium& medium, double window) {
    if (branch.kind != BranchKind::dark) throw FitError("dispersion fits apply to dark branches only");
    std::vector<double> ks;
    std::vector<cplx> ws;
    for (std::size_t i = 0; i < branch.k.size(); ++i) {
        if (std::abs(branch.k[i]) <= window * (1.0 + 1e-12)) {
            ks.push_back(branch.k[i]);
            ws.push_back(branch.omega[i]);
        }
    }
    const bool quadratic = regime == Regime::blockaded;
    // The free branches carry an even, imaginary k^2 loss term next to the
    // linear dispersion, so both regimes fit up to k^2.
    const int cols = 3;
    if (static_cast<int>(ks.size()) < 5) throw FitError("fit window holds fewer than 5 samples");

    const int rows = static_cast<int>(ks.size());
    Eigen::MatrixXcd a(rows, cols);
    Eigen::VectorXcd y(rows);
    for (int i = 0; i < rows; ++i) {
        a(i, 0) = 1.0;
        a(i, 1) = ks[i];
        a(i, 2) = ks[i] * ks[i];
        y[i] = ws[i];
    }
    const Eigen::VectorXcd coeff = a.colPivHouseholderQr().solve(y);
    const double residual = (a * coeff - y).norm();
    const double scale = y.norm();

    DispersionFit fit;
    fit.quadratic = quadratic;
    fit.samples = rows;
    fit.relative_residual = scale > 0.0 ? residual / scale : 0.0;
    fit.slope = coeff[1];
    fit.v_group = coeff[1].real() / (medium.coupling * medium.coupling);
    fit.diffusion_coeff = coeff[2];
    if (fit.relative_residual > 1e-3) throw FitError("dispersion fit residual exceeds 1e-3; narrow the window");
    return fit;
}

}  // namespace polsim

#include "polsim/susceptibility.hpp"

#include <cmath>
#include <limits>

#include "polsim/errors.hpp"

namespace polsim {

namespace {

constexpr cplx I{0.0, 1.0};

// The textbook expressions contain Omega^2/omega and OmegaS^2/(omega - V)
// terms whose poles cancel analytically. Multiplying numerator and
// denominator by omega (omega - V) gives an equivalent form that stays
// regular through omega -> 0 and omega = V:
//   Q = (p - Omega^2)(omega + i)(omega - V) - p OmegaS^2,  p = omega * xi.
// When |omega - V| is large (or V infinite) we divide through by it instead.
SusceptibilityTriple evaluate(double omega, double inverse_detuning, double detuning, bool use_inverse,
                              double dz, const Medium& m) {
    const double W2 = m.control * m.control;
    const double S2 = m.rydberg_control * m.rydberg_control;
    const cplx b{omega, 1.0};
    const cplx p = cplx(omega * omega - W2, omega);
    cplx q, eta_num, xi_num, a_num, scale;
    if (use_inverse) {
        const double r = inverse_detuning;
        q = (p - W2) * b - p * S2 * r;
        scale = std::abs(p - W2) * std::abs(b) + std::abs(p) * S2 * std::abs(r);
        eta_num = p - S2 * omega * r;
        xi_num = p;
        a_num = W2;
    } else {
        const double u = detuning;
        q = (p - W2) * b * u - p * S2;
        scale = std::abs(p - W2) * std::abs(b) * std::abs(u) + std::abs(p) * S2;
        eta_num = p * u - S2 * omega;
        xi_num = p * u;
        a_num = W2 * u;
    }
    if (!(std::abs(q) > 1e-14 * std::abs(scale)) || !std::isfinite(std::abs(q))) {
        throw PoleError(dz, omega);
    }
    SusceptibilityTriple t;
    t.chi_r = -omega * m.free_space + m.d_b * eta_num / q;
    t.chi_l = omega * m.free_space - m.d_b * xi_num / q;
    t.chi_c = m.d_b * a_num / q;
    return t;
}

}  // namespace

cplx xi(double omega, const Medium& medium) {
    if (omega == 0.0) throw SingularFrequency();
    return cplx(omega, 1.0) - medium.control * medium.control / omega;
}

SusceptibilityTriple susceptibilities(double dz, double omega, const Medium& medium) {
    if (omega == 0.0) throw SingularFrequency();
    if (dz == 0.0) return evaluate(omega, 0.0, 0.0, true, dz, medium);
    const double V = medium.potential(std::abs(dz));
    const double u = omega - V;
    if (!std::isfinite(V) || std::abs(u) > 1.0) {
        const double r = std::isfinite(V) ? 1.0 / u : 0.0;
        return evaluate(omega, r, u, true, dz, medium);
    }
    return evaluate(omega, 0.0, u, false, dz, medium);
}

SusceptibilityTriple free_susceptibilities(double omega, const Medium& medium) {
    if (omega == 0.0) throw SingularFrequency();
    if (std::abs(omega) > 1.0) return evaluate(omega, 1.0 / omega, omega, true, 0.0, medium);
    return evaluate(omega, 0.0, omega, false, 0.0, medium);
}

cplx chi0_cw(double dz, double d_b) {
    const double dz2 = dz * dz;
    return d_b / cplx(dz2 * dz2 * dz2, 2.0);
}

cplx nu_infinity() {
    return (pi / 3.0) * std::pow(cplx(1.0, 1.0), 1.0 / 3.0);
}

QuadratureResult nu(double z, double x, double d_b, const QuadratureOptions& options) {
    auto integrand = [d_b, x](double zp) { return I * chi0_cw(zp - x, d_b); };
    return integrate(integrand, 0.0, z, {x}, options);
}

cplx nu_full(double x, const Medium& medium) {
    return nu(medium.length, x, medium.d_b).value;
}

}  // namespace polsim

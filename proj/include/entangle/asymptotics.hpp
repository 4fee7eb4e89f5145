#pragma once

// Closed-form post-collision state. With the transmitted/reflected kernel the
// relative wave function becomes
//
//   Phi_r(x,t) ~ T(q) phi_+(x,t) + R(q) phi_-(x,t),
//   phi_+(x,t) = [free evolution of the initial relative packet](x),
//   phi_-(x,t) = phi_+(-x,t),
//
// and multiplying by the center-of-mass Gaussian separates algebraically
// (because alpha^2 = alpha1 alpha2) into the two-term product form
//
//   Psi(x1,x2,t) = T Phi1(x1,t) Phi2(x2,t) + R Phi1(-x1,t) Phi2(-x2,t),
//
// whose weights |T|^2, |R|^2 are the asymptotic Schmidt spectrum. The
// per-particle factors are spreading Gaussians following the classical
// trajectories -+a_j +- u_j t, each carrying its plane-wave phase; the leftover
// global phase e^{-i q v t / 2} is split evenly between the two factors.

#include <cmath>
#include <complex>

#include "entangle/errors.hpp"
#include "entangle/evolution.hpp"
#include "entangle/model.hpp"
#include "entangle/propagators.hpp"

namespace entangle {

/// Complex Gaussian mode N exp[-aw (xi - c)^2 / (2 s2)] e^{i k xi} * phase.
struct GaussianMode {
    cdouble prefactor;   ///< normalization N
    double alpha_w;      ///< exponent weight aw
    double center;       ///< packet center c
    cdouble sigma_t_sq;  ///< complex squared width s2
    double wave_k;       ///< plane-wave wavenumber k
    cdouble phase;       ///< constant phase factor, |phase| = 1

    cdouble operator()(double xi) const {
        const double u = xi - center;
        return prefactor * phase *
               std::exp(-alpha_w * u * u / (2.0 * sigma_t_sq)) *
               std::polar(1.0, wave_k * xi);
    }
};

/// All descriptors of the separated asymptotic state at time t.
struct AsymptoticState {
    cdouble T;
    cdouble R;
    GaussianMode phi_plus, phi_minus;    ///< relative-coordinate factors
    GaussianMode Phi1_plus, Phi1_minus;  ///< particle-1 factors (minus = reflected)
    GaussianMode Phi2_plus, Phi2_minus;  ///< particle-2 factors
    bool in_validity_domain = false;     ///< t >= 2 t_c
};

inline AsymptoticState asymptotic_state(double t, const DerivedParams& d, const PhysParams& p) {
    if (!(t > 0.0)) throw DomainError("asymptotic_state: t must be positive");
    AsymptoticState st;
    const cdouble denom(p.q, -d.g);
    st.T = p.q / denom;
    st.R = cdouble(0.0, d.g) / denom;
    st.in_validity_domain = t >= 2.0 * d.t_c;

    const auto f = evolution_factors(t, p, d);
    const double a_t = p.a - d.v * t;          // residual separation of the centers
    const double alpha_sq = d.alpha * d.alpha;
    const cdouble half_phase = std::polar(1.0, -0.25 * p.q * d.v * t);

    st.phi_plus = {f.N_t * std::sqrt(d.alpha), alpha_sq, -a_t, f.sigma_t_sq, p.q,
                   half_phase * half_phase};
    st.phi_minus = st.phi_plus;
    st.phi_minus.center = a_t;
    st.phi_minus.wave_k = -p.q;

    st.Phi1_plus = {f.N_t * std::pow(d.alpha1, 0.25), d.alpha1, -d.alpha2 * a_t,
                    f.sigma_t_sq, p.q, half_phase};
    st.Phi1_minus = st.Phi1_plus;
    st.Phi1_minus.center = d.alpha2 * a_t;
    st.Phi1_minus.wave_k = -p.q;

    st.Phi2_plus = {f.N_t * std::pow(d.alpha2, 0.25), d.alpha2, d.alpha1 * a_t,
                    f.sigma_t_sq, -p.q, half_phase};
    st.Phi2_minus = st.Phi2_plus;
    st.Phi2_minus.center = -d.alpha1 * a_t;
    st.Phi2_minus.wave_k = p.q;

    return st;
}

/// T(q) phi_+ + R(q) phi_- : the closed-form relative wave function, accurate
/// for t >= ~2 t_c (see AsymptoticState::in_validity_domain).
inline cdouble approx_relative(double x, double t, const DerivedParams& d, const PhysParams& p) {
    const auto st = asymptotic_state(t, d, p);
    return st.T * free_relative_wavefunction(x, t, p, d) +
           st.R * free_relative_wavefunction(-x, t, p, d);
}

/// Product construction Phi_c(x0,t) * approx_relative(x,t). The separated
/// two-term form asymptotic_two_particle_separated agrees with this pointwise.
inline cdouble asymptotic_two_particle(double x1, double x2, double t,
                                       const DerivedParams& d, const PhysParams& p) {
    const auto cr = to_com_relative(x1, x2, d);
    return com_wavefunction(cr.x0, t, p, d) * approx_relative(cr.x, t, d, p);
}

/// T Phi1(x1) Phi2(x2) + R Phi1(-x1) Phi2(-x2) from the mode descriptors.
inline cdouble asymptotic_two_particle_separated(double x1, double x2, double t,
                                                 const DerivedParams& d, const PhysParams& p) {
    const auto st = asymptotic_state(t, d, p);
    return st.T * st.Phi1_plus(x1) * st.Phi2_plus(x2) +
           st.R * st.Phi1_minus(x1) * st.Phi2_minus(x2);
}

/// Closed-form asymptotic entropy
/// S = -(q^2/(q^2+g^2)) ln(q^2/(q^2+g^2)) - (g^2/(q^2+g^2)) ln(g^2/(q^2+g^2)).
inline double asymptotic_entropy(double q, double g) {
    if (!(q > 0.0)) throw DomainError("asymptotic_entropy: q must be positive");
    if (g == 0.0) return 0.0;
    const double t2 = q * q / (q * q + g * g);
    const double r2 = 1.0 - t2;
    return -(t2 * std::log(t2) + r2 * std::log(r2));
}

/// Analytic counterparts of the top-two particle-1 Schmidt modes, sampled on
/// a grid, with their weights (|T|^2, |R|^2).
struct AsymptoticModes {
    ComplexField1D Phi1_plus;
    ComplexField1D Phi1_minus;
    double weight_T2 = 1.0;
    double weight_R2 = 0.0;
};

inline AsymptoticModes asymptotic_schmidt_modes(double t, const DerivedParams& d,
                                                const PhysParams& p, const Grid1D& grid) {
    const auto st = asymptotic_state(t, d, p);
    AsymptoticModes m;
    m.Phi1_plus = ComplexField1D(grid);
    m.Phi1_minus = ComplexField1D(grid);
    for (int i = 0; i < grid.n; ++i) {
        m.Phi1_plus.values[i] = st.Phi1_plus(grid.point(i));
        m.Phi1_minus.values[i] = st.Phi1_minus(grid.point(i));
    }
    m.weight_T2 = std::norm(st.T);
    m.weight_R2 = std::norm(st.R);
    return m;
}

} // namespace entangle

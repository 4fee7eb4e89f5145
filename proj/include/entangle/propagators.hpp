#pragma once

// Single-coordinate propagators. The free kernel is the standard Gaussian
// with branch 1/sqrt(i) = e^{-i pi/4}. The exact delta-potential kernel is
//
//   K(x,y,t) = K0_mu(x,y,t) + (g/2) e^{i mu (|x|+|y|)^2 / (2 hbar t)} erfcx(u),
//   u = (|x|+|y|)/sqrt(2 i hbar t/mu) - g sqrt(i hbar t/(2 mu)),
//   g = mu V0 / hbar^2,  beta = i hbar t / (2 mu),
//
// valid for both attractive and repulsive coupling. Two post-collision
// approximations are provided: the two-term kernel obtained by replacing
// erfcx(u) with its leading 1/(sqrt(pi) u) behaviour in the y < 0 region
// (approx_propagator_k1), and the transmitted-plus-reflected form with
// time-dependent amplitudes c+-(t) (approx_propagator_k2).

#include <cmath>
#include <complex>

#include "entangle/erfcx.hpp"
#include "entangle/errors.hpp"
#include "entangle/model.hpp"

namespace entangle {

inline constexpr cdouble kExpMinusIPiQuarter{0.70710678118654752440, -0.70710678118654752440};
inline constexpr cdouble kExpPlusIPiQuarter{0.70710678118654752440, 0.70710678118654752440};

/// Auxiliary quantities of the exact delta kernel at one evaluation point.
struct DeltaKernelVars {
    double g;       ///< interaction wavenumber mu V0/hbar^2
    cdouble beta;   ///< i hbar t / (2 mu)
    cdouble u;      ///< erfcx argument
};

inline DeltaKernelVars delta_kernel_vars(double x, double y, double t,
                                         const DerivedParams& d, const PhysParams& p) {
    if (!(t > 0.0)) throw DomainError("delta_kernel_vars: t must be positive");
    const double r = std::abs(x) + std::abs(y);
    const double A = r / std::sqrt(2.0 * p.hbar * t / d.mu);
    const double B = -d.g * std::sqrt(p.hbar * t / (2.0 * d.mu));
    DeltaKernelVars v;
    v.g = d.g;
    v.beta = cdouble(0.0, p.hbar * t / (2.0 * d.mu));
    v.u = A * kExpMinusIPiQuarter + B * kExpPlusIPiQuarter;
    return v;
}

/// Free-particle kernel sqrt(m/(2 pi i hbar t)) exp[i m (x-y)^2/(2 hbar t)].
inline cdouble free_propagator(double x, double y, double t, double mass, double hbar = 1.0) {
    if (!(t > 0.0)) throw DomainError("free_propagator: t must be positive");
    const double amp = std::sqrt(mass / (2.0 * kPi * hbar * t));
    const double phase = mass * (x - y) * (x - y) / (2.0 * hbar * t);
    return amp * kExpMinusIPiQuarter * std::polar(1.0, phase);
}

/// Exact delta-potential kernel for the relative coordinate (mass mu).
inline cdouble delta_propagator(double x, double y, double t,
                                const DerivedParams& d, const PhysParams& p) {
    const cdouble k0 = free_propagator(x, y, t, d.mu, p.hbar);
    if (d.g == 0.0) return k0;
    const auto v = delta_kernel_vars(x, y, t, d, p);
    bool overflow = false;
    const cdouble w = specfun::erfcx(v.u, overflow);
    if (overflow) throw NumericalError("delta_propagator: erfcx overflow");
    const double r = std::abs(x) + std::abs(y);
    const cdouble osc = std::polar(1.0, d.mu * r * r / (2.0 * p.hbar * t));
    return k0 + 0.5 * d.g * osc * w;
}

/// Two-term post-collision kernel: free part plus the leading large-u term of
/// the interaction, with |y| -> -y (source packet localized at y < 0).
inline cdouble approx_propagator_k1(double x, double y, double t,
                                    const DerivedParams& d, const PhysParams& p) {
    const cdouble k0 = free_propagator(x, y, t, d.mu, p.hbar);
    if (d.g == 0.0) return k0;
    const cdouble beta(0.0, p.hbar * t / (2.0 * d.mu));
    const cdouble denom = (std::abs(x) - y) - 2.0 * d.g * beta;
    const double scale = std::abs(x) - y + std::abs(2.0 * d.g * beta);
    if (std::abs(denom) < 1e-12 * std::max(scale, 1.0))
        throw NumericalError("approx_propagator_k1: resonant denominator |x|-y-2g*beta ~ 0");
    const double r = std::abs(x) - y;
    const cdouble second =
        d.g * std::sqrt(beta) / (std::sqrt(kPi) * denom) * std::exp(-r * r / (4.0 * beta));
    return k0 + second;
}

/// Time-dependent transmitted/reflected amplitudes and their exact limits
/// T(q) = q/(q - i g), R(q) = i g/(q - i g).
struct ScatteringAmplitudes {
    cdouble c_plus;
    cdouble c_minus;
    cdouble T;
    cdouble R;
};

inline ScatteringAmplitudes amplitudes(double t, const DerivedParams& d, const PhysParams& p) {
    if (!(t > 0.0)) throw DomainError("amplitudes: t must be positive");
    ScatteringAmplitudes s;
    const cdouble denomTR(p.q, -d.g);
    s.T = p.q / denomTR;
    s.R = cdouble(0.0, d.g) / denomTR;
    if (d.g == 0.0) {
        s.c_minus = 0.0;
        s.c_plus = 1.0;
        return s;
    }
    // c_- = [ (|-a + v t| + a) / (i hbar t g / mu) - 1 ]^{-1},  v = hbar q / mu
    const double travel = std::abs(-p.a + d.v * t) + p.a;
    const cdouble i_htg_mu(0.0, p.hbar * t * d.g / d.mu);
    s.c_minus = 1.0 / (travel / i_htg_mu - 1.0);
    s.c_plus = 1.0 + s.c_minus;
    return s;
}

/// Transmitted-plus-reflected asymptotic kernel
/// sqrt(mu/(2 pi i hbar t)) [ c+ e^{i mu (x-y)^2/2 hbar t} + c- e^{i mu (x+y)^2/2 hbar t} ].
inline cdouble approx_propagator_k2(double x, double y, double t,
                                    const DerivedParams& d, const PhysParams& p) {
    const auto amps = amplitudes(t, d, p);
    const double amp = std::sqrt(d.mu / (2.0 * kPi * p.hbar * t));
    const double ph_minus = d.mu * (x - y) * (x - y) / (2.0 * p.hbar * t);
    const double ph_plus = d.mu * (x + y) * (x + y) / (2.0 * p.hbar * t);
    return amp * kExpMinusIPiQuarter *
           (amps.c_plus * std::polar(1.0, ph_minus) + amps.c_minus * std::polar(1.0, ph_plus));
}

} // namespace entangle

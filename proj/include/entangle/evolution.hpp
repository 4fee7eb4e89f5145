#pragma once

// Time evolution. The center-of-mass factor and the free part of the relative
// motion are spreading Gaussians in closed form; only the interaction term of
// the delta kernel is integrated numerically, against the initial relative
// packet, with a quadrature step chosen from the kernel's chirped phase.
//
// The full state is assembled as
//   Psi(x1,x2,t) = Phi_c(alpha1 x1 + alpha2 x2, t) * Phi_r(x1 - x2, t)
// on an n x n grid. Both axes share one spacing dx, so x1 - x2 always lands
// exactly on a uniform 1D "difference" grid and Phi_r is evaluated once per
// difference value.
//
// The relative wave function keeps a permanent derivative kink at x = 0 (the
// signature of the contact interaction) and, around the collision time,
// interference fringes at wavenumber ~2q. The difference grid is therefore
// refined by an integer factor so the fringes are resolved; the 2D assembly
// reads every RF-th sample, which keeps the exact-lookup property.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <thread>
#include <vector>

#include "entangle/errors.hpp"
#include "entangle/model.hpp"
#include "entangle/propagators.hpp"

namespace entangle {

/// Closed-form factors of the spreading center-of-mass Gaussian.
struct EvolutionFactors {
    cdouble sigma_t_sq;  ///< sigma^2 + i hbar t / m
    cdouble N_t;         ///< pi^{-1/4} (sigma + i hbar t / (m sigma))^{-1/2}
};

inline EvolutionFactors evolution_factors(double t, const PhysParams& p, const DerivedParams& d) {
    EvolutionFactors f;
    f.sigma_t_sq = cdouble(p.sigma * p.sigma, p.hbar * t / d.m);
    f.N_t = std::pow(kPi, -0.25) /
            std::sqrt(cdouble(p.sigma, p.hbar * t / (d.m * p.sigma)));
    return f;
}

/// Spreading center-of-mass packet Phi_c(x0,t) = N_t exp[-x0^2/(2 sigma_t^2)].
inline cdouble com_wavefunction(double x0, double t, const PhysParams& p, const DerivedParams& d) {
    if (t < 0.0) throw DomainError("com_wavefunction: t must be >= 0");
    const auto f = evolution_factors(t, p, d);
    return f.N_t * std::exp(-x0 * x0 / (2.0 * f.sigma_t_sq));
}

/// Free evolution of the initial relative packet (mass mu, width s = sigma/alpha,
/// center -a, wavenumber q): a spreading Gaussian moving at v = hbar q / mu.
inline cdouble free_relative_wavefunction(double x, double t,
                                          const PhysParams& p, const DerivedParams& d) {
    if (t < 0.0) throw DomainError("free_relative_wavefunction: t must be >= 0");
    const double s = p.sigma / d.alpha;
    const cdouble s_t_sq(s * s, p.hbar * t / d.mu);
    const double xi = x + p.a;
    const cdouble pref = std::pow(kPi, -0.25) * std::sqrt(s) / std::sqrt(s_t_sq);
    const cdouble gauss = std::exp(-(xi - d.v * t) * (xi - d.v * t) / (2.0 * s_t_sq));
    return pref * gauss * std::polar(1.0, p.q * x - 0.5 * p.q * d.v * t);
}

/// Quadrature controls for the interaction integral.
struct QuadratureSpec {
    double support_halfwidth = 0.0;   ///< W; 0 -> auto 8 sigma/alpha
    double dy = 0.0;                  ///< explicit spacing; 0 -> phase rule
    double phase_resolution = kPi / 8.0;  ///< max kernel phase advance per step
    double dy_scale = 1.0;            ///< diagnostic knob; >1 coarsens the rule
    double t_min_factor = 0.05;       ///< below t_min_factor * t_c use free form
    double norm_error_tol = 1e-2;     ///< |norm-1| beyond this -> NumericalError
    bool check_norm = true;           ///< disable for partial-grid evaluations
};

namespace detail {

template <typename F>
inline void run_chunked(std::size_t n, unsigned threads, F&& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(threads, std::thread::hardware_concurrency());
    for (unsigned k = 1; k < std::max(1u, count); ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

} // namespace detail

/// Evolve the relative packet to time t on x_grid: closed-form free part plus
/// trapezoid quadrature of the interaction term of the exact delta kernel over
/// the initial packet's support y in [-a-W, min(-a+W, 0)].
///
/// Each grid point's quadrature is summed in a fixed order, so results are
/// bitwise independent of n_threads.
inline ComplexField1D relative_evolve(const Grid1D& x_grid, double t,
                                      const PhysParams& p, const DerivedParams& d,
                                      const QuadratureSpec& spec = {},
                                      unsigned n_threads = 1) {
    if (t < 0.0) throw DomainError("relative_evolve: t must be >= 0");
    ComplexField1D out(x_grid);
    for (int i = 0; i < x_grid.n; ++i)
        out.values[i] = free_relative_wavefunction(x_grid.point(i), t, p, d);

    const bool interacting = d.g != 0.0 && t >= spec.t_min_factor * d.t_c && t > 0.0;
    if (interacting) {
        const double W = spec.support_halfwidth > 0.0 ? spec.support_halfwidth
                                                      : 8.0 * p.sigma / d.alpha;
        const double y_lo = -p.a - W;
        const double y_hi = std::min(-p.a + W, 0.0);
        double x_abs_max = std::max(std::abs(x_grid.x_min), std::abs(x_grid.x_max));
        const double k_max = d.mu * (x_abs_max + p.a + W) / (p.hbar * t) + p.q;
        double dy = spec.dy > 0.0 ? spec.dy : spec.phase_resolution / k_max;
        dy *= spec.dy_scale;
        const int ny = static_cast<int>(std::ceil((y_hi - y_lo) / dy)) + 1;
        const double dy_actual = (y_hi - y_lo) / (ny - 1);

        std::vector<double> ys(ny);
        std::vector<cdouble> fy(ny);
        for (int j = 0; j < ny; ++j) {
            ys[j] = y_lo + j * dy_actual;
            const double w = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
            fy[j] = initial_relative(ys[j], d, p) * (w * dy_actual);
        }

        const double inv2ht = d.mu / (2.0 * p.hbar * t);
        const double cA = 1.0 / std::sqrt(2.0 * p.hbar * t / d.mu);
        const double B = -d.g * std::sqrt(p.hbar * t / (2.0 * d.mu));
        const cdouble b_term = B * kExpPlusIPiQuarter;
        std::atomic<bool> overflowed{false};

        detail::run_chunked(static_cast<std::size_t>(x_grid.n), n_threads, [&](std::size_t i) {
            const double ax = std::abs(x_grid.point(static_cast<int>(i)));
            cdouble acc = 0.0;
            bool ovf = false;
            for (int j = 0; j < ny; ++j) {
                const double r = ax - ys[j];  // y <= 0 on the whole range
                const cdouble u = (r * cA) * kExpMinusIPiQuarter + b_term;
                const cdouble w = specfun::erfcx(u, ovf);
                acc += std::polar(1.0, inv2ht * r * r) * w * fy[j];
            }
            if (ovf) overflowed.store(true);
            out.values[i] += 0.5 * d.g * acc;
        });
        if (overflowed.load())
            throw NumericalError("relative_evolve: erfcx overflow in interaction quadrature");

        if (spec.check_norm) {
            const double nrm = trapezoid_norm(out);
            if (std::abs(nrm - 1.0) > spec.norm_error_tol) {
                char buf[256];
                std::snprintf(buf, sizeof(buf),
                              "relative_evolve: quadrature failure, |norm-1| = %.3e at t = %g "
                              "(dy = %.3e, %d points; refine dy or phase_resolution)",
                              std::abs(nrm - 1.0), t, dy_actual, ny);
                throw NumericalError(buf);
            }
        }
    }
    return out;
}

/// Evolved two-particle state plus diagnostics.
struct TwoParticleState {
    ComplexField2D psi;
    ComplexField1D phi_r;      ///< relative wave function on the refined difference grid
    int refinement = 1;        ///< phi_r grid spacing is dx / refinement
    double norm2d = 0.0;       ///< trapezoid norm of psi
    double relative_norm = 0.0;  ///< trapezoid norm of phi_r on its own grid
};

/// Integer refinement factor so the difference grid resolves the ~2q
/// interference fringes of the colliding packets.
inline int difference_refinement(const Grid1D& grid, const PhysParams& p) {
    const double target = kPi / (16.0 * p.q);
    return std::max(1, static_cast<int>(std::ceil(grid.dx() / target)));
}

inline TwoParticleState evolve_two_particle_state(const Grid1D& grid, double t,
                                                  const PhysParams& p, const DerivedParams& d,
                                                  const QuadratureSpec& spec = {},
                                                  unsigned n_threads = 1) {
    if (t < 0.0) throw DomainError("two-particle evolution: t must be >= 0");
    TwoParticleState st;
    const int n = grid.n;
    const int rf = difference_refinement(grid, p);
    st.refinement = rf;

    const Grid1D diff = difference_grid(grid);
    const Grid1D fine(diff.x_min, diff.x_max, rf * (2 * n - 2) + 1);
    st.phi_r = relative_evolve(fine, t, p, d, spec, n_threads);
    st.relative_norm = trapezoid_norm(st.phi_r);

    st.psi = ComplexField2D(grid, grid);
    detail::run_chunked(static_cast<std::size_t>(n), n_threads, [&](std::size_t row) {
        const int i = static_cast<int>(row);
        const double x1 = grid.point(i);
        for (int j = 0; j < n; ++j) {
            const double x0 = d.alpha1 * x1 + d.alpha2 * grid.point(j);
            const cdouble phir = st.phi_r.values[static_cast<std::size_t>(rf) * (i - j + n - 1)];
            st.psi.at(i, j) = com_wavefunction(x0, t, p, d) * phir;
        }
    });
    st.norm2d = trapezoid_norm(st.psi);
    if (spec.check_norm && std::abs(st.norm2d - 1.0) > 1e-2) {
        char buf[192];
        std::snprintf(buf, sizeof(buf),
                      "two-particle state: 2D norm %.6f deviates beyond 1e-2 at t = %g "
                      "(grid too coarse or too small)",
                      st.norm2d, t);
        throw NumericalError(buf);
    }
    return st;
}

/// Psi(x1,x2,t) on grid x grid (see evolve_two_particle_state for diagnostics).
inline ComplexField2D two_particle_wavefunction(const Grid1D& grid, double t,
                                                const PhysParams& p, const DerivedParams& d,
                                                const QuadratureSpec& spec = {},
                                                unsigned n_threads = 1) {
    return evolve_two_particle_state(grid, t, p, d, spec, n_threads).psi;
}

} // namespace entangle

#pragma once

// Self-validation: one pass/fail line per internal consistency check, with
// measured residuals. Covers the erfcx route agreements, propagator
// reductions and symmetries, norm conservation, the SVD / reduced-density
// route equivalence and the separability identities.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "entangle/asymptotics.hpp"
#include "entangle/config.hpp"
#include "entangle/parallel.hpp"
#include "entangle/erfcx.hpp"
#include "entangle/evolution.hpp"
#include "entangle/model.hpp"
#include "entangle/propagators.hpp"
#include "entangle/schmidt.hpp"

namespace entangle {

struct ValidationCheck {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

template <typename F>
inline void run_check(ValidationReport& rep, const std::string& name, double tol, F&& body) {
    ValidationCheck c;
    c.name = name;
    c.tolerance = tol;
    try {
        c.residual = body();
        c.pass = c.residual <= tol;
    } catch (const std::exception& e) {
        c.residual = std::numeric_limits<double>::infinity();
        c.pass = false;
        c.note = e.what();
    }
    rep.checks.push_back(std::move(c));
}

/// Sample points of the erfcx overlap annulus 3 <= |z| <= 6 together with the
/// routes valid there. Returns the worst pairwise relative disagreement.
inline double erfcx_overlap_residual() {
    using namespace specfun;
    static const int degrees[] = {0, 10, 20, 30, 40, 50, 60, 70, 80, 85, 88, 89, 90};
    double worst = 0.0;
    for (double r : {3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0}) {
        for (int deg : degrees) {
            const double ph = deg * kPi_ / 180.0;
            for (int sgn : {+1, -1}) {
                const cdouble z = std::polar(r, sgn * ph);
                auto quadrant = [&](cdouble (*route)(cdouble)) {
                    const cdouble zq = z.imag() < 0 ? std::conj(z) : z;
                    const cdouble v = route(zq);
                    return z.imag() < 0 ? std::conj(v) : v;
                };
                std::vector<cdouble> vals;
                if (r <= kSeriesValidRadius) vals.push_back(erfcx_series(z));
                if (std::abs(z.real()) >= 1e-6) vals.push_back(quadrant(erfcx_pole_sum));
                if (deg <= 85) vals.push_back(erfcx_cf(z, 5000));
                if (z.real() <= 0.8) vals.push_back(quadrant(erfcx_near_axis));
                for (std::size_t i = 0; i < vals.size(); ++i)
                    for (std::size_t j = i + 1; j < vals.size(); ++j)
                        worst = std::max(worst,
                                         std::abs(vals[i] - vals[j]) / std::abs(vals[j]));
            }
        }
    }
    return worst;
}

} // namespace detail

/// Execute the full invariant suite for the configured parameters.
inline ValidationReport run_validation(const RunConfig& cfg) {
    validate(cfg);
    const auto& p = cfg.params;
    const auto d = derive(p);
    ValidationReport rep;
    std::mt19937_64 rng(20240901);

    using detail::run_check;

    run_check(rep, "erfcx(0) = 1", 1e-15,
              [&] { return std::abs(specfun::erfcx(cdouble(0.0)) - 1.0); });

    run_check(rep, "erfcx reflection identity", 1e-9, [&] {
        std::uniform_real_distribution<double> ur(0.1, 5.0), uph(0.0, 2.0 * kPi);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const cdouble z = std::polar(ur(rng), uph(rng));
            const cdouble lhs = specfun::erfcx(-z);
            const cdouble rhs = 2.0 * std::exp(z * z) - specfun::erfcx(z);
            // scale of the identity's terms; stays sane near erfc zeros
            const double scale = 2.0 * std::abs(std::exp(z * z)) + std::abs(specfun::erfcx(z));
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
        return worst;
    });

    run_check(rep, "erfcx conjugation symmetry", 1e-14, [&] {
        std::uniform_real_distribution<double> ur(0.05, 40.0), uph(-kPi, kPi);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const cdouble z = std::polar(ur(rng), uph(rng));
            const cdouble a = specfun::erfcx(std::conj(z));
            const cdouble b = std::conj(specfun::erfcx(z));
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
        return worst;
    });

    run_check(rep, "erfcx route agreement on overlap annulus", 1e-10,
              [&] { return detail::erfcx_overlap_residual(); });

    run_check(rep, "delta kernel reduces to free kernel at g = 0", 1e-14, [&] {
        PhysParams pf = p;
        pf.v0 = 0.0;
        const auto df = derive(pf);
        std::uniform_real_distribution<double> ux(-15.0, 15.0);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double x = ux(rng), y = ux(rng);
            const cdouble kd = delta_propagator(x, y, 0.7 * d.t_c, df, pf);
            const cdouble kf = free_propagator(x, y, 0.7 * d.t_c, df.mu, pf.hbar);
            worst = std::max(worst, std::abs(kd - kf) / std::abs(kf));
        }
        return worst;
    });

    run_check(rep, "kernel exchange symmetry K(x,y) = K(y,x)", 1e-13, [&] {
        std::uniform_real_distribution<double> ux(-12.0, 12.0);
        double worst = 0.0;
        for (int i = 0; i < 60; ++i) {
            const double x = ux(rng), y = ux(rng), t = 1.3 * d.t_c;
            const cdouble a = delta_propagator(x, y, t, d, p);
            const cdouble b = delta_propagator(y, x, t, d, p);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
            const cdouble a2 = approx_propagator_k2(x, y, t, d, p);
            const cdouble b2 = approx_propagator_k2(y, x, t, d, p);
            worst = std::max(worst, std::abs(a2 - b2) / std::abs(b2));
        }
        return worst;
    });

    run_check(rep, "amplitudes: c+ - c- = 1 and |T|^2 + |R|^2 = 1", 1e-14, [&] {
        double worst = 0.0;
        for (double f : {0.5, 1.0, 2.0, 10.0, 100.0}) {
            const auto s = amplitudes(f * d.t_c, d, p);
            worst = std::max(worst, std::abs(s.c_plus - s.c_minus - 1.0));
            worst = std::max(worst, std::abs(std::norm(s.T) + std::norm(s.R) - 1.0));
        }
        return worst;
    });

    run_check(rep, "derived-parameter identities", 1e-14, [&] {
        double worst = std::abs(d.alpha1 + d.alpha2 - 1.0);
        worst = std::max(worst, std::abs(d.alpha * d.alpha - d.alpha1 * d.alpha2));
        worst = std::max(worst, std::abs(d.a1 + d.a2 - p.a) / p.a);
        worst = std::max(worst, std::abs(d.t_c * d.v - p.a) / p.a);
        return worst;
    });

    run_check(rep, "initial product state separates in (x0, x)", 1e-12, [&] {
        std::uniform_real_distribution<double> ux(-3.0, 3.0);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double x1 = -d.a1 + ux(rng) * p.sigma, x2 = d.a2 + ux(rng) * p.sigma;
            const auto cr = to_com_relative(x1, x2, d);
            const cdouble prod = initial_particle1(x1, d, p) * initial_particle2(x2, d, p);
            const cdouble comrel =
                initial_com(cr.x0, d, p) * initial_relative(cr.x, d, p);
            worst = std::max(worst, std::abs(prod - comrel) / std::abs(comrel));
        }
        return worst;
    });

    run_check(rep, "center-of-mass packet norm at 2 t_c", 1e-8, [&] {
        const auto grid = run_grid(cfg, d);
        ComplexField1D f(grid);
        for (int i = 0; i < grid.n; ++i)
            f.values[i] = com_wavefunction(grid.point(i), 2.0 * d.t_c, p, d);
        return std::abs(trapezoid_norm(f) - 1.0);
    });

    QuadratureSpec spec;
    spec.dy_scale = cfg.dy_scale;

    run_check(rep, "relative-packet norm at t_c", 1e-3, [&] {
        const auto grid = run_grid(cfg, d);
        const int rf = difference_refinement(grid, p);
        const Grid1D diff = difference_grid(grid);
        const Grid1D fine(diff.x_min, diff.x_max, rf * (2 * grid.n - 2) + 1);
        const auto f = relative_evolve(fine, d.t_c, p, d, spec);
        return std::abs(trapezoid_norm(f) - 1.0);
    });

    run_check(rep, "two-particle norm at t_c", 1e-2, [&] {
        const auto grid = run_grid(cfg, d);
        const auto st = evolve_two_particle_state(grid, d.t_c, p, d, spec,
                                                  worker_count(cfg.threads));
        return std::abs(st.norm2d - 1.0);
    });

    run_check(rep, "quadrature refinement self-consistency at t_c", 1e-4, [&] {
        const auto grid = run_grid(cfg, d);
        const int rf = difference_refinement(grid, p);
        const Grid1D diff = difference_grid(grid);
        const Grid1D fine(diff.x_min, diff.x_max, rf * (2 * grid.n - 2) + 1);
        QuadratureSpec half = spec;
        half.dy_scale = 0.5 * spec.dy_scale;
        half.check_norm = false;
        QuadratureSpec loose = spec;
        loose.check_norm = false;
        const auto f1 = relative_evolve(fine, d.t_c, p, d, loose);
        const auto f2 = relative_evolve(fine, d.t_c, p, d, half);
        double l2 = 0.0;
        for (int i = 0; i < fine.n; ++i) l2 += std::norm(f1.values[i] - f2.values[i]);
        return std::sqrt(l2 * fine.dx());
    });

    run_check(rep, "Schmidt spectrum: SVD vs reduced-density routes", 1e-8, [&] {
        const auto grid = run_grid(cfg, d);
        const auto st = evolve_two_particle_state(grid, d.t_c, p, d, spec,
                                                  worker_count(cfg.threads));
        SchmidtOptions so;
        so.max_modes = 0;
        const auto sp = schmidt(st.psi, so);
        double worst = 0.0;
        for (int sub : {1, 2}) {
            const auto ev = reduced_density_eigenvalues(st.psi, sub);
            for (std::size_t k = 0; k < std::min<std::size_t>(8, sp.p.size()); ++k)
                worst = std::max(worst, std::abs(ev[k] - sp.p[k]));
        }
        return worst;
    });

    run_check(rep, "entropy symmetry between subsystems", 1e-8, [&] {
        const auto grid = run_grid(cfg, d);
        const auto st = evolve_two_particle_state(grid, 1.5 * d.t_c, p, d, spec,
                                                  worker_count(cfg.threads));
        const auto e1 = reduced_density_eigenvalues(st.psi, 1);
        const auto e2 = reduced_density_eigenvalues(st.psi, 2);
        return std::abs(entropy(e1) - entropy(e2));
    });

    run_check(rep, "asymptotic product form separates into two terms", 1e-10, [&] {
        std::uniform_real_distribution<double> ux(-20.0, 20.0);
        const double t = 2.0 * d.t_c;
        double scale = 0.0, worst = 0.0;
        std::vector<std::pair<cdouble, cdouble>> vals;
        for (int i = 0; i < 300; ++i) {
            const double x1 = ux(rng), x2 = ux(rng);
            const cdouble a = asymptotic_two_particle(x1, x2, t, d, p);
            const cdouble b = asymptotic_two_particle_separated(x1, x2, t, d, p);
            vals.emplace_back(a, b);
            scale = std::max(scale, std::abs(a));
        }
        for (const auto& [a, b] : vals)
            worst = std::max(worst, std::abs(a - b) / scale);
        return worst;
    });

    run_check(rep, "two-term entropy equals closed-form asymptotic entropy", 1e-12, [&] {
        const cdouble T = p.q / cdouble(p.q, -d.g);
        const std::vector<double> w = {std::norm(T), 1.0 - std::norm(T)};
        return std::abs(entropy(w) - asymptotic_entropy(p.q, d.g));
    });

    return rep;
}

} // namespace entangle

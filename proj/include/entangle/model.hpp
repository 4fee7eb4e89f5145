#pragma once

// Physical parameters, derived quantities, grids and the initial two-particle
// Gaussian product state for a 1D collision through a contact (delta)
// interaction. Everything here is a pure function of its inputs.
//
// Conventions (atomic-style units, hbar configurable):
//   H = P1^2/2m1 + P2^2/2m2 - V0 delta(X1 - X2),   V0 > 0 attractive.
//   Center of mass / relative coordinates:
//     x0 = alpha1 x1 + alpha2 x2,   x = x1 - x2,   alpha_i = m_i/m.
//   The initial packets sit at -a1 = -alpha2 a (particle 1) and
//   a2 = alpha1 a (particle 2) with opposite mean momenta +-hbar q, so the
//   total momentum vanishes and <X0> = 0 for all times.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "entangle/errors.hpp"

namespace entangle {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Physical inputs. V0 > 0 is attractive, V0 < 0 repulsive.
struct PhysParams {
    double m1 = 1.0;     ///< mass of particle 1
    double m2 = 1.0;     ///< mass of particle 2
    double v0 = -5.0;    ///< delta-potential strength
    double a = 10.0;     ///< initial mean separation
    double q = 5.0;      ///< initial relative wavenumber
    double sigma = 0.5;  ///< width parameter of the Gaussian packets
    double hbar = 1.0;
};

/// All quantities derived from PhysParams that the rest of the library uses.
struct DerivedParams {
    double m;       ///< total mass m1 + m2
    double mu;      ///< reduced mass m1 m2 / m
    double alpha1;  ///< m1/m
    double alpha2;  ///< m2/m
    double alpha;   ///< sqrt(alpha1 alpha2)
    double g;       ///< interaction wavenumber mu V0 / hbar^2
    double a1;      ///< alpha2 * a (initial |center| of particle 1)
    double a2;      ///< alpha1 * a
    double v;       ///< relative packet speed hbar q / mu
    double t_c;     ///< classical collision time a / v = mu a / (hbar q)
    double u1;      ///< particle-1 speed hbar q / m1
    double u2;      ///< particle-2 speed hbar q / m2
};

inline void validate(const PhysParams& p) {
    if (!(p.m1 > 0.0) || !(p.m2 > 0.0))
        throw ParameterError("masses must be positive");
    if (!(p.sigma > 0.0)) throw ParameterError("sigma must be positive");
    if (!(p.a > 0.0)) throw ParameterError("separation a must be positive");
    if (!(p.q > 0.0)) throw ParameterError("wavenumber q must be positive");
    if (!(p.hbar > 0.0)) throw ParameterError("hbar must be positive");
    if (!std::isfinite(p.v0)) throw ParameterError("v0 must be finite");
}

/// Non-fatal issues: the asymptotic picture assumes packets that start far
/// apart compared to the relative width sigma/alpha.
inline std::vector<std::string> validation_warnings(const PhysParams& p) {
    std::vector<std::string> w;
    const double m = p.m1 + p.m2;
    const double alpha = std::sqrt(p.m1 * p.m2) / m;
    if (p.a < 4.0 * p.sigma / alpha)
        w.push_back("a < 4*sigma/alpha: packets overlap initially; the "
                    "far-separated-packet assumption degrades");
    return w;
}

inline DerivedParams derive(const PhysParams& p) {
    validate(p);
    DerivedParams d;
    d.m = p.m1 + p.m2;
    d.mu = p.m1 * p.m2 / d.m;
    d.alpha1 = p.m1 / d.m;
    d.alpha2 = p.m2 / d.m;
    d.alpha = std::sqrt(d.alpha1 * d.alpha2);
    d.g = d.mu * p.v0 / (p.hbar * p.hbar);
    d.a1 = d.alpha2 * p.a;
    d.a2 = d.alpha1 * p.a;
    d.v = p.hbar * p.q / d.mu;
    d.t_c = p.a / d.v;
    d.u1 = p.hbar * p.q / p.m1;
    d.u2 = p.hbar * p.q / p.m2;
    return d;
}

struct ComRelative {
    double x0;  ///< center-of-mass coordinate
    double x;   ///< relative coordinate x1 - x2
};

inline ComRelative to_com_relative(double x1, double x2, const DerivedParams& d) {
    return {d.alpha1 * x1 + d.alpha2 * x2, x1 - x2};
}

struct ParticlePair {
    double x1;
    double x2;
};

inline ParticlePair from_com_relative(double x0, double x, const DerivedParams& d) {
    return {x0 + d.alpha2 * x, x0 - d.alpha1 * x};
}

/// Normalized center-of-mass Gaussian at t = 0 (real and positive).
inline cdouble initial_com(double x0, const DerivedParams&, const PhysParams& p) {
    const double s = p.sigma;
    return std::pow(kPi, -0.25) / std::sqrt(s) * std::exp(-x0 * x0 / (2.0 * s * s));
}

/// Normalized relative packet at t = 0: Gaussian centered at x = -a carrying
/// plane-wave factor e^{iqx}.
inline cdouble initial_relative(double x, const DerivedParams& d, const PhysParams& p) {
    const double s = p.sigma;
    const double env = std::exp(-d.alpha * d.alpha * (x + p.a) * (x + p.a) / (2.0 * s * s));
    const double amp = std::sqrt(d.alpha / s) * std::pow(kPi, -0.25) * env;
    return amp * std::polar(1.0, p.q * x);
}

/// Single-particle factors of the initial product state.
inline cdouble initial_particle1(double x1, const DerivedParams& d, const PhysParams& p) {
    const double s = p.sigma;
    const double env = std::exp(-d.alpha1 * (x1 + d.a1) * (x1 + d.a1) / (2.0 * s * s));
    const double amp = std::pow(d.alpha1, 0.25) / std::sqrt(s * std::sqrt(kPi)) * env;
    return amp * std::polar(1.0, p.q * x1);
}

inline cdouble initial_particle2(double x2, const DerivedParams& d, const PhysParams& p) {
    const double s = p.sigma;
    const double env = std::exp(-d.alpha2 * (x2 - d.a2) * (x2 - d.a2) / (2.0 * s * s));
    const double amp = std::pow(d.alpha2, 0.25) / std::sqrt(s * std::sqrt(kPi)) * env;
    return amp * std::polar(1.0, -p.q * x2);
}

/// Uniform 1D grid, endpoints inclusive.
struct Grid1D {
    double x_min = -1.0;
    double x_max = 1.0;
    int n = 2;

    Grid1D() = default;
    Grid1D(double lo, double hi, int count) : x_min(lo), x_max(hi), n(count) {
        if (n < 2) throw ParameterError("grid needs at least 2 points");
        if (!(x_max > x_min)) throw ParameterError("grid extent must be positive");
    }

    static Grid1D symmetric(double half_extent, int count) {
        return Grid1D(-half_extent, half_extent, count);
    }

    double dx() const { return (x_max - x_min) / (n - 1); }
    double point(int i) const { return x_min + i * dx(); }
};

/// Difference grid: all values x1_i - x2_j for points of `g`, i.e. 2n-1
/// uniform points spanning [x_min - x_max, x_max - x_min] with the same dx.
inline Grid1D difference_grid(const Grid1D& g) {
    return Grid1D(g.x_min - g.x_max, g.x_max - g.x_min, 2 * g.n - 1);
}

struct ComplexField1D {
    Grid1D grid;
    std::vector<cdouble> values;

    ComplexField1D() = default;
    explicit ComplexField1D(const Grid1D& g) : grid(g), values(g.n) {}

    void check() const {
        if (static_cast<int>(values.size()) != grid.n)
            throw ParameterError("field size does not match grid");
    }
};

/// Trapezoid L2 norm of a sampled field.
inline double trapezoid_norm(const ComplexField1D& f) {
    double s = 0.0;
    const std::size_t n = f.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        s += w * std::norm(f.values[i]);
    }
    return std::sqrt(s * f.grid.dx());
}

/// Trapezoid inner product <f|g> = integral conj(f) g dx (shared grid).
inline cdouble inner_product(const ComplexField1D& f, const ComplexField1D& g) {
    if (f.values.size() != g.values.size())
        throw ParameterError("inner product needs matching grids");
    cdouble s = 0.0;
    const std::size_t n = f.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        s += w * std::conj(f.values[i]) * g.values[i];
    }
    return s * f.grid.dx();
}

struct ComplexField2D {
    Grid1D grid1;  ///< particle-1 axis (rows)
    Grid1D grid2;  ///< particle-2 axis (columns)
    std::vector<cdouble> values;  ///< row-major n1 x n2

    ComplexField2D() = default;
    ComplexField2D(const Grid1D& g1, const Grid1D& g2)
        : grid1(g1), grid2(g2), values(static_cast<std::size_t>(g1.n) * g2.n) {
        if (std::abs(g1.dx() - g2.dx()) > 1e-12 * g1.dx())
            throw ParameterError("2D field requires identical spacing on both axes");
    }

    cdouble& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid2.n + j]; }
    cdouble at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid2.n + j]; }
};

inline double trapezoid_norm(const ComplexField2D& f) {
    double s = 0.0;
    for (int i = 0; i < f.grid1.n; ++i) {
        const double wi = (i == 0 || i + 1 == f.grid1.n) ? 0.5 : 1.0;
        double row = 0.0;
        for (int j = 0; j < f.grid2.n; ++j) {
            const double wj = (j == 0 || j + 1 == f.grid2.n) ? 0.5 : 1.0;
            row += wj * std::norm(f.at(i, j));
        }
        s += wi * row;
    }
    return std::sqrt(s * f.grid1.dx() * f.grid2.dx());
}

/// Default symmetric grid half-extent for a run up to t_max: the largest
/// classical packet-center excursion of either particle plus six spreading
/// widths. Packet j starts at -+a_j and moves with speed u_j, so its center
/// stays within max(a_j, |u_j t_max - a_j|).
inline double default_grid_extent(const PhysParams& p, const DerivedParams& d, double t_max) {
    const double spread =
        std::sqrt(p.sigma * p.sigma +
                  (p.hbar * t_max) * (p.hbar * t_max) / (p.sigma * p.sigma * d.m * d.m)) /
        std::sqrt(std::min(d.alpha1, d.alpha2));
    double excursion = 0.0;
    excursion = std::max(excursion, std::max(d.a1, std::abs(d.u1 * t_max - d.a1)));
    excursion = std::max(excursion, std::max(d.a2, std::abs(d.u2 * t_max - d.a2)));
    return excursion + 6.0 * spread;
}

} // namespace entangle
